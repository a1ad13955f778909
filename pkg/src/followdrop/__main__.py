import sys

from followdrop.cli import main

sys.exit(main())
