"""Build script: compiles the optional Cython kernels.

The package is fully functional without the compiled extensions (a pure
NumPy/Python fallback is selected at import time), so any failure while
building them is demoted to a warning instead of aborting the install.
Set FOLLOWDROP_SKIP_EXT=1 to skip compilation entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

KERNEL_SOURCES = {
    "followdrop._kernels._gibbs": "src/followdrop/_kernels/_gibbs.pyx",
    "followdrop._kernels._pvdbow": "src/followdrop/_kernels/_pvdbow.pyx",
    "followdrop._kernels._graph": "src/followdrop/_kernels/_graph.pyx",
}

# -ffp-contract=off keeps the C arithmetic bit-compatible with the NumPy
# fallback (no FMA contraction), which the kernel parity tests rely on.
COMPILE_ARGS = ["-O3", "-ffp-contract=off"]


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            warnings.warn(f"skipping compiled kernels: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}: {exc}")


def extensions():
    if cythonize is None or os.environ.get("FOLLOWDROP_SKIP_EXT", "") not in ("", "0"):
        return []
    exts = [
        Extension(name, [src], extra_compile_args=COMPILE_ARGS)
        for name, src in KERNEL_SOURCES.items()
    ]
    return cythonize(
        exts,
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
