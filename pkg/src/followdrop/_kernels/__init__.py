"""Hot-loop kernels with compiled and pure-Python implementations.

Each kernel family (Gibbs sweeps, PV-DBOW updates, path centrality)
prefers its compiled extension and falls back to the Python version
when the extension is unavailable.  Set FOLLOWDROP_PURE_PYTHON=1 to
force the fallbacks regardless of what was built.

Drivers pre-draw every random number in Python and pass them in as
arrays, so backend choice never changes the random stream.
"""

from __future__ import annotations

import os

from followdrop._kernels import gibbs_py, graph_py, pvdbow_py

_FORCE_PURE = os.environ.get("FOLLOWDROP_PURE_PYTHON", "") not in ("", "0")

_gibbs_mod = gibbs_py
_pvdbow_mod = pvdbow_py
_graph_mod = graph_py

if not _FORCE_PURE:
    try:
        from followdrop._kernels import _gibbs as _gibbs_mod  # type: ignore[no-redef]
    except ImportError:
        pass
    try:
        from followdrop._kernels import _pvdbow as _pvdbow_mod  # type: ignore[no-redef]
    except ImportError:
        pass
    try:
        from followdrop._kernels import _graph as _graph_mod  # type: ignore[no-redef]
    except ImportError:
        pass

gibbs_train_sweep = _gibbs_mod.gibbs_train_sweep
gibbs_infer_sweep = _gibbs_mod.gibbs_infer_sweep
pvdbow_epoch = _pvdbow_mod.pvdbow_epoch
pvdbow_infer_epoch = _pvdbow_mod.pvdbow_infer_epoch
brandes_centrality = _graph_mod.brandes_centrality


def backend_info() -> dict:
    """Which implementation each kernel family resolved to."""

    def _kind(mod) -> str:
        return "python" if mod.__name__.endswith("_py") else "compiled"

    return {
        "gibbs": _kind(_gibbs_mod),
        "pvdbow": _kind(_pvdbow_mod),
        "graph": _kind(_graph_mod),
    }


BACKEND = ("compiled" if all(v == "compiled" for v in backend_info().values())
           else "python" if all(v == "python" for v in backend_info().values())
           else "mixed")
