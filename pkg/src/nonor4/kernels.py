"""Backend selection for the inner loops.

The compiled ``_speedups`` extension is used when it was built; otherwise
the pure-Python reference implementation is used.  Setting the
environment variable ``NONOR4_PURE_PYTHON=1`` forces the fallback.
"""

import os
from types import ModuleType

from . import _kernels_py


def _load_compiled() -> ModuleType | None:
    try:
        from . import _speedups
    except ImportError:
        return None
    return _speedups


_compiled = _load_compiled()

if _compiled is not None and os.environ.get("NONOR4_PURE_PYTHON", "") in ("", "0"):
    _impl = _compiled
    BACKEND = "cython"
else:
    _impl = _kernels_py
    BACKEND = "python"

arf_ones = _impl.arf_ones
residue_counts = _impl.residue_counts
coset_min = _impl.coset_min


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out
