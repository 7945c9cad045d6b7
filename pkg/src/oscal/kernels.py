"""Backend selection for the tridiagonal kernels.

The compiled extension is used when it imports; set ``OSCAL_PURE_PYTHON=1``
to force the pure-Python fallback. ``BACKEND`` names the active one.
"""
import os

from . import _pykernels

if os.environ.get("OSCAL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

tql_implicit = _impl.tql_implicit
sturm_count = _impl.sturm_count
bisect_lowest = _impl.bisect_lowest
tridiag_solve = _impl.tridiag_solve


def get_backend(name):
    """Return the kernel module for ``"compiled"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
