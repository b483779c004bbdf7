"""Hot evaluation kernels with backend selection at import.

The compiled Cython extension is preferred; the numpy reference kernels
are the fallback. Setting SINELAW_PURE=1 in the environment forces the
fallback (used by the benchmark and for debugging).
"""

import os

from . import pure as _pure

if os.environ.get("SINELAW_PURE"):
    _impl = _pure
else:
    try:
        from . import _cyk as _impl
    except ImportError:
        _impl = _pure

j0 = _impl.j0
j1 = _impl.j1
j0_array = _impl.j0_array
BACKEND = _impl.BACKEND


def get_backend(name):
    """Return the kernel module for 'pure' or 'cython' (benchmarking)."""
    if name == "pure":
        return _pure
    if name == "cython":
        from . import _cyk
        return _cyk
    raise ValueError(f"unknown kernel backend {name!r}")
