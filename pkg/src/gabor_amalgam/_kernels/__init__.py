"""Kernel dispatch: compiled extension when available, NumPy otherwise.

Set GABOR_AMALGAM_KERNELS=numpy to force the fallback (or =cython to insist
on the extension); this is how the benchmark pits one against the other.
"""

import os

from . import _np_kernels

_choice = os.environ.get("GABOR_AMALGAM_KERNELS", "auto").strip().lower()

if _choice in ("auto", "", "cython"):
    try:
        from . import _cy_kernels as _impl

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        _impl = _np_kernels
        BACKEND = "numpy"
elif _choice == "numpy":
    _impl = _np_kernels
    BACKEND = "numpy"
else:
    raise ValueError(f"GABOR_AMALGAM_KERNELS={_choice!r} is not one of auto/cython/numpy")

apply_shift_terms = _impl.apply_shift_terms
compose_shift_terms = _impl.compose_shift_terms
