"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the NumPy
fallback is loaded. Setting ``BENFORD_LAPLACE_PURE=1`` forces the fallback.
"""

import os

if os.environ.get("BENFORD_LAPLACE_PURE", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

from . import _kernels_py as python_backend

BACKEND = _impl.BACKEND
htilde = _impl.htilde
significant_digits = _impl.significant_digits
digit_histogram = _impl.digit_histogram


def compiled_backend():
    """Return the compiled kernel module, or None when it is not available."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


__all__ = ["BACKEND", "compiled_backend", "digit_histogram", "htilde", "python_backend", "significant_digits"]
