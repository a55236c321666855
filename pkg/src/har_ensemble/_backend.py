"""Select the compiled kernels when available, else the numpy fallback.

Set ``HAR_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the backend-parity tests).
"""
import logging
import os

logger = logging.getLogger(__name__)

if os.environ.get("HAR_PURE_PYTHON"):
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        logger.debug("compiled kernels unavailable, using numpy fallback")
        from . import _kernels_py as kernels
        BACKEND = "python"

fft_rows = kernels.fft_rows
best_split = kernels.best_split

__all__ = ["BACKEND", "fft_rows", "best_split"]
