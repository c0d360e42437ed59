"""Pick the compiled kernels when available, else the pure-Python fallback.

Set ``FRAUDKIT_BACKEND=python`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("FRAUDKIT_BACKEND", "").lower() == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
