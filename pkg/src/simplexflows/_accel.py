"""Pick the compiled kernels when available, else the numpy fallback.

Set ``SIMPLEXFLOWS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("SIMPLEXFLOWS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

if compiled_kernels is not None:
    kernels = compiled_kernels
    BACKEND = "cython"
else:
    kernels = python_kernels
    BACKEND = "python"

cone_counts = kernels.cone_counts
simplex_cone_counts = kernels.simplex_cone_counts
