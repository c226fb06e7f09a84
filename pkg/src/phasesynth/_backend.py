"""Kernel backend selection.

The compiled extension is preferred. Setting ``QIMG_BACKEND=python`` forces
the numpy fallback, which is also used automatically when the extension has
not been built.
"""
import os

if os.environ.get("QIMG_BACKEND", "").lower() == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
