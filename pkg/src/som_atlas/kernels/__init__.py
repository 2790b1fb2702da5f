"""Kernel backend selection.

The hot training loop exists twice: a Cython extension (``_native``) and a
numpy fallback (``pure``) that produce bit-identical results. The extension
is preferred when importable; ``SOM_ATLAS_KERNELS=python`` forces the
fallback, ``SOM_ATLAS_KERNELS=native`` makes a missing extension an error.
"""

import os

from . import pure
from .pure import bmu

_requested = os.environ.get("SOM_ATLAS_KERNELS", "").strip().lower()

if _requested in ("python", "pure"):
    _impl = pure
    BACKEND = "python"
elif _requested == "native":
    from . import _native as _impl  # noqa: F401  (ImportError is the point)

    BACKEND = "native"
elif _requested:
    raise ValueError(f"unknown SOM_ATLAS_KERNELS value: {_requested!r}")
else:
    try:
        from . import _native as _impl

        BACKEND = "native"
    except ImportError:
        _impl = pure
        BACKEND = "python"

train_loop = _impl.train_loop

__all__ = ["BACKEND", "bmu", "train_loop"]
