"""Pick the interpolation kernel implementation at import time.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``SPHEREADVECT_BACKEND=python`` to force the fallback.
"""

import os

from . import _fallback

if os.environ.get("SPHEREADVECT_BACKEND", "").lower() in ("python", "numpy", "fallback"):
    impl = _fallback
    NAME = "python"
else:
    try:
        from . import _kernels as impl
        NAME = "cython"
    except ImportError:
        impl = _fallback
        NAME = "python"


def use(name):
    """Switch backend at runtime (``"cython"`` or ``"python"``)."""
    global impl, NAME
    if name == "python":
        impl, NAME = _fallback, "python"
    elif name == "cython":
        from . import _kernels

        impl, NAME = _kernels, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")


def available():
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names
