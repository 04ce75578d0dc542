"""Kernel backend selection.

The compiled extension (``stratembed.backends._native``) is preferred when it
imported successfully; otherwise the numpy fallback is used. Selection happens
once at import time and can be forced with the ``STRATEMBED_BACKEND``
environment variable (``native`` | ``python`` | ``auto``). Both backends obey
the same contracts, including deterministic tie-breaking, so results agree up
to floating-point rounding; within one backend results are bit-reproducible.
"""

import os

from stratembed.backends import python as _python_backend

_requested = os.environ.get("STRATEMBED_BACKEND", "auto").lower()
_native_backend = None
if _requested in ("auto", "native"):
    try:
        from stratembed.backends import _native as _native_backend
    except ImportError:
        if _requested == "native":
            raise ImportError(
                "STRATEMBED_BACKEND=native but the compiled extension is not "
                "available; build it with `pip install -e . --no-build-isolation`"
            )
        _native_backend = None

if _native_backend is not None:
    _impl = _native_backend
else:
    _impl = _python_backend

BACKEND_NAME = _impl.NAME

adam_step = _impl.adam_step
pairwise_sqdist = _impl.pairwise_sqdist
soft_assign = _impl.soft_assign
ward_linkage = _impl.ward_linkage


def available_backends():
    names = ["python"]
    if _native_backend is not None:
        names.insert(0, "native")
    return names


def get_backend(name: str):
    """Fetch a backend module by name (for parity tests and benchmarks)."""
    if name == "python":
        return _python_backend
    if name == "native":
        if _native_backend is None:
            raise ImportError("compiled backend not built")
        return _native_backend
    raise ValueError(f"unknown backend {name!r}; expected 'python' or 'native'")
