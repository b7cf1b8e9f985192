"""Backend selection for the hot kernels.

Set ``MONOREP_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
The choice can also be flipped at runtime with :func:`set_backend`; kernels
look it up on every call.
"""
import os
from contextlib import contextmanager

try:
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    HAS_NUMBA = False

    def _njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_DISABLED = os.environ.get("MONOREP_DISABLE_NUMBA", "").strip() not in ("", "0")
USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(fn):
    return _njit(cache=True, nogil=True)(fn)


def backend():
    return "numba" if USE_NUMBA else "numpy"


def set_backend(name):
    global USE_NUMBA
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not importable")
    USE_NUMBA = name == "numba"


@contextmanager
def using_backend(name):
    prev = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)
