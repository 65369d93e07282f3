"""JIT switch for the sorting kernels.

Kernels are compiled with numba unless ``BSORT_DISABLE_JIT`` is set to a
truthy value (or numba cannot be imported), in which case ``njit`` is an
identity decorator and the same code runs as interpreted Python over numpy
arrays.
"""
import os

_FLAG = os.environ.get("BSORT_DISABLE_JIT", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _numba_njit
    HAS_JIT = True
except ImportError:
    HAS_JIT = False


def njit(*args, **kwargs):
    if HAS_JIT:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrapper(f):
        return f

    return wrapper


def py_func(f):
    """Return the interpreted version of a kernel, jitted or not."""
    return getattr(f, "py_func", f)
