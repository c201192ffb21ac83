"""Pick the compiled reduction kernel when available.

Set DOPALG_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernel_py

_impl = _kernel_py
if not os.environ.get("DOPALG_PURE_PYTHON"):
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py


def available() -> list[str]:
    out = ["python"]
    try:
        from . import _kernel  # noqa: F401
    except ImportError:
        return out
    return ["cython"] + out


def use(name: str) -> None:
    """Rebind the active kernel in-process ("cython" or "python")."""
    global KERNEL, shift, axpy, find_divisor, nf
    if name == "python":
        impl = _kernel_py
    elif name == "cython":
        from . import _kernel as impl
    else:
        raise ValueError(f"unknown kernel {name!r}")
    KERNEL = impl.KERNEL
    shift = impl.shift
    axpy = impl.axpy
    find_divisor = impl.find_divisor
    nf = impl.nf


KERNEL = _impl.KERNEL
shift = _impl.shift
axpy = _impl.axpy
find_divisor = _impl.find_divisor
nf = _impl.nf

__all__ = ["KERNEL", "available", "axpy", "find_divisor", "nf", "shift", "use"]
