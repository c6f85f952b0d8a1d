"""Decoder kernel backends.

Two interchangeable implementations exist: a compiled Cython extension and a
pure-Python fallback. They follow the same floating-point operation order and
return bit-identical results; the compiled one is simply faster. Selection
happens at import time and can be forced with the POLARKIT_BACKEND
environment variable ("auto", "cython", or "python").
"""

from __future__ import annotations

import os

from . import python_impl

__all__ = ["backend", "get_backend", "available_backends"]


def get_backend(name: str = "auto"):
    """Resolve a backend module by name."""
    if name == "python":
        return python_impl
    if name in ("auto", "cython"):
        try:
            from . import _ckernels
        except ImportError:
            if name == "cython":
                raise ImportError(
                    "the compiled kernel extension is not built; reinstall the "
                    "package or set POLARKIT_BACKEND=python"
                ) from None
            return python_impl
        return _ckernels
    raise ValueError(f"unknown backend {name!r}; use 'auto', 'cython' or 'python'")


def available_backends() -> tuple[str, ...]:
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return tuple(names)


backend = get_backend(os.environ.get("POLARKIT_BACKEND", "auto").lower())
