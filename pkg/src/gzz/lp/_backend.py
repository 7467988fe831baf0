"""Kernel selection: compiled extension when importable, NumPy otherwise.

``GZZ_BACKEND=python`` forces the NumPy kernel.
"""

import os

from . import _simplex_py

KERNELS = {"python": _simplex_py}

try:
    from . import _simplex_ext
except ImportError:  # extension not built
    _simplex_ext = None
else:
    KERNELS["cython"] = _simplex_ext

_requested = os.environ.get("GZZ_BACKEND", "").strip().lower()
if _requested and _requested not in KERNELS:
    raise ImportError(f"GZZ_BACKEND={_requested!r} is not available (have {sorted(KERNELS)})")
DEFAULT_BACKEND = _requested or ("cython" if "cython" in KERNELS else "python")


def available_backends() -> list[str]:
    return sorted(KERNELS)


def get_kernel(name: str | None = None):
    name = DEFAULT_BACKEND if name is None else name
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available (have {sorted(KERNELS)})") from None
