"""Linear-programming engine: revised simplex with swappable kernels."""

from ._backend import DEFAULT_BACKEND, available_backends, get_kernel
from .engine import (
    DEFAULT_PIVOT_TOL,
    DEFAULT_TOL,
    MAX_LEQ,
    MIN_EQ,
    LPSolution,
    StandardLP,
    solve,
    verify_certificate,
)

__all__ = [
    "DEFAULT_BACKEND",
    "DEFAULT_PIVOT_TOL",
    "DEFAULT_TOL",
    "MAX_LEQ",
    "MIN_EQ",
    "LPSolution",
    "StandardLP",
    "available_backends",
    "get_kernel",
    "solve",
    "verify_certificate",
]
