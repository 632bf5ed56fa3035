"""Pure-numpy implementations of the hot pointwise kernels.

These mirror the signatures of the compiled extension exactly. All
reductions live outside the kernels (plain ``np.sum``) so that aggregate
diagnostics use the same pairwise summation regardless of backend.
"""

import numpy as np

BACKEND = "numpy"


def abs2(u: np.ndarray) -> np.ndarray:
    """|u|^2 as a contiguous float64 array."""
    return u.real * u.real + u.imag * u.imag


def abs4(u: np.ndarray) -> np.ndarray:
    """|u|^4."""
    a = u.real * u.real + u.imag * u.imag
    return a * a


def product_abs2(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """|u v|^2 = |u|^2 |v|^2."""
    return abs2(u) * abs2(v)


def cubic_pointwise(u: np.ndarray) -> np.ndarray:
    """|u|^2 u."""
    return (u.real * u.real + u.imag * u.imag) * u


def nonlinear_phase(u: np.ndarray, dt: float) -> np.ndarray:
    """u * exp(-i |u|^2 dt), the exact flow of i u_t = |u|^2 u."""
    ph = -dt * (u.real * u.real + u.imag * u.imag)
    return u * (np.cos(ph) + 1j * np.sin(ph))
