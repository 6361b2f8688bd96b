"""Reproducing kernels of the weighted Bergman space A^2(dA_alpha) and their norms."""

from __future__ import annotations

import numpy as np
from scipy.special import betaln

from .geometry import as_disk
from .quadrature import QuadratureGrid, gamma, grid_for, integrate


def kernel(z, w, alpha: float):
    """K_z(w) = (1 - conj(z) w)^-(2 + alpha), principal branch.

    Re(1 - conj(z) w) > 0 on the bidisk, so the base never touches the
    branch cut on the negative real axis.
    """
    z = as_disk(z, "z")
    w = as_disk(w, "w")
    return (1.0 - np.conj(z) * w) ** (-(2.0 + alpha))


def normalized_kernel(z, w, alpha: float):
    """k_z = (1 - |z|^2)^((2 + alpha)/2) K_z, a unit vector in A^2(dA_alpha)."""
    z = as_disk(z, "z")
    return (1.0 - np.abs(z) ** 2) ** ((2.0 + alpha) / 2.0) * kernel(z, w, alpha)


def log_abs_normalized_kernel(z, w, alpha: float):
    """log|k_z(w)|, computed without forming k_z (safe for large exponents)."""
    z = as_disk(z, "z")
    w = as_disk(w, "w")
    s = 2.0 + alpha
    return 0.5 * s * np.log1p(-np.abs(z) ** 2) - s * np.log(np.abs(1.0 - np.conj(z) * w))


def monomial_norm_sq(n, alpha: float):
    """gamma_n = ||w^n||^2_{2,alpha} = Gamma(n+1) Gamma(alpha+2) / Gamma(n+alpha+2)."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ValueError("n must be nonnegative")
    out = np.exp(np.log(alpha + 1.0) + betaln(n + 1.0, alpha + 1.0))
    return float(out) if out.ndim == 0 else out


def kernel_norm(z, p: float, alpha: float, grid: QuadratureGrid | None = None) -> float:
    """||K_z||_{p,alpha} by quadrature."""
    if not p > 0:
        raise ValueError("p must be positive")
    z = complex(as_disk(z))
    if grid is None:
        grid = grid_for(z, alpha)
    s = 2.0 + alpha
    val = integrate(lambda w: np.abs(1.0 - np.conj(z) * w) ** (-p * s), grid)
    return float(val) ** (1.0 / p)


def kernel_norm_bounds(z, p: float, alpha: float) -> tuple[float, float]:
    """Two-sided bounds for ||K_z||_{p,alpha}, valid for p > 1.

    lower = (1 - |z|^2)^(-(p-1)(2+alpha)/p)
    upper = [Gamma(2+alpha) Gamma(c) / Gamma((2+alpha+c)/2)^2 (1 - |z|^2)^-c]^(1/p),
    with c = (p - 1)(2 + alpha).
    """
    if not p > 1:
        raise ValueError("kernel norm bounds need p > 1")
    z = complex(as_disk(z))
    s = 2.0 + alpha
    c = (p - 1.0) * s
    t = 1.0 - abs(z) ** 2
    lower = t ** (-c / p)
    const = gamma(s) * gamma(c) / gamma((s + c) / 2.0) ** 2
    upper = (const * t ** (-c)) ** (1.0 / p)
    return lower, upper
