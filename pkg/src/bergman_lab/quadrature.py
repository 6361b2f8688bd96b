"""Product quadrature on the unit disk against dA_alpha.

With u = |w|^2 the weighted area measure factors as

    dA_alpha(w) = (alpha + 1) (1 - u)^alpha du * dtheta / (2 pi),

so a Gauss-Jacobi rule in u (weight (1 - u)^alpha on (0, 1)) times the
uniform trapezoid rule in theta integrates radial polynomials of degree
< 2 n_rad and trigonometric polynomials of degree < n_ang exactly, for the
whole admissible range alpha > -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

DEFAULT_N_RAD = 256
DEFAULT_N_ANG = 512
MAX_N_RAD = 8192
# Angular nodes per unit of 1/(1 - |z|) needed to resolve kernels peaked at z.
ANGULAR_DENSITY = 64
BLOCK_NODES = 1 << 20


class QuadratureError(ArithmeticError):
    """An integrand produced a non-finite value at a quadrature node."""


@dataclass(frozen=True)
class SpaceParams:
    alpha: float
    p: float
    m: float | None = None

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not self.p > 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.m is not None and not self.m > 0:
            raise ValueError(f"m must be positive, got {self.m}")


def gamma(x: float) -> float:
    """Gamma function on the positive reals."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"gamma is only provided for finite x > 0, got {x}")
    return math.gamma(x)


@lru_cache(maxsize=64)
def _jacobi_unit(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(n, alpha, 0.0)
    u = 0.5 * (1.0 + x)
    wts = w * 2.0 ** (-alpha - 1.0)
    u.setflags(write=False)
    wts.setflags(write=False)
    return u, wts


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Tensor grid over the disk.

    ``u`` and ``radial_weights`` discretise ``int_0^1 g(u) (1 - u)^alpha du``
    (so the weights sum to 1/(alpha + 1)); the angular rule has ``n_ang``
    equispaced nodes starting at ``theta0``.  ``measure`` multiplies every
    node weight and is (alpha + 1) for the full disk.
    """

    alpha: float
    u: np.ndarray
    radial_weights: np.ndarray
    n_ang: int
    theta0: float = 0.0
    measure: float | None = None

    @property
    def n_rad(self) -> int:
        return len(self.u)

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.u)

    @cached_property
    def angles(self) -> np.ndarray:
        return self.theta0 + 2.0 * np.pi * np.arange(self.n_ang) / self.n_ang

    @cached_property
    def nodes(self) -> np.ndarray:
        """Complex nodes, shape (n_rad, n_ang)."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    @cached_property
    def ring_weights(self) -> np.ndarray:
        """Weight carried by each node of ring i (identical along the ring)."""
        scale = (self.alpha + 1.0) if self.measure is None else self.measure
        return scale * self.radial_weights / self.n_ang

    @property
    def weights(self) -> np.ndarray:
        return np.broadcast_to(self.ring_weights[:, None], (self.n_rad, self.n_ang))

    def ring_blocks(self):
        """Yield (row slice, node block) pairs of at most BLOCK_NODES nodes."""
        rows = max(1, BLOCK_NODES // self.n_ang)
        e = np.exp(1j * self.angles)[None, :]
        for start in range(0, self.n_rad, rows):
            sl = slice(start, min(start + rows, self.n_rad))
            yield sl, self.radii[sl, None] * e


def build_grid(alpha: float, n_rad: int = DEFAULT_N_RAD, n_ang: int = DEFAULT_N_ANG,
               theta0: float = 0.0) -> QuadratureGrid:
    if not alpha > -1:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    if n_rad < 1 or n_ang < 1:
        raise ValueError("n_rad and n_ang must be positive")
    u, w = _jacobi_unit(int(n_rad), float(alpha))
    return QuadratureGrid(float(alpha), u, w, int(n_ang), float(theta0))


def angular_count(points, minimum: int = DEFAULT_N_ANG) -> int:
    """Power-of-two angular resolution for integrands peaked at ``points``."""
    rad = float(np.max(np.abs(np.atleast_1d(np.asarray(points, dtype=complex))), initial=0.0))
    need = ANGULAR_DENSITY / max(1.0 - rad, 1e-12)
    n = minimum
    while n < need:
        n *= 2
    return n


def grid_for(points, alpha: float, n_rad: int = DEFAULT_N_RAD,
             n_ang: int = DEFAULT_N_ANG) -> QuadratureGrid:
    """Default grid, with the angular count raised to resolve kernels at ``points``."""
    return build_grid(alpha, n_rad, angular_count(points, n_ang))


def truncated_grid(alpha: float, R: float, n_rad: int = DEFAULT_N_RAD,
                   n_ang: int = DEFAULT_N_ANG) -> QuadratureGrid:
    """Grid for dA_alpha restricted to the closed disk ``|w| <= R``.

    Gauss-Legendre in u on [0, R^2]; the weight (1 - u)^alpha is smooth there
    and folded into the radial weights.
    """
    if not 0 < R < 1:
        raise ValueError("R must lie in (0, 1)")
    x, w = roots_legendre(int(n_rad))
    top = R * R
    u = 0.5 * top * (1.0 + x)
    wts = 0.5 * top * w * (1.0 - u) ** alpha
    return QuadratureGrid(float(alpha), u, wts, int(n_ang))


def _check_finite(values: np.ndarray, nodes: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        idx = int(np.flatnonzero(~np.isfinite(values.ravel()))[0])
        node = complex(np.broadcast_to(nodes, values.shape).ravel()[idx])
        raise QuadratureError(f"integrand is not finite at node w={node!r}")


def integrate(f: Callable, grid: QuadratureGrid):
    """Integrate ``f`` over the disk against the grid's measure.

    ``f`` receives an array of complex nodes and must return an array of the
    same shape.  Blocks of rings are summed in a fixed order, so repeated calls
    are bit-identical.
    """
    total = 0.0
    for sl, block in grid.ring_blocks():
        vals = np.asarray(f(block))
        vals = np.broadcast_to(vals, block.shape)
        _check_finite(vals, block)
        total = total + np.sum(grid.ring_weights[sl, None] * vals)
    if np.iscomplexobj(total):
        return complex(total)
    return float(total)


def integrate_values(values: np.ndarray, grid: QuadratureGrid):
    """Quadrature sum of precomputed node values (shape (n_rad, n_ang))."""
    _check_finite(values, grid.nodes)
    total = np.sum(grid.ring_weights[:, None] * values)
    return complex(total) if np.iscomplexobj(total) else float(total)


@dataclass(frozen=True)
class AdaptiveResult:
    value: complex
    err_est: float
    converged: bool
    n_rad: int
    n_ang: int


def integrate_adaptive(f: Callable, alpha: float, tol: float, n_rad: int = 32,
                       n_ang: int = 64, max_rad: int = MAX_N_RAD,
                       max_nodes: int = 1 << 25) -> AdaptiveResult:
    """Double both resolutions until successive values differ by less than ``tol``.

    Stops early with ``converged=False`` once the radial count would exceed
    ``max_rad`` or the node count ``max_nodes``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    prev = integrate(f, build_grid(alpha, n_rad, n_ang))
    err = math.inf
    while 2 * n_rad <= max_rad and 4 * n_rad * n_ang <= max_nodes:
        n_rad, n_ang = 2 * n_rad, 2 * n_ang
        cur = integrate(f, build_grid(alpha, n_rad, n_ang))
        err = abs(cur - prev)
        prev = cur
        if err < tol:
            return AdaptiveResult(prev, float(err), True, n_rad, n_ang)
    return AdaptiveResult(prev, float(err), False, n_rad, n_ang)
