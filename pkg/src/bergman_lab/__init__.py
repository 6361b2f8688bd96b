"""Numerical toolkit for linear operators on weighted Bergman spaces of the unit disk.

Kernels, hyperbolic lattices, atomic decomposition, integral estimates and
Berezin-transform diagnostics, evaluated with deterministic quadrature.
"""

from .geometry import (
    DiskPoint,
    DomainError,
    EuclideanDisk,
    bergman_disk,
    bergman_metric,
    mobius,
    pseudo_hyperbolic,
)
from .quadrature import (
    AdaptiveResult,
    QuadratureError,
    QuadratureGrid,
    SpaceParams,
    build_grid,
    gamma,
    grid_for,
    integrate,
    integrate_adaptive,
)
from .kernels import (
    kernel,
    kernel_norm,
    kernel_norm_bounds,
    monomial_norm_sq,
    normalized_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveResult",
    "DiskPoint",
    "DomainError",
    "EuclideanDisk",
    "QuadratureError",
    "QuadratureGrid",
    "SpaceParams",
    "bergman_disk",
    "bergman_metric",
    "build_grid",
    "gamma",
    "grid_for",
    "integrate",
    "integrate_adaptive",
    "kernel",
    "kernel_norm",
    "kernel_norm_bounds",
    "mobius",
    "monomial_norm_sq",
    "normalized_kernel",
    "pseudo_hyperbolic",
]
