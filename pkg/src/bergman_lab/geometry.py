"""Disk automorphisms, pseudo-hyperbolic and Bergman distances, Bergman disks.

All functions accept scalars or numpy arrays of complex numbers and
broadcast like numpy ufuncs.  Points on or outside the circle
``|z| = 1 - EDGE`` are rejected; boundary behaviour is always probed
through interior sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EDGE = 1e-15


class DomainError(ValueError):
    """A point fell outside the open unit disk (or another declared domain)."""


@dataclass(frozen=True)
class DiskPoint:
    """A validated point of the open unit disk."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not np.isfinite(v.real) or not np.isfinite(v.imag) or abs(v) >= 1.0 - EDGE:
            raise DomainError(f"{v!r} is not inside the unit disk")
        object.__setattr__(self, "value", v)

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)


def as_disk(z, name: str = "z"):
    """Coerce ``z`` (DiskPoint, number or array) to complex and check |z| < 1."""
    if isinstance(z, DiskPoint):
        return z.value
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    if np.any(np.abs(arr) >= 1.0 - EDGE):
        bad = arr.ravel()[np.argmax(np.abs(arr).ravel())]
        raise DomainError(f"{name}={bad!r} is not inside the unit disk")
    if arr.ndim == 0:
        return complex(arr)
    return arr


def mobius(z, w):
    """The involutive automorphism ``(z - w) / (1 - conj(z) w)`` swapping 0 and z."""
    z = as_disk(z, "z")
    w = as_disk(w, "w")
    return (z - w) / (1.0 - np.conj(z) * w)


def pseudo_hyperbolic(z, w):
    """rho(z, w) = |z - w| / |1 - z conj(w)|, symmetric, values in [0, 1)."""
    z = as_disk(z, "z")
    w = as_disk(w, "w")
    return np.abs(z - w) / np.abs(1.0 - z * np.conj(w))


def bergman_metric(z, w):
    """Bergman distance beta = atanh(rho).

    Saturates to ``inf`` once rho exceeds ``1 - 1e-15`` so that boundary
    scans never abort.
    """
    rho = np.asarray(pseudo_hyperbolic(z, w), dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(rho > 1.0 - EDGE, np.inf, np.arctanh(np.minimum(rho, 1.0 - EDGE)))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EuclideanDisk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        if abs(self.center) + self.radius > 1.0 + 1e-12:
            raise DomainError("Euclidean disk leaves the closed unit disk")

    def contains(self, w):
        return np.abs(np.asarray(w) - self.center) < self.radius

    @property
    def reach(self) -> float:
        """Largest modulus attained on the closed disk."""
        return abs(self.center) + self.radius


def bergman_disk(a, r: float) -> EuclideanDisk:
    """Euclidean realisation of the Bergman ball ``{w : beta(a, w) < r}``.

    With s = tanh r the ball has center ``(1 - s^2) a / (1 - s^2 |a|^2)`` and
    radius ``(1 - |a|^2) s / (1 - s^2 |a|^2)``.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    a = complex(as_disk(a, "a"))
    s = float(np.tanh(r))
    den = 1.0 - s * s * abs(a) ** 2
    return EuclideanDisk((1.0 - s * s) / den * a, (1.0 - abs(a) ** 2) * s / den)


def ball_reach(s: float, x):
    """|c0| + r0 for a Bergman ball with s = tanh r centred at modulus x."""
    x = np.asarray(x, dtype=float)
    return (s + x) / (1.0 + s * x)
