"""The integral I_{c,t} with its two-sided Gamma bounds, and lattice sums L(w)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import hyp2f1

from .geometry import as_disk
from .lattice import Lattice
from .quadrature import MAX_N_RAD, angular_count, build_grid, gamma, integrate

BOUNDARY_LIMIT = 0.999


class EstimateError(ValueError):
    pass


def regime_of_c(c: float) -> str:
    if c < 0:
        return "negative_c"
    if c > 0:
        return "positive_c"
    return "zero_c"


def regime_of_t(t1: float, t2: float) -> str:
    if t2 > t1:
        return "t2>t1"
    if t2 == t1:
        return "t2=t1"
    return "t2<t1"


@dataclass(frozen=True)
class EstimateCase:
    c: float
    t: float

    def __post_init__(self):
        if not self.t > -1:
            raise EstimateError(f"t must exceed -1, got {self.t}")

    @property
    def regime(self) -> str:
        return regime_of_c(self.c)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    err_est: float
    converged: bool
    n_rad: int
    n_ang: int


def I_ct(z, c: float, t: float, tol: float = 1e-11) -> IntegralResult:
    """I_{c,t}(z) = int (1 - |w|^2)^t / |1 - z conj(w)|^(2+t+c) dA(w).

    Written as (t + 1)^-1 int |1 - conj(z) w|^-(2+t+c) dA_t, the weight is
    absorbed by Gauss-Jacobi nodes; the angular count is fixed by |z| and the
    radial count doubles until successive values agree to ``tol`` (relative).
    """
    EstimateCase(c, t)
    z = complex(as_disk(z))
    s = 2.0 + t + c
    n_ang = angular_count(z)
    f = lambda w: np.abs(1.0 - np.conj(z) * w) ** (-s)
    n_rad = 64
    prev = integrate(f, build_grid(t, n_rad, n_ang)) / (t + 1.0)
    err = math.inf
    converged = False
    while 2 * n_rad <= MAX_N_RAD:
        n_rad *= 2
        cur = integrate(f, build_grid(t, n_rad, n_ang)) / (t + 1.0)
        err, prev = abs(cur - prev), cur
        if err <= tol * abs(cur):
            converged = True
            break
    if abs(z) > BOUNDARY_LIMIT:
        converged = False
    return IntegralResult(float(prev), float(err), converged, n_rad, n_ang)


def I_ct_closed_form(z, c: float, t: float) -> float:
    """(t + 1)^-1 2F1(s, s; t + 2; |z|^2) with s = (2 + t + c)/2, from termwise integration."""
    EstimateCase(c, t)
    s = (2.0 + t + c) / 2.0
    return float(hyp2f1(s, s, t + 2.0, abs(complex(as_disk(z))) ** 2)) / (t + 1.0)


def normalizer(z, c: float) -> float:
    """Factor N(z) such that the Gamma brackets bound N(z) * I_{c,t}(z)."""
    x = abs(complex(as_disk(z))) ** 2
    if c < 0:
        return 1.0
    if c > 0:
        return (1.0 - x) ** c
    if x == 0.0:
        return 1.0
    return x / -math.log1p(-x)


def normalized_bounds(c: float, t: float) -> tuple[float, float]:
    """Constants bracketing N(z) I_{c,t}(z).

    For c = 0 the bracket runs between 1/(1 + t) (the value at z = 0) and
    Gamma(1 + t)/Gamma(1 + t/2)^2 (the boundary limit); the order depends on
    the sign of t.
    """
    EstimateCase(c, t)
    if c < 0:
        return gamma(1 + t) / gamma(2 + t), gamma(1 + t) * gamma(-c) / gamma((2 + t - c) / 2) ** 2
    if c > 0:
        return gamma(1 + t) / gamma(2 + t), gamma(1 + t) * gamma(c) / gamma((2 + t + c) / 2) ** 2
    a, b = 1.0 / (1.0 + t), gamma(1 + t) / gamma(1 + t / 2) ** 2
    return min(a, b), max(a, b)


def I_ct_bounds(z, c: float, t: float) -> tuple[float, float]:
    """Lower and upper bounds on I_{c,t}(z) itself."""
    lo, hi = normalized_bounds(c, t)
    n = normalizer(z, c)
    return lo / n, hi / n


def lattice_sum(lat: Lattice, t1: float, t2: float, w) -> float:
    """L(w) = sum_k (1 - |a_k|^2)^t1 / |1 - conj(a_k) w|^t2 over the truncated lattice."""
    if not t1 > 1:
        raise EstimateError(f"t1 must exceed 1, got {t1}")
    w = as_disk(w, "w")
    a = lat.centers
    wa = np.atleast_1d(w)
    terms = (1.0 - np.abs(a) ** 2)[None, :] ** t1 / np.abs(1.0 - np.conj(a)[None, :] * wa[:, None]) ** t2
    out = terms.sum(axis=1)
    return float(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))


def lattice_tail(lat: Lattice, t1: float, t2: float, w) -> float:
    """Estimate of the terms dropped by truncating at R_max.

    Centers beyond R_max are modelled by the lattice's own density per unit
    hyperbolic area, so the tail is that density times
    int_{|v| > R_max} (1 - |v|^2)^(t1 - 2) |1 - conj(v) w|^-t2 dA(v).
    """
    if not t1 > 1:
        raise EstimateError(f"t1 must exceed 1, got {t1}")
    x = abs(complex(as_disk(w, "w"))) ** 2
    R2 = lat.R_max**2
    density = lat.count * (1.0 - R2) / R2
    g = lambda u: (1.0 - u) ** (t1 - 2.0) * hyp2f1(t2 / 2, t2 / 2, 1.0, x * u)
    val, _ = sp_integrate.quad(g, R2, 1.0, limit=200)
    return float(density * val)


def envelope(t1: float, t2: float, w) -> float:
    x = abs(complex(w)) ** 2
    if t2 > t1:
        return (1.0 - x) ** (t1 - t2)
    if t2 == t1:
        return -math.log1p(-x)
    return 1.0


@dataclass(frozen=True)
class EnvelopeRow:
    regime: str
    t1: float
    t2: float
    radius: float
    L: float
    envelope: float
    ratio: float


@dataclass(frozen=True)
class EnvelopeReport:
    rows: tuple[EnvelopeRow, ...]
    constant: float
    passed: bool


def lattice_sum_envelope_check(lat: Lattice, t1: float, t2: float, radii,
                               n_angles: int = 8) -> EnvelopeReport:
    """Sup over sampled w of L(w)/envelope(w), per radius.

    Each radius is sampled at ``n_angles`` equispaced angles and the row keeps
    the maximum ratio.  Passes iff every ratio is finite and the ratio at the
    outermost radius is at most 1.2 times the one before it.  In the t2 = t1
    regime radii below 0.1 are skipped because the log envelope vanishes at 0.
    """
    if not t1 > 1:
        raise EstimateError(f"t1 must exceed 1, got {t1}")
    regime = regime_of_t(t1, t2)
    radii = sorted(float(r) for r in radii)
    if regime == "t2=t1":
        radii = [r for r in radii if r >= 0.1]
    ang = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    rows = []
    for rad in radii:
        w = rad * ang
        L = lattice_sum(lat, t1, t2, w) if rad > 0 else np.full(n_angles, lattice_sum(lat, t1, t2, 0.0))
        env = envelope(t1, t2, rad)
        i = int(np.argmax(L))
        rows.append(EnvelopeRow(regime, t1, t2, rad, float(L[i]), env, float(L[i] / env)))
    ratios = [r.ratio for r in rows]
    finite = bool(rows) and all(math.isfinite(q) for q in ratios)
    stable = len(ratios) < 2 or ratios[-1] <= 1.2 * ratios[-2]
    return EnvelopeReport(tuple(rows), max(ratios) if ratios else math.nan, finite and stable)


CSV_COLUMNS = ("regime", "t1", "t2", "radius", "L", "envelope", "ratio")


def write_envelope_csv(reports, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for rep in reports:
            for row in rep.rows:
                out.writerow([row.regime] + [f"{v:.17g}" for v in
                             (row.t1, row.t2, row.radius, row.L, row.envelope, row.ratio)])
