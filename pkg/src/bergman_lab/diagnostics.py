"""Threshold arithmetic, boundedness reports and boundary scans of the Berezin transform.

Verdicts are labels of the form "consistent with compactness"; a finite
scan cannot certify a limit.  Reports never contain wall-clock data so
that identical runs serialise to identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .operators import Operator, scan_quantities
from .quadrature import DEFAULT_N_RAD, SpaceParams, angular_count

DECAY_FACTOR = 0.05
STABILITY_FACTOR = 1.2
JOBS_ENV = "BERGMAN_LAB_JOBS"


def m_threshold(p: float, alpha: float) -> float:
    """p (2+alpha)/(1+alpha) max{1, 1/(p-1)}: the test exponent must exceed this for p > 1."""
    if not p > 1:
        raise ValueError("m_threshold needs p > 1; use m_threshold_small_p for 0 < p <= 1")
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    return p * (2.0 + alpha) / (1.0 + alpha) * max(1.0, 1.0 / (p - 1.0))


def m_threshold_small_p(p: float, alpha: float, delta: float | None = None) -> tuple[float, float]:
    """(threshold, beta) for 0 < p <= 1.

    threshold = max{(2+alpha)/(p delta) + 1, (1 + p delta)/(1+alpha) + 1} and
    beta = (2+alpha)/p - 2 + delta is the weight of the test norm.  The default
    delta = (1+alpha)/p balances the branches at 2 + 1/(1+alpha).
    """
    if not 0 < p <= 1:
        raise ValueError("m_threshold_small_p needs 0 < p <= 1")
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    if delta is None:
        delta = (1.0 + alpha) / p
    if not delta > 0:
        raise ValueError("delta must be positive")
    first = (2.0 + alpha) / (p * delta) + 1.0
    second = (1.0 + p * delta) / (1.0 + alpha) + 1.0
    return max(first, second), (2.0 + alpha) / p - 2.0 + delta


def pq_window(p: float, alpha: float) -> tuple[float, float]:
    """Open-closed interval (low, high] of m for which the p -> q result applies."""
    return p * (2.0 + alpha) / ((p - 1.0) * (1.0 + alpha)), p * (2.0 + alpha) / (1.0 + alpha)


@dataclass(frozen=True)
class Regime:
    classification: str
    reason: str


def pq_regime(p: float, q: float, m: float, alpha: float) -> Regime:
    if not p > 2:
        raise ValueError("pq_regime needs p > 2")
    if not q > 0:
        raise ValueError("q must be positive")
    low, high = pq_window(p, alpha)
    if not low < m <= high:
        return Regime("inapplicable", f"m={m:g} outside the window ({low:.6g}, {high:.6g}]")
    if p >= m:
        bound = m * (1.0 + alpha) / (2.0 + alpha)
        if q < bound:
            return Regime("case_a", f"p >= m and q < m(1+alpha)/(2+alpha) = {bound:.6g}")
        return Regime("inapplicable", f"p >= m but q >= {bound:.6g}")
    bound = p / (2.0 + alpha)
    if q < bound:
        return Regime("case_b", f"p < m and q < p/(2+alpha) = {bound:.6g}")
    return Regime("inapplicable", f"p < m but q >= {bound:.6g}")


def hypothesis_threshold(p: float, alpha: float) -> tuple[float, float]:
    """(m threshold, weight of the test norm) for any p > 0."""
    if p > 1:
        return m_threshold(p, alpha), alpha
    return m_threshold_small_p(p, alpha)


# ---------------------------------------------------------------- scans


def default_rays(n: int = 8) -> list[float]:
    return [2.0 * math.pi * k / n for k in range(n)]


def default_radii(levels: int = 7) -> list[float]:
    return [1.0 - 2.0 ** (-j) for j in range(1, levels + 1)]


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get(JOBS_ENV, "1") or 1)
    return max(1, int(jobs))


@dataclass(frozen=True)
class Sample:
    angle: float
    radius: float
    berezin: complex
    norms: dict

    @property
    def z(self) -> complex:
        return self.radius * complex(math.cos(self.angle), math.sin(self.angle))


@dataclass
class ScanReport:
    params: SpaceParams
    operator: str
    samples: list
    verdicts: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def by_ray(self) -> dict:
        rays: dict = {}
        for smp in self.samples:
            rays.setdefault(smp.angle, []).append(smp)
        return {a: sorted(v, key=lambda s: s.radius) for a, v in sorted(rays.items())}

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "operator": self.operator,
            "samples": [{"angle": s.angle, "radius": s.radius,
                         "berezin": [s.berezin.real, s.berezin.imag],
                         "norms": {_mkey(m): v for m, v in s.norms.items()}} for s in self.samples],
            "verdicts": self.verdicts,
            "metadata": self.metadata,
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_csv(self, path) -> None:
        ms = sorted({m for s in self.samples for m in s.norms})
        with open(path, "w", newline="", encoding="utf-8") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["angle", "radius", "re_berezin", "im_berezin"] + [f"norm_{_mkey(m)}" for m in ms])
            for s in self.samples:
                vals = [s.angle, s.radius, s.berezin.real, s.berezin.imag] + [s.norms[m] for m in ms]
                out.writerow([f"{v:.17g}" for v in vals])


def _mkey(m: float) -> str:
    return f"{m:g}"


def _sample(args):
    S, angle, radius, alpha, ms, beta = args
    z = radius * complex(math.cos(angle), math.sin(angle))
    ber, norms = scan_quantities(S, z, alpha, ms, beta)
    return Sample(angle, radius, ber, norms)


def run_samples(S: Operator, points, alpha: float, ms, beta: float, jobs: int | None = None) -> list:
    """Evaluate every (angle, radius) point; result order never depends on ``jobs``."""
    tasks = [(S, a, r, alpha, tuple(ms), beta) for a, r in points]
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(tasks) < 2:
        return [_sample(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sample, tasks))


def _metadata(points) -> dict:
    worst = max((r for _, r in points), default=0.0)
    return {"n_rad": DEFAULT_N_RAD, "n_ang_max": angular_count(worst),
            "angular_density": "64/(1-|z|)", "series_tol": 1e-15}


def boundedness_report(S: Operator, p: float, alpha: float, m: float, z_samples,
                       jobs: int | None = None) -> ScanReport:
    """sup over samples of ||S_z 1||_m, with the norm taken in the weight the criterion asks for."""
    params = SpaceParams(alpha, p, m)
    threshold, beta = hypothesis_threshold(p, alpha)
    points = sorted(((math.atan2(z.imag, z.real) % (2 * math.pi), abs(z))
                     for z in (complex(z) for z in z_samples)), key=lambda t: (t[0], t[1]))
    samples = run_samples(S, points, alpha, [m], beta, jobs)
    report = ScanReport(params, S.name, samples, metadata=_metadata(points))
    report.verdicts = _bounded_verdict(report, m, threshold, beta)
    return report


def _bounded_verdict(report: ScanReport, m: float, threshold: float, beta: float) -> dict:
    norms = [s.norms[m] for s in report.samples]
    finite = bool(norms) and all(math.isfinite(v) for v in norms)
    radii = sorted({s.radius for s in report.samples})
    stable = True
    if finite and len(radii) >= 2:
        at = lambda r: max(s.norms[m] for s in report.samples if s.radius == r)
        stable = at(radii[-1]) <= STABILITY_FACTOR * at(radii[-2])
    above = m > threshold
    return {
        "sup_norm": max(norms) if finite else math.inf,
        "m_threshold": threshold,
        "norm_weight": beta,
        "m_above_threshold": above,
        "sup_stable": bool(finite and stable),
        "hypothesis_satisfied": bool(above and finite and stable),
    }


def compactness_scan(S: Operator, p: float, alpha: float, m: float, rays=None, radii=None,
                     jobs: int | None = None) -> ScanReport:
    """Berezin transform and ||S_z 1||_t for t in {1, m/2, m} on rays x radii."""
    params = SpaceParams(alpha, p, m)
    rays = default_rays() if rays is None else [float(a) for a in rays]
    radii = default_radii() if radii is None else sorted(float(r) for r in radii)
    threshold, beta = hypothesis_threshold(p, alpha)
    ms = sorted({1.0, m / 2.0, float(m)})
    points = [(a, r) for a in rays for r in radii]
    samples = run_samples(S, points, alpha, ms, beta, jobs)
    report = ScanReport(params, S.name, samples, metadata=_metadata(points))
    verdict = _compact_verdict(report)
    verdict.update(_bounded_verdict(report, float(m), threshold, beta))
    report.verdicts = verdict
    return report


def _compact_verdict(report: ScanReport) -> dict:
    rays = report.by_ray()
    inner = max(abs(v[0].berezin) for v in rays.values())
    outer = max(abs(v[-1].berezin) for v in rays.values())
    monotone = True
    rates = []
    for vals in rays.values():
        half = vals[len(vals) // 2:]
        mags = [abs(s.berezin) for s in half]
        if any(b > a * (1 + 1e-9) + 1e-15 for a, b in zip(mags, mags[1:])):
            monotone = False
        x = np.log([1.0 - s.radius for s in half])
        y = np.log(np.maximum(mags, 1e-300))
        if len(half) >= 2:
            rates.append(float(np.polyfit(x, y, 1)[0]))
    decays = outer < DECAY_FACTOR * inner
    compact = bool(decays and monotone)
    probe = None
    if compact:
        probe = all(v[-1].norms[1.0] < v[0].norms[1.0] for v in rays.values())
    return {
        "berezin_inner_max": inner,
        "berezin_outer_max": outer,
        "outer_half_monotone": monotone,
        "decay_rate": min(rates) if rates else math.nan,
        "compact_consistent": compact,
        "label": "consistent with compactness" if compact else "not consistent with compactness",
        "probe_consistent": probe,
    }
