"""r-lattices in the Bergman metric and their Voronoi cell decomposition.

A lattice is built greedily: candidates are laid out on rings that are
equispaced in hyperbolic radius, with a hyperbolic-arclength-uniform number
of points per ring, and a candidate is accepted when its Bergman distance to
every accepted center is at least r/2.  The candidate spacing is a small
fraction of r, so the maximal separated set also covers the truncated disk
``|w| <= R_max`` with Bergman balls of radius r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .geometry import DomainError, as_disk, bergman_metric
from .quadrature import QuadratureGrid, angular_count, truncated_grid

MAX_CENTERS = 10**6
FORMAT_TAG = "# bergman_lab lattice v1"


class LatticeError(ValueError):
    pass


def _rho(a, b):
    return np.abs(a - b) / np.abs(1.0 - a * np.conj(b))


def _euclid_reach(w, rho):
    """Max Euclidean distance from w to a point of its pseudo-hyperbolic ball of radius rho."""
    aw2 = np.abs(w) ** 2
    den = 1.0 - rho * rho * aw2
    center = (1.0 - rho * rho) * w / den
    radius = rho * (1.0 - aw2) / den
    return np.abs(center - w) + radius


def _xy(z):
    z = np.asarray(z, dtype=complex).ravel()
    return np.column_stack([z.real, z.imag])


@dataclass(frozen=True, eq=False)
class Lattice:
    r: float
    R_max: float
    centers: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.centers)

    @property
    def count(self) -> int:
        return len(self.centers)

    @property
    def tree(self) -> cKDTree:
        if "tree" not in self._cache:
            self._cache["tree"] = cKDTree(_xy(self.centers))
        return self._cache["tree"]

    def nearest(self, w):
        """Index of the Bergman-nearest center and the pseudo-hyperbolic distance to it.

        Exact: Euclidean k-nearest candidates are accepted only when the k-th
        Euclidean neighbour lies outside the pseudo-hyperbolic ball reaching
        the best candidate; otherwise the point falls back to a full scan.
        Near-ties (relative 1e-12) resolve to the smaller index.
        """
        w = np.asarray(w, dtype=complex)
        shape = w.shape
        flat = w.ravel()
        n = len(self.centers)
        k = min(16, n)
        dist, idx = self.tree.query(_xy(flat), k=k)
        if k == 1:
            dist, idx = dist[:, None], idx[:, None]
        rho = _rho(flat[:, None], self.centers[idx])
        best_idx, best = _pick(rho, idx)
        if k < n:
            bad = ~(dist[:, -1] > _euclid_reach(flat, best) * (1 + 1e-12) + 1e-15)
            if np.any(bad):
                sub = flat[bad]
                full = _rho(sub[:, None], self.centers[None, :])
                bi, bv = _pick(full, np.broadcast_to(np.arange(n), full.shape))
                best_idx[bad], best[bad] = bi, bv
        return best_idx.reshape(shape), best.reshape(shape)

    def multiplicity(self, n_samples: int = 10_000, seed: int = 0) -> int:
        """Largest number of dilated balls D(a_k, 2r) containing one sampled point."""
        key = ("mult", n_samples, seed)
        if key not in self._cache:
            w = sample_points(self.R_max, n_samples, seed)
            rho2 = math.tanh(2 * self.r)
            lists = self.tree.query_ball_point(_xy(w), _euclid_reach(w, rho2) * (1 + 1e-12))
            best = 0
            for wi, lst in zip(w, lists):
                if lst:
                    best = max(best, int(np.sum(_rho(wi, self.centers[lst]) < rho2)))
            self._cache[key] = best
        return self._cache[key]


def _pick(rho: np.ndarray, idx: np.ndarray):
    best = rho.min(axis=1)
    tie = rho <= best[:, None] * (1 + 1e-12) + 1e-15
    cand = np.where(tie, idx, np.iinfo(np.int64).max)
    j = cand.min(axis=1)
    return j.astype(np.int64), best


def sample_points(R_max: float, n: int, seed: int) -> np.ndarray:
    """Seeded test points in ``|w| <= R_max``: half area-uniform, half uniform in hyperbolic radius."""
    rng = np.random.default_rng(seed)
    n1 = n // 2
    rad = np.empty(n)
    rad[:n1] = R_max * np.sqrt(rng.random(n1))
    rad[n1:] = np.tanh(rng.random(n - n1) * math.atanh(R_max))
    return rad * np.exp(2j * np.pi * rng.random(n))


def _candidate_rings(r: float, R_max: float, spacing: float):
    top = math.atanh(R_max)
    n_rings = max(1, math.ceil(top / spacing))
    for j in range(n_rings + 1):
        hyp = top * j / n_rings
        count = 1 if j == 0 else max(1, math.ceil(math.pi * math.sinh(2 * hyp) / spacing))
        ang = 2 * np.pi * np.arange(count) / count
        yield hyp, math.tanh(hyp) * np.exp(1j * ang)


def build_lattice(r: float, R_max: float, spacing: float | None = None) -> Lattice:
    """Greedy maximal r/2-separated set inside ``|w| <= R_max``.

    Centers come out ordered by modulus, then angle in [0, 2 pi); the first
    center is the origin.
    """
    if not 0 < r <= 1:
        raise LatticeError(f"r must lie in (0, 1], got {r}")
    if not 0 < R_max < 1:
        raise LatticeError(f"R_max must lie in (0, 1), got {R_max}")
    h = r / 6.0 if spacing is None else spacing
    sep = math.tanh(r / 2.0)
    est = math.pi * (R_max**2 / (1 - R_max**2)) / (math.pi * math.sinh(r / 4.0) ** 2)
    if est > MAX_CENTERS:
        raise LatticeError(f"about {est:.3g} centers needed; use a larger r or smaller R_max")

    accepted: list[complex] = []
    for _, ring in _candidate_rings(r, R_max, h):
        old = np.asarray(accepted, dtype=complex)
        if len(old):
            tree = cKDTree(_xy(old))
            near = tree.query_ball_point(_xy(ring), _euclid_reach(ring, sep) * (1 + 1e-12))
        else:
            near = [[] for _ in ring]
        ring_acc: list[complex] = []
        for c, lst in zip(ring, near):
            if lst and np.min(_rho(c, old[lst])) < sep:
                continue
            if ring_acc and (_rho(c, ring_acc[-1]) < sep or _rho(c, ring_acc[0]) < sep):
                continue
            ring_acc.append(c)
        accepted.extend(ring_acc)
        if len(accepted) > MAX_CENTERS:
            raise LatticeError("center cap exceeded; use a larger r or smaller R_max")
    centers = np.asarray(accepted, dtype=complex)
    centers.setflags(write=False)
    return Lattice(float(r), float(R_max), centers)


@dataclass(frozen=True)
class LatticeReport:
    n_samples: int
    worst_gap: float
    min_separation: float
    covering_ok: bool
    separation_ok: bool
    multiplicity: int

    @property
    def passed(self) -> bool:
        return self.covering_ok and self.separation_ok


def min_separation(lat: Lattice) -> float:
    """Smallest Bergman distance between two distinct centers."""
    if lat.count < 2:
        return math.inf
    c = lat.centers
    # Any pair closer than beta = r lies inside a Euclidean ball found by the tree.
    lists = lat.tree.query_ball_point(_xy(c), _euclid_reach(c, math.tanh(lat.r)) * (1 + 1e-12))
    best = 1.0
    for i, lst in enumerate(lists):
        others = [j for j in lst if j != i]
        if others:
            best = min(best, float(np.min(_rho(c[i], c[others]))))
    return math.inf if best >= 1.0 else float(np.arctanh(best))


def verify_lattice(lat: Lattice, n_samples: int = 10_000, seed: int = 0) -> LatticeReport:
    w = sample_points(lat.R_max, n_samples, seed)
    _, rho = lat.nearest(w)
    gap = float(np.max(np.arctanh(rho)))
    sep = min_separation(lat)
    return LatticeReport(
        n_samples=n_samples,
        worst_gap=gap,
        min_separation=sep,
        covering_ok=gap < lat.r + 1e-9,
        separation_ok=sep >= lat.r / 2.0,
        multiplicity=lat.multiplicity(n_samples, seed),
    )


def cell_assign(lat: Lattice, w):
    """Index k of the cell D_k containing w (Bergman-nearest center, ties to the smaller k)."""
    w = as_disk(w, "w")
    if np.any(np.abs(w) > lat.R_max):
        raise DomainError(f"point outside the lattice domain |w| <= {lat.R_max}")
    idx, _ = lat.nearest(w)
    return int(idx) if np.ndim(idx) == 0 else idx


def cell_grid(lat: Lattice, alpha: float, n_rad: int = 256, n_ang: int | None = None) -> QuadratureGrid:
    """Truncated grid fine enough that the outermost cells hold several nodes."""
    if n_ang is None:
        n_ang = max(1024, angular_count(lat.R_max) // 4)
    return truncated_grid(alpha, lat.R_max, n_rad, n_ang)


def cell_measures(lat: Lattice, alpha: float, grid: QuadratureGrid | None = None) -> np.ndarray:
    """A_alpha(D_k) for every k, by assigning each node of a truncated grid to its cell."""
    if grid is None:
        key = ("cells", float(alpha))
        if key in lat._cache:
            return lat._cache[key]
        grid = cell_grid(lat, alpha)
    else:
        key = None
    out = np.zeros(lat.count)
    for sl, block in grid.ring_blocks():
        idx, _ = lat.nearest(block)
        wts = np.broadcast_to(grid.ring_weights[sl, None], block.shape)
        out += np.bincount(idx.ravel(), weights=wts.ravel(), minlength=lat.count)
    out.setflags(write=False)
    if key is not None:
        lat._cache[key] = out
    return out


def cell_measure(lat: Lattice, k: int, alpha: float, grid: QuadratureGrid | None = None) -> float:
    if not 0 <= k < lat.count:
        raise IndexError(f"cell index {k} out of range")
    return float(cell_measures(lat, alpha, grid)[k])


def save_lattice(lat: Lattice, path) -> None:
    lines = [FORMAT_TAG, f"r={lat.r!r} R_max={lat.R_max!r} count={lat.count}"]
    lines += [f"{c.real:.17g} {c.imag:.17g}" for c in lat.centers]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_lattice(path) -> Lattice:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        raise LatticeError(f"{path}: not a lattice file")
    head = dict(item.split("=") for item in lines[1].split())
    pts = [complex(float(a), float(b)) for a, b in (ln.split() for ln in lines[2:] if ln.strip())]
    if len(pts) != int(head["count"]):
        raise LatticeError(f"{path}: expected {head['count']} centers, found {len(pts)}")
    centers = np.asarray(pts, dtype=complex)
    centers.setflags(write=False)
    return Lattice(float(head["r"]), float(head["R_max"]), centers)


def pairwise_separation_ok(lat: Lattice) -> bool:
    return min_separation(lat) >= lat.r / 2.0


__all__ = [
    "Lattice",
    "LatticeError",
    "LatticeReport",
    "bergman_metric",
    "build_lattice",
    "cell_assign",
    "cell_measure",
    "cell_measures",
    "load_lattice",
    "min_separation",
    "sample_points",
    "save_lattice",
    "verify_lattice",
]
