"""Atomic decomposition over a truncated r-lattice.

The sampling operator ``Tg(z) = sum_k A_alpha(D_k) g(a_k) K_{a_k}(z)`` is
inverted by collocation at the centers.  Rows and columns of the collocation
matrix are scaled by (1 - |a|^2)^((2+alpha)/2), which turns it into the Gram
matrix of the normalized kernels, G_jk = <k_{a_k}, k_{a_j}>.  G is Hermitian
positive semidefinite and numerically singular for dense lattices, so the
system is solved with a ridge term by Cholesky factorisation.  The function
Tg is recovered accurately even when the individual samples g(a_k) are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .geometry import as_disk
from .kernels import kernel_norm
from .lattice import Lattice, cell_measures, load_lattice
from .quadrature import build_grid, grid_for, integrate

DEFAULT_REG = 1e-10
RESIDUAL_LIMIT = 1e-4
FORMAT_TAG = "# bergman_lab expansion v1"


class AtomicError(ValueError):
    pass


def check_admissible(b: float, p: float, alpha: float) -> None:
    bound = max(1.0, 1.0 / p) + (alpha + 1.0) / p
    if not b > bound:
        raise AtomicError(f"atom exponent b={b} must exceed {bound:.6g} for p={p}, alpha={alpha}")


def atom_scale(a, b: float, p: float, alpha: float):
    return (1.0 - np.abs(a) ** 2) ** ((p * b - 2.0 - alpha) / p)


def atom(lat: Lattice, k: int, b: float, p: float, alpha: float, w):
    """f_k(w) = (1 - |a_k|^2)^((pb - 2 - alpha)/p) / (1 - w conj(a_k))^b."""
    check_admissible(b, p, alpha)
    a = lat.centers[k]
    w = as_disk(w, "w")
    return atom_scale(a, b, p, alpha) * (1.0 - w * np.conj(a)) ** (-b)


def _kernel_matrix(points, centers, alpha: float) -> np.ndarray:
    """Rows: evaluation points; columns: K_{a_k}."""
    return (1.0 - np.asarray(points)[:, None] * np.conj(centers)[None, :]) ** (-(2.0 + alpha))


def _values_at(f, points) -> np.ndarray:
    if callable(f):
        return np.asarray(f(points), dtype=complex) * np.ones(len(points))
    vals = np.asarray(f, dtype=complex)
    if vals.shape != (len(points),):
        raise AtomicError(f"expected {len(points)} sample values, got shape {vals.shape}")
    return vals


def sampling_apply(lat: Lattice, alpha: float, f, z):
    """Tf(z) = sum_k A_alpha(D_k) f(a_k) / (1 - conj(a_k) z)^(2+alpha), fixed order."""
    z = as_disk(z, "z")
    A = cell_measures(lat, alpha)
    fa = _values_at(f, lat.centers)
    out = _kernel_matrix(np.atleast_1d(z), lat.centers, alpha) @ (A * fa)
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


@dataclass(frozen=True)
class SamplingSolution:
    values: np.ndarray
    weights: np.ndarray
    residual: float
    ill_conditioned: bool


def _solve_gram(lat: Lattice, alpha: float, fa: np.ndarray, reg: float):
    a = lat.centers
    s = 2.0 + alpha
    q = (1.0 - np.abs(a) ** 2) ** (s / 2.0)
    G = q[:, None] * _kernel_matrix(a, a, alpha) * q[None, :]
    rhs = q * fa
    try:
        y = cho_solve(cho_factor(G + reg * np.eye(len(a)), lower=True), rhs)
    except LinAlgError:
        n = len(a)
        stacked = np.vstack([G, math.sqrt(reg) * np.eye(n)])
        y = np.linalg.lstsq(stacked, np.concatenate([rhs, np.zeros(n)]), rcond=None)[0]
    resid = (G @ y - rhs) / q
    return y * q, resid


def invert_sampling(lat: Lattice, alpha: float, f, reg: float = DEFAULT_REG) -> SamplingSolution:
    """Solve [Tg](a_j) = f(a_j) for the samples g(a_k).

    ``weights`` holds A_alpha(D_k) g(a_k), the quantity that actually enters
    Tg; the residual is ||Tg - f||_2 / ||f||_2 over the centers.
    """
    if reg < 0:
        raise AtomicError("reg must be nonnegative")
    fa = _values_at(f, lat.centers)
    norm = float(np.linalg.norm(fa))
    if norm == 0.0:
        zero = np.zeros(lat.count, dtype=complex)
        return SamplingSolution(zero, zero.copy(), 0.0, False)
    wts, resid = _solve_gram(lat, alpha, fa, reg)
    rel = float(np.linalg.norm(resid)) / norm
    A = cell_measures(lat, alpha)
    values = np.divide(wts, A, out=np.full(lat.count, np.nan, dtype=complex), where=A > 0)
    return SamplingSolution(values, wts, rel, rel > RESIDUAL_LIMIT)


@dataclass(frozen=True, eq=False)
class AtomicExpansion:
    lattice: Lattice
    b: float
    p: float
    alpha: float
    coeffs: np.ndarray
    residual: float = 0.0
    ill_conditioned: bool = False

    def __post_init__(self):
        check_admissible(self.b, self.p, self.alpha)
        if len(self.coeffs) != self.lattice.count:
            raise AtomicError("one coefficient per lattice center is required")

    def coefficient_norm(self) -> float:
        """(sum_k |c_k|^p)^(1/p)."""
        return float(np.sum(np.abs(self.coeffs) ** self.p) ** (1.0 / self.p))

    def __call__(self, w):
        return reconstruct(self, w)


def decompose(lat: Lattice, f, p: float, alpha: float, reg: float = DEFAULT_REG) -> AtomicExpansion:
    """Coefficients c_k = A_alpha(D_k) g(a_k) / (1 - |a_k|^2)^((p-1)(2+alpha)/p), b = 2 + alpha."""
    if not p > 1:
        raise AtomicError("decompose needs p > 1")
    sol = invert_sampling(lat, alpha, f, reg)
    s = 2.0 + alpha
    coeffs = sol.weights / (1.0 - np.abs(lat.centers) ** 2) ** ((p - 1.0) * s / p)
    return AtomicExpansion(lat, s, p, alpha, coeffs, sol.residual, sol.ill_conditioned)


def reconstruct(exp: AtomicExpansion, w):
    """sum_k c_k f_k(w), summed in lattice order."""
    w = as_disk(w, "w")
    a = exp.lattice.centers
    scaled = exp.coeffs * atom_scale(a, exp.b, exp.p, exp.alpha)
    pts = np.atleast_1d(w).ravel()
    out = (1.0 - pts[:, None] * np.conj(a)[None, :]) ** (-exp.b) @ scaled
    return complex(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))


def evaluation_disk(radius: float = 0.8, n_rad: int = 33, n_ang: int = 128) -> np.ndarray:
    """Polar sample points covering |w| <= radius, used for sup-error estimates."""
    rad = np.linspace(0.0, radius, n_rad)
    return (rad[:, None] * np.exp(2j * np.pi * np.arange(n_ang) / n_ang)[None, :]).ravel()


def relative_sup_error(exp: AtomicExpansion, f: Callable, radius: float = 0.8) -> float:
    w = evaluation_disk(radius)
    fw = np.asarray(f(w), dtype=complex) * np.ones(len(w))
    scale = float(np.max(np.abs(fw)))
    err = float(np.max(np.abs(reconstruct(exp, w) - fw)))
    return err / scale if scale > 0 else err


def error_table(exp: AtomicExpansion, f: Callable, radii) -> list[tuple[float, float]]:
    """(radius, max |f_hat - f| on that circle) rows."""
    rows = []
    ang = np.exp(2j * np.pi * np.arange(128) / 128)
    for rad in radii:
        w = rad * ang
        fw = np.asarray(f(w), dtype=complex) * np.ones(len(w))
        rows.append((float(rad), float(np.max(np.abs(reconstruct(exp, w) - fw)))))
    return rows


def function_norm(f: Callable, p: float, alpha: float, peak=0.0) -> float:
    """||f||_{p,alpha} by quadrature; ``peak`` raises the angular resolution."""
    grid = grid_for(peak, alpha) if peak else build_grid(alpha)
    return float(integrate(lambda w: np.abs(f(w)) ** p, grid)) ** (1.0 / p)


def normalized_kernel_family(z: float, p: float, alpha: float) -> Callable:
    """f = K_z / ||K_z||_{p,alpha}; closed-form norm at p = 2."""
    s = 2.0 + alpha
    if p == 2:
        norm = (1.0 - abs(z) ** 2) ** (-s / 2.0)
    else:
        norm = kernel_norm(z, p, alpha)
    zc = np.conj(complex(z))
    return lambda w: (1.0 - zc * np.asarray(w)) ** (-s) / norm


def weak_null_coeff_decay(lat: Lattice, p: float, alpha: float, z_seq, R: float,
                          reg: float = DEFAULT_REG) -> list[float]:
    """S_n = sum_{|a_k| <= R} |c_{k,n}|^p for f_n = K_{z_n}/||K_{z_n}||_{p,alpha}."""
    inner = np.abs(lat.centers) <= R
    out = []
    for z in z_seq:
        z = complex(as_disk(z))
        exp = decompose(lat, normalized_kernel_family(z, p, alpha), p, alpha, reg)
        out.append(float(np.sum(np.abs(exp.coeffs[inner]) ** p)))
    return out


def save_expansion(exp: AtomicExpansion, path, lattice_path) -> None:
    lines = [FORMAT_TAG,
             f"p={exp.p!r} alpha={exp.alpha!r} b={exp.b!r} count={len(exp.coeffs)}",
             f"lattice={Path(lattice_path).name}"]
    lines += [f"{k} {c.real:.17g} {c.imag:.17g}" for k, c in enumerate(exp.coeffs)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_expansion(path) -> AtomicExpansion:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        raise AtomicError(f"{path}: not an expansion file")
    head = dict(item.split("=") for item in lines[1].split())
    lat = load_lattice(path.parent / lines[2].split("=", 1)[1])
    coeffs = np.zeros(int(head["count"]), dtype=complex)
    for ln in lines[3:]:
        if ln.strip():
            k, re, im = ln.split()
            coeffs[int(k)] = complex(float(re), float(im))
    return AtomicExpansion(lat, float(head["b"]), float(head["p"]), float(head["alpha"]), coeffs)
