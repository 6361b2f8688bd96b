"""Concrete operators on A^2(dA_alpha) described through their action on kernels.

Every operator reports ``kernel_image(z, alpha)``, an analytic function equal
to S K_z.  From it follow the Berezin transform, the conjugated function
S_z 1 = (S k_z)(phi_z) k_z and its L^m norms.  Norms use the change of
variables w = phi_z(v):

    ||S_z 1||_m^m = int |S K_z(v) / K_z(v)|^m |k_z(v)|^2 dA_alpha(v),

which only needs S K_z on a grid and never forms large powers of k_z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .geometry import as_disk, mobius
from .kernels import kernel, monomial_norm_sq, normalized_kernel
from .quadrature import (DEFAULT_N_RAD, QuadratureGrid, angular_count, build_grid, grid_for,
                         integrate, integrate_values)

MAX_TERMS = 1 << 17
SERIES_TOL = 1e-15


class TruncationError(ArithmeticError):
    """A truncated series cannot meet its declared tail tolerance."""


# ---------------------------------------------------------------- analytic functions


def log_gamma_n(n, alpha: float):
    """log gamma_n = log ||w^n||^2."""
    n = np.asarray(n, dtype=float)
    return math.log(alpha + 1.0) + gammaln(n + 1.0) + gammaln(alpha + 1.0) - gammaln(n + alpha + 2.0)


def kernel_tail_bound(x: float, alpha: float, n_terms: int, sup: float = 1.0) -> float:
    """Bound on sup * sum_{n >= n_terms} x^n / gamma_n for 0 <= x < 1.

    Consecutive terms have ratio x (n + alpha + 2)/(n + 1), decreasing in n,
    so the tail is dominated by a geometric series from its first term.
    """
    if x == 0.0:
        return 0.0
    n = n_terms
    rho = x * (n + alpha + 2.0) / (n + 1.0)
    if rho >= 1.0:
        return math.inf
    first = math.exp(n * math.log(x) - float(log_gamma_n(n, alpha)))
    return sup * first / (1.0 - rho)


def auto_terms(x: float, alpha: float, tol: float = SERIES_TOL, sup: float = 1.0) -> int:
    """Smallest N whose tail bound is below tol times the full kernel sum (1 - x)^-(2+alpha)."""
    if x == 0.0:
        return 1
    target = tol * (1.0 - x) ** (-(2.0 + alpha))
    lo, hi = 1, 64
    while kernel_tail_bound(x, alpha, hi, sup) > target:
        lo, hi = hi, 2 * hi
        if hi > MAX_TERMS:
            raise TruncationError(f"more than {MAX_TERMS} terms needed at |z w| = {x}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if kernel_tail_bound(x, alpha, mid, sup) > target:
            lo = mid
        else:
            hi = mid
    return hi


class AnalyticFunction:
    """A holomorphic function on the disk evaluable pointwise and on polar grids."""

    def __call__(self, w):
        raise NotImplementedError

    def on_grid(self, grid: QuadratureGrid) -> np.ndarray:
        return np.asarray(self(grid.nodes), dtype=complex) * np.ones(grid.nodes.shape)

    def __add__(self, other):
        return FunctionSum(((1.0, self), (1.0, other)))

    def scaled(self, c):
        return FunctionSum(((c, self),))


@dataclass(frozen=True, eq=False)
class TaylorSeries(AnalyticFunction):
    """sum_n coeffs[n] w^n."""

    coeffs: np.ndarray

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.polynomial.polynomial.polyval(w, self.coeffs)
        return complex(out) if out.ndim == 0 else out

    def on_grid(self, grid: QuadratureGrid) -> np.ndarray:
        """Exact evaluation of the truncated series at the grid nodes by folded ring FFTs."""
        N = grid.n_ang
        c = np.asarray(self.coeffs, dtype=complex)
        n = np.arange(len(c))
        phase = c * np.exp(1j * n * grid.theta0)
        pad = (-len(c)) % N
        out = np.empty((grid.n_rad, N), dtype=complex)
        logr = np.log(grid.radii)
        for start in range(0, grid.n_rad, 32):
            lr = logr[start:start + 32, None]
            a = phase[None, :] * np.exp(n[None, :] * lr)
            a = np.concatenate([a, np.zeros((a.shape[0], pad), dtype=complex)], axis=1)
            folded = a.reshape(a.shape[0], -1, N).sum(axis=1)
            out[start:start + 32] = N * np.fft.ifft(folded, axis=1)
        return out


@dataclass(frozen=True, eq=False)
class ClosedForm(AnalyticFunction):
    fn: Callable

    def __call__(self, w):
        return self.fn(w)


@dataclass(frozen=True, eq=False)
class FunctionSum(AnalyticFunction):
    terms: tuple

    def __call__(self, w):
        out = 0.0
        for c, f in self.terms:
            out = out + c * np.asarray(f(w), dtype=complex)
        return complex(out) if np.ndim(out) == 0 else out

    def on_grid(self, grid):
        out = np.zeros(grid.nodes.shape, dtype=complex)
        for c, f in self.terms:
            out += c * f.on_grid(grid)
        return out


@dataclass(frozen=True)
class _Kernel:
    z: complex
    alpha: float

    def __call__(self, w):
        return (1.0 - np.conj(self.z) * np.asarray(w, dtype=complex)) ** (-(2.0 + self.alpha))


@dataclass(frozen=True)
class _Const:
    value: complex

    def __call__(self, w):
        return self.value * np.ones(np.shape(w), dtype=complex)


def one(w):
    return np.ones(np.shape(w), dtype=complex)


def identity_fn(w):
    return np.asarray(w, dtype=complex)


# ---------------------------------------------------------------- eigenvalue families


@dataclass(frozen=True)
class InverseIndex:
    """lambda_n = 1/(n + 1)."""

    sup: float = 1.0

    def __call__(self, n):
        return 1.0 / (np.asarray(n, dtype=float) + 1.0)


@dataclass(frozen=True)
class PowerDecay:
    """lambda_n = (n + 1)^-s."""

    s: float

    @property
    def sup(self) -> float:
        return 1.0 if self.s >= 0 else math.inf

    def __call__(self, n):
        return (np.asarray(n, dtype=float) + 1.0) ** (-self.s)


@dataclass(frozen=True)
class ConstantSequence:
    c: complex

    @property
    def sup(self) -> float:
        return abs(self.c)

    def __call__(self, n):
        return self.c * np.ones(np.shape(n))


@dataclass(frozen=True)
class ArraySequence:
    """Finitely many eigenvalues, zero afterwards."""

    values: tuple

    @property
    def sup(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)

    def __call__(self, n):
        n = np.asarray(n, dtype=int)
        vals = np.asarray(self.values + (0.0,), dtype=complex)
        return vals[np.minimum(n, len(self.values))]


# ---------------------------------------------------------------- symbols


class Symbol:
    name = "symbol"
    radial = False

    def __call__(self, u):
        raise NotImplementedError


@dataclass(frozen=True)
class RadialPower(Symbol):
    """(1 - |u|^2)^k; k = 0 is the constant 1."""

    k: float

    radial = True

    @property
    def name(self) -> str:
        if self.k == 0:
            return "one"
        if self.k == 1:
            return "oneminusr2"
        return f"radialpow:{self.k:g}"

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        return (1.0 - np.abs(u) ** 2) ** self.k if self.k else np.ones(u.shape)

    def eigenvalues(self, n, alpha: float):
        """<phi e_n, e_n> = Gamma(a+k+1) Gamma(n+a+2) / (Gamma(a+1) Gamma(n+a+k+2))."""
        n = np.asarray(n, dtype=float)
        k = self.k
        return np.exp(gammaln(alpha + k + 1) + gammaln(n + alpha + 2)
                      - gammaln(alpha + 1) - gammaln(n + alpha + k + 2))


@dataclass(frozen=True)
class HalfDisk(Symbol):
    """Indicator of Re u > 0."""

    name = "halfdisk"

    def __call__(self, u):
        return (np.real(u) > 0).astype(float)


@dataclass(frozen=True)
class FunctionSymbol(Symbol):
    fn: Callable
    name: str = "custom"

    def __call__(self, u):
        return self.fn(u)


def parse_symbol(text: str) -> Symbol:
    if text == "one":
        return RadialPower(0.0)
    if text == "oneminusr2":
        return RadialPower(1.0)
    if text == "halfdisk":
        return HalfDisk()
    if text.startswith("radialpow:"):
        k = float(text.split(":", 1)[1])
        if k < 0:
            raise ValueError("radialpow exponent must be nonnegative")
        return RadialPower(k)
    raise ValueError(f"unknown symbol {text!r}")


# ---------------------------------------------------------------- operators


class Operator:
    """Base class; subclasses implement ``kernel_image``."""

    name = "operator"

    def kernel_image(self, z, alpha: float) -> AnalyticFunction:
        raise NotImplementedError

    def apply_to_kernel(self, z, w, alpha: float, grid: QuadratureGrid | None = None):
        return self.kernel_image(complex(as_disk(z)), alpha)(as_disk(w, "w"))

    def __mul__(self, c):
        return LinearCombination(((c, self),))

    __rmul__ = __mul__

    def __add__(self, other):
        return LinearCombination(((1.0, self), (1.0, other)))


@dataclass(frozen=True)
class Identity(Operator):
    name = "identity"

    def kernel_image(self, z, alpha):
        return ClosedForm(_Kernel(complex(z), alpha))


@dataclass(frozen=True)
class Zero(Operator):
    name = "zero"

    def kernel_image(self, z, alpha):
        return ClosedForm(_Const(0.0))


@dataclass(frozen=True)
class Diagonal(Operator):
    """S e_n = lambda_n e_n on the orthonormal basis e_n = w^n / sqrt(gamma_n).

    ``n_terms="auto"`` sizes the truncation so the tail bound is below
    1e-15 relative to |K_z|; an explicit integer is checked against
    ``tail_tol`` (relative) and rejected with TruncationError if it falls short.
    """

    eigenvalues: Callable
    n_terms: int | str = "auto"
    sup_bound: float | None = None
    tail_tol: float = 1e-9
    name: str = "diagonal"

    @property
    def sup(self) -> float:
        if self.sup_bound is not None:
            return self.sup_bound
        return getattr(self.eigenvalues, "sup", math.inf)

    def terms_for(self, x: float, alpha: float) -> int:
        if self.n_terms == "auto":
            return auto_terms(x, alpha, sup=max(self.sup, 1e-300) if math.isfinite(self.sup) else 1.0)
        n = int(self.n_terms)
        bound = kernel_tail_bound(x, alpha, n, self.sup)
        if bound > self.tail_tol * (1.0 - x) ** (-(2.0 + alpha)):
            raise TruncationError(f"{n} terms leave a tail of {bound:.3g} at |z w| = {x}; raise n_terms")
        return n

    def coefficients(self, z, alpha: float, radius: float = 1.0) -> np.ndarray:
        z = complex(z)
        n = np.arange(self.terms_for(abs(z) * radius, alpha))
        lam = np.asarray(self.eigenvalues(n), dtype=complex)
        zc = np.conj(z)
        if zc == 0:
            pw = (n == 0).astype(complex)
        else:
            pw = np.exp(n * np.log(zc))
        return lam * pw * np.exp(-log_gamma_n(n, alpha))

    def kernel_image(self, z, alpha):
        return TaylorSeries(self.coefficients(z, alpha))

    def apply_to_kernel(self, z, w, alpha, grid=None):
        z = complex(as_disk(z))
        w = as_disk(w, "w")
        rad = float(np.max(np.abs(w)))
        return TaylorSeries(self.coefficients(z, alpha, rad))(w)

    def berezin_closed_form(self, z, alpha: float) -> complex:
        """(1 - |z|^2)^(2+alpha) sum_n lambda_n |z|^(2n) / gamma_n."""
        z = complex(as_disk(z))
        x = abs(z) ** 2
        n = np.arange(self.terms_for(x, alpha))
        lam = np.asarray(self.eigenvalues(n), dtype=complex)
        if x == 0:
            return complex(lam[0])
        logt = n * math.log(x) - log_gamma_n(n, alpha) + (2.0 + alpha) * math.log1p(-x)
        return complex(np.sum(lam * np.exp(logt)))


@dataclass(frozen=True)
class Toeplitz(Operator):
    """T_phi f = P(phi f).

    Radial symbols with known eigenvalues act diagonally; other symbols use
    the projection form (T_phi K_z)(w) = int phi K_z conj(K_w) dA_alpha.
    """

    symbol: Symbol

    @property
    def name(self) -> str:
        return f"toeplitz:{self.symbol.name}"

    @property
    def spectral(self) -> bool:
        return hasattr(self.symbol, "eigenvalues")

    def as_diagonal(self, alpha: float) -> Diagonal:
        return Diagonal(_SymbolEigen(self.symbol, alpha), sup_bound=1.0, name=self.name)

    def kernel_image(self, z, alpha):
        if self.spectral:
            return self.as_diagonal(alpha).kernel_image(z, alpha)
        return self.projected_image(z, alpha)

    def projected_image(self, z, alpha: float, n_rad: int | None = None,
                        n_ang: int | None = None) -> TaylorSeries:
        """Taylor coefficients of P(phi K_z) from ring-FFT moments int phi K_z conj(u)^n dA_alpha."""
        z = complex(z)
        need = auto_terms(abs(z), alpha, 1e-13)
        if n_ang is None:
            n_ang = max(angular_count(z), 1 << max(9, math.ceil(math.log2(2 * need))))
        if n_rad is None:
            n_rad = min(4096, max(DEFAULT_N_RAD, 1 << math.ceil(math.log2(need / 2 + 1))))
        grid = build_grid(alpha, n_rad, n_ang, theta0=math.pi / n_ang)
        n_terms = min(need, n_ang // 2, 2 * n_rad - 1)
        n = np.arange(n_terms)
        mom = np.zeros(n_terms, dtype=complex)
        logr = np.log(grid.radii)
        kz = _Kernel(z, alpha)
        for sl, block in grid.ring_blocks():
            vals = np.asarray(self.symbol(block)) * kz(block)
            spec = np.fft.fft(vals, axis=1)[:, n % n_ang]
            rw = grid.ring_weights[sl, None] * np.exp(n[None, :] * logr[sl, None])
            mom += np.sum(rw * spec, axis=0)
        mom *= np.exp(-1j * n * grid.theta0)
        return TaylorSeries(mom * np.exp(-log_gamma_n(n, alpha)))

    def apply_to_kernel(self, z, w, alpha, grid=None):
        z = complex(as_disk(z))
        w = as_disk(w, "w")
        if grid is None and self.spectral:
            return self.as_diagonal(alpha).apply_to_kernel(z, w, alpha)
        return self.projection_form(z, w, alpha, grid)

    def projection_form(self, z, w, alpha: float, grid: QuadratureGrid | None = None):
        """Direct quadrature of int phi(u) K_z(u) conj(K_w(u)) dA_alpha(u)."""
        z = complex(as_disk(z))
        w = as_disk(w, "w")
        pts = np.atleast_1d(w)
        if grid is None:
            n_ang = angular_count(np.concatenate([[z], pts.ravel()]))
            grid = build_grid(alpha, DEFAULT_N_RAD, n_ang, theta0=math.pi / n_ang)
        kz = _Kernel(z, alpha)
        out = np.array([integrate(lambda u, wi=wi: self.symbol(u) * kz(u) * np.conj(_Kernel(wi, alpha)(u)), grid)
                        for wi in pts.ravel()], dtype=complex)
        return complex(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))

    def berezin_symbol_form(self, z, alpha: float) -> float:
        """int phi |k_z|^2 dA_alpha."""
        z = complex(as_disk(z))
        n_ang = angular_count(z)
        grid = build_grid(alpha, DEFAULT_N_RAD, n_ang, theta0=math.pi / n_ang)
        val = integrate(lambda u: self.symbol(u) * np.abs(normalized_kernel(z, u, alpha)) ** 2, grid)
        return val


@dataclass(frozen=True)
class _SymbolEigen:
    symbol: Symbol
    alpha: float
    sup: float = 1.0

    def __call__(self, n):
        return self.symbol.eigenvalues(n, self.alpha)


@dataclass(frozen=True)
class FiniteRank(Operator):
    """f -> sum_i <f, g_i> h_i with analytic g_i, so <K_z, g_i> = conj(g_i(z))."""

    terms: tuple
    name: str = "finiterank"

    def kernel_image(self, z, alpha):
        z = complex(z)
        parts = tuple((np.conj(complex(np.asarray(g(np.asarray(z))).item())), ClosedForm(h))
                      for g, h in self.terms)
        return FunctionSum(parts)


def rank_one_projection() -> FiniteRank:
    """f -> <f, 1> 1."""
    return FiniteRank(((one, one),), name="rank1")


@dataclass(frozen=True)
class IntegralKernel(Operator):
    """(Sf)(w) = int H(w, u) f(u) dA_alpha(u), by quadrature on a modest grid."""

    H: Callable
    n_rad: int = 64
    n_ang: int = 256
    name: str = "integral"

    def kernel_image(self, z, alpha):
        return ClosedForm(_IntegralImage(self, complex(z), alpha))


@dataclass(frozen=True)
class _IntegralImage:
    op: IntegralKernel
    z: complex
    alpha: float

    def __call__(self, w):
        grid = grid_for(self.z, self.alpha, self.op.n_rad, self.op.n_ang)
        u = grid.nodes.ravel()
        wt = grid.weights.ravel() * _Kernel(self.z, self.alpha)(u)
        pts = np.atleast_1d(np.asarray(w, dtype=complex))
        out = np.array([np.sum(wt * self.op.H(wi, u)) for wi in pts.ravel()])
        return complex(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))


@dataclass(frozen=True)
class LinearCombination(Operator):
    terms: tuple = field(default_factory=tuple)
    name: str = "combination"

    def kernel_image(self, z, alpha):
        return FunctionSum(tuple((c, op.kernel_image(z, alpha)) for c, op in self.terms))

    def apply_to_kernel(self, z, w, alpha, grid=None):
        out = 0.0
        for c, op in self.terms:
            out = out + c * np.asarray(op.apply_to_kernel(z, w, alpha, grid))
        return complex(out) if np.ndim(out) == 0 else out


def parse_operator(text: str) -> Operator:
    """Selectors: identity, zero, rank1, toeplitz:<symbol>, diagonal:inv_n, diagonal:pow:<s>, diagonal:const:<c>."""
    if text == "identity":
        return Identity()
    if text == "zero":
        return Zero()
    if text == "rank1":
        return rank_one_projection()
    family, _, rest = text.partition(":")
    if family == "toeplitz" and rest:
        return Toeplitz(parse_symbol(rest))
    if family == "diagonal":
        if rest == "inv_n":
            return Diagonal(InverseIndex(), name=text)
        kind, _, val = rest.partition(":")
        if kind == "pow" and val:
            s = float(val)
            if s < 0:
                raise ValueError("diagonal:pow exponent must be nonnegative")
            return Diagonal(PowerDecay(s), name=text)
        if kind == "const" and val:
            return Diagonal(ConstantSequence(complex(val)), name=text)
    raise ValueError(f"unknown operator selector {text!r}")


# ---------------------------------------------------------------- derived quantities


def U_z_apply(z, f: Callable, w, alpha: float):
    """(U_z f)(w) = f(phi_z(w)) k_z(w)."""
    z = complex(as_disk(z))
    w = as_disk(w, "w")
    return f(mobius(z, w)) * normalized_kernel(z, w, alpha)


def sz_one(S: Operator, z, w, alpha: float):
    """(S_z 1)(w) = (S k_z)(phi_z(w)) k_z(w)."""
    z = complex(as_disk(z))
    w = as_disk(w, "w")
    s = 2.0 + alpha
    v = mobius(z, w)
    skz = (1.0 - abs(z) ** 2) ** (s / 2.0) * np.asarray(S.kernel_image(z, alpha)(v))
    out = skz * normalized_kernel(z, w, alpha)
    return complex(out) if np.ndim(out) == 0 else out


def _ratio_on_grid(S: Operator, z: complex, alpha: float, grid: QuadratureGrid):
    """S K_z / K_z at the grid nodes, equal to S_z 1 at phi_z(node)."""
    img = S.kernel_image(z, alpha).on_grid(grid)
    return img * (1.0 - np.conj(z) * grid.nodes) ** (2.0 + alpha)


def _weighted_kz2(z: complex, beta: float, nodes) -> np.ndarray:
    """|k_z|^2 for the weight beta: the Jacobian of phi_z for dA_beta."""
    return (1.0 - abs(z) ** 2) ** (2.0 + beta) / np.abs(1.0 - np.conj(z) * nodes) ** (2.0 * (2.0 + beta))


def scan_quantities(S: Operator, z, alpha: float, ms: Sequence[float] = (),
                    beta: float | None = None, grid: QuadratureGrid | None = None):
    """Berezin transform and {m: ||S_z 1||_{m,beta}} from one evaluation of S K_z.

    ``beta`` defaults to alpha.  The norm integrals use a grid for dA_beta;
    the Berezin value always uses dA_alpha.
    """
    z = complex(as_disk(z))
    for m in ms:
        if not m > 0:
            raise ValueError("m must be positive")
    beta = alpha if beta is None else beta
    if grid is None:
        grid = grid_for(z, alpha)
    ratio = _ratio_on_grid(S, z, alpha, grid)
    ber = complex(integrate_values(ratio * _weighted_kz2(z, alpha, grid.nodes), grid))
    if beta != alpha:
        grid = build_grid(beta, grid.n_rad, grid.n_ang, grid.theta0)
        ratio = _ratio_on_grid(S, z, alpha, grid)
    absr = np.abs(ratio)
    kz2 = _weighted_kz2(z, beta, grid.nodes)
    norms = {m: float(integrate_values(absr**m * kz2, grid)) ** (1.0 / m) for m in ms}
    return ber, norms


def sz_one_norms(S: Operator, z, ms: Sequence[float], alpha: float,
                 grid: QuadratureGrid | None = None, beta: float | None = None) -> dict:
    """{m: ||S_z 1||_{m,beta}} (beta defaults to alpha)."""
    if not ms:
        return {}
    return scan_quantities(S, z, alpha, ms, beta, grid)[1]


def sz_one_norm(S: Operator, z, m: float, alpha: float, grid: QuadratureGrid | None = None) -> float:
    return sz_one_norms(S, z, [m], alpha, grid)[m]


def sz_one_norm_direct(S: Operator, z, m: float, alpha: float,
                       grid: QuadratureGrid | None = None) -> float:
    """||S_z 1||_{m,alpha} by evaluating S_z 1 pointwise at the grid nodes (slow cross-check)."""
    z = complex(as_disk(z))
    if grid is None:
        grid = build_grid(alpha, 128, 256)
    vals = np.abs(sz_one(S, z, grid.nodes, alpha)) ** m
    return float(integrate_values(vals, grid)) ** (1.0 / m)


BEREZIN_METHODS = ("quadrature", "reproducing")


def berezin(S: Operator, z, alpha: float, grid: QuadratureGrid | None = None,
            method: str = "quadrature") -> complex:
    """<S k_z, k_z>.

    ``quadrature``: (1 - |z|^2)^(2+alpha) int S K_z conj(K_z) dA_alpha.
    ``reproducing``: (1 - |z|^2)^(2+alpha) (S K_z)(z), exact for analytic S K_z.
    """
    z = complex(as_disk(z))
    s = 2.0 + alpha
    scale = (1.0 - abs(z) ** 2) ** s
    if method == "reproducing":
        return complex(scale * S.kernel_image(z, alpha)(z))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}; choose from {BEREZIN_METHODS}")
    # <S K_z, K_z> (1-|z|^2)^s = int (S K_z / K_z) |k_z|^2 dA_alpha.
    return scan_quantities(S, z, alpha, (), grid=grid)[0]


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    norm: float
    passed: bool


def kernel_pointwise_bound_check(S: Operator, z, w, m: float, alpha: float,
                                 grid: QuadratureGrid | None = None, slack: float = 1e-4) -> BoundCheck:
    """|S K_z(w)| <= ||S_z 1||_m (1-|z|^2)^(-s/m) (1-|w|^2)^(-s/m) / |1 - conj(z) w|^((1-2/m) s)."""
    z = complex(as_disk(z))
    w = complex(as_disk(w, "w"))
    s = 2.0 + alpha
    lhs = abs(S.apply_to_kernel(z, w, alpha))
    norm = sz_one_norm(S, z, m, alpha, grid)
    rhs = norm * ((1 - abs(z) ** 2) * (1 - abs(w) ** 2)) ** (-s / m) / abs(1 - np.conj(z) * w) ** ((1 - 2 / m) * s)
    return BoundCheck(float(lhs), float(rhs), norm, bool(lhs <= rhs * (1 + slack)))


def two_norm(f: Callable, alpha: float, peak=0.0) -> float:
    grid = grid_for(peak, alpha)
    return math.sqrt(integrate(lambda w: np.abs(f(w)) ** 2, grid))


__all__ = [
    "AnalyticFunction", "BoundCheck", "ClosedForm", "ConstantSequence", "Diagonal", "FiniteRank",
    "FunctionSum", "HalfDisk", "Identity", "IntegralKernel", "InverseIndex", "LinearCombination",
    "Operator", "PowerDecay", "RadialPower", "TaylorSeries", "Toeplitz", "TruncationError",
    "U_z_apply", "Zero", "auto_terms", "berezin", "kernel", "kernel_pointwise_bound_check",
    "kernel_tail_bound", "monomial_norm_sq", "parse_operator", "parse_symbol", "rank_one_projection",
    "scan_quantities",
    "sz_one", "sz_one_norm", "sz_one_norm_direct", "sz_one_norms",
]
