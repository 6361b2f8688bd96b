"""Invariant suites run by ``bergman-lab verify``; each yields Check rows."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from . import atomic, diagnostics, estimates, geometry, kernels, lattice, operators, quadrature


@dataclass(frozen=True)
class Check:
    check_id: str
    params: str
    observed: float
    expected: float
    passed: bool


def _close(cid, params, observed, expected, tol):
    return Check(cid, params, float(observed), float(expected), bool(abs(observed - expected) <= tol))


def _at_most(cid, params, observed, bound):
    return Check(cid, params, float(observed), float(bound), bool(observed <= bound))


def suite_geometry():
    rng = np.random.default_rng(1)
    z = 0.9 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    w = 0.9 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    yield _at_most("mobius_involution", "200 random pairs",
                   np.max(np.abs(geometry.mobius(z, geometry.mobius(z, w)) - w)), 1e-13)
    yield _close("pseudo_hyperbolic_example", "z=0.5,w=0.25i", geometry.pseudo_hyperbolic(0.5, 0.25j),
                 0.5547001962252291, 1e-12)
    rho = geometry.pseudo_hyperbolic(z, w)
    moved = geometry.pseudo_hyperbolic(geometry.mobius(0.3 - 0.4j, z), geometry.mobius(0.3 - 0.4j, w))
    yield _at_most("rho_mobius_invariant", "a=0.3-0.4i", np.max(np.abs(rho - moved)), 1e-12)
    d = geometry.bergman_disk(0.6, 0.5)
    edge = d.center + d.radius
    yield _close("bergman_disk_boundary", "a=0.6,r=0.5", geometry.bergman_metric(0.6, edge), 0.5, 1e-12)


def suite_quadrature():
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        grid = quadrature.build_grid(alpha, 64, 64)
        for n in (0, 5, 40):
            exact = (alpha + 1.0) * math.exp(betaln(n + 1.0, alpha + 1.0))
            val = quadrature.integrate(lambda w, n=n: np.abs(w) ** (2 * n), grid)
            yield _close("radial_moment", f"alpha={alpha},n={n}", val, exact, 1e-13 * max(1, exact))
        val = quadrature.integrate(lambda w: w**3 * np.conj(w) ** 2, grid)
        yield _at_most("angular_orthogonality", f"alpha={alpha}", abs(val), 1e-15)
    yield _close("gamma_half", "x=0.5", quadrature.gamma(0.5), math.sqrt(math.pi), 1e-15)


def suite_kernels():
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        for zr in (0.0, 0.5, 0.9):
            z = zr * np.exp(0.7j)
            grid = quadrature.grid_for(z, alpha)
            kz = kernels.kernel(z, grid.nodes, alpha)
            worst = 0.0
            for n in range(11):
                val = quadrature.integrate_values(grid.nodes**n * np.conj(kz), grid)
                worst = max(worst, abs(val - z**n))
            yield _at_most("reproducing_property", f"alpha={alpha},|z|={zr}", worst, 1e-8)
        for zr in (0.5, 0.95):
            z = zr * np.exp(-1.1j)
            grid = quadrature.grid_for(z, alpha)
            val = quadrature.integrate(lambda w: np.abs(kernels.normalized_kernel(z, w, alpha)) ** 2, grid)
            yield _close("unit_normalized_kernel", f"alpha={alpha},|z|={zr}", math.sqrt(val), 1.0, 1e-8)
    for p in (1.5, 2.0, 3.0):
        for alpha in (0.0, 1.0):
            for zr in (0.3, 0.8, 0.95):
                lo, hi = kernels.kernel_norm_bounds(zr, p, alpha)
                val = kernels.kernel_norm(zr, p, alpha)
                ok = lo * (1 - 1e-9) <= val <= hi * (1 + 1e-9)
                yield Check("kernel_norm_bracket", f"p={p},alpha={alpha},|z|={zr}", val, hi, ok)


def suite_estimates():
    for c, t in ((-1, 0), (1, 0), (2, 1), (0.5, -0.5), (0, 0)):
        for zr in (0.0, 0.5, 0.9, 0.99):
            res = estimates.I_ct(zr, c, t)
            lo, hi = estimates.I_ct_bounds(zr, c, t)
            slack = res.err_est + 1e-9
            ok = lo - slack <= res.value <= hi + slack
            yield Check("I_ct_bracket", f"c={c},t={t},|z|={zr}", res.value, hi, ok)
    lat = lattice.build_lattice(0.5, 0.999)
    for t1, t2 in ((2.0, 3.0), (2.0, 2.0), (2.0, 0.0)):
        rep = estimates.lattice_sum_envelope_check(lat, t1, t2, [0.5, 0.9, 0.99, 0.999])
        yield Check("lattice_sum_envelope", f"t1={t1},t2={t2}", rep.constant, math.inf, rep.passed)


def suite_lattice():
    lat = lattice.build_lattice(0.5, 0.95)
    rep = lattice.verify_lattice(lat, 10_000, seed=0)
    yield _at_most("covering_gap", "r=0.5,R_max=0.95", rep.worst_gap, 0.5 + 1e-9)
    yield Check("separation", "r=0.5,R_max=0.95", rep.min_separation, 0.25, rep.min_separation >= 0.25)
    for alpha in (0.0, 1.0):
        total = float(np.sum(lattice.cell_measures(lat, alpha)))
        yield _close("cell_measure_total", f"alpha={alpha}", total, 1 - (1 - 0.95**2) ** (alpha + 1), 1e-3)


def suite_atomic():
    errors = []
    for r in (0.7, 0.5, 0.35):
        lat = lattice.build_lattice(r, 0.95)
        exp = atomic.decompose(lat, operators.one, 2.0, 0.0)
        err = atomic.relative_sup_error(exp, operators.one)
        errors.append(err)
        yield _at_most("round_trip_one", f"r={r},alpha=0,p=2", err, 1e-2)
    yield Check("error_decreases", "r in (0.7,0.5,0.35)", errors[-1], errors[0],
                bool(errors[0] > errors[1] > errors[2]))
    lat = lattice.build_lattice(0.7, 0.995)
    S = atomic.weak_null_coeff_decay(lat, 2.0, 0.0, [1 - 2.0**-n for n in range(1, 7)], 0.6)
    yield Check("weak_null_decay", "R=0.6,p=2,alpha=0", S[-1] / S[0], 0.1,
                bool(S[-1] < 0.1 * S[0] and all(b < a for a, b in zip(S, S[1:]))))


def suite_operators():
    ops = {"identity": operators.Identity(), "toeplitz:one": operators.parse_operator("toeplitz:one"),
           "toeplitz:oneminusr2": operators.parse_operator("toeplitz:oneminusr2"),
           "rank1": operators.rank_one_projection()}
    for alpha in (0.0, 1.0):
        for zr in (0.0, 0.5, 0.95):
            z = zr * np.exp(0.4j)
            yield _close("berezin_identity", f"alpha={alpha},|z|={zr}",
                         abs(operators.berezin(ops["identity"], z, alpha)), 1.0, 1e-8)
            yield _close("berezin_rank1", f"alpha={alpha},|z|={zr}",
                         operators.berezin(ops["rank1"], z, alpha).real, (1 - zr**2) ** (2 + alpha), 1e-6)
            D = operators.parse_operator("diagonal:inv_n")
            yield _close("berezin_diagonal_dual", f"alpha={alpha},|z|={zr}",
                         operators.berezin(D, z, alpha).real, D.berezin_closed_form(z, alpha).real, 1e-6)
    pts = [0.0, 0.5, -0.7j, 0.8 * np.exp(2.0j), 0.9]
    for name, S in ops.items():
        for m in (2.0, 4.0, 8.0):
            ok = all(operators.kernel_pointwise_bound_check(S, z, w, m, 0.0).passed for z in pts for w in pts)
            yield Check("pointwise_kernel_bound", f"{name},m={m:g},5x5", float(ok), 1.0, ok)
    yield _close("m_threshold", "p=2,alpha=0", diagnostics.m_threshold(2, 0), 4.0, 0.0)


SUITES = {
    "geometry": suite_geometry,
    "quadrature": suite_quadrature,
    "kernels": suite_kernels,
    "estimates": suite_estimates,
    "lattice": suite_lattice,
    "atomic": suite_atomic,
    "operators": suite_operators,
}


def run_suite(name: str) -> list[Check]:
    if name not in SUITES:
        raise KeyError(name)
    return list(SUITES[name]())
