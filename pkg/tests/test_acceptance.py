"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that pytest prints in an "acceptance
criteria" section; ``python3 tests/test_acceptance.py`` prints the same lines.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import RESULTS  # noqa: E402

from bergman_lab import atomic, diagnostics, estimates, kernels, lattice, operators  # noqa: E402
from bergman_lab.cli import main as cli_main  # noqa: E402
from bergman_lab.quadrature import grid_for, integrate, integrate_values  # noqa: E402


def record(num: int, ok: bool, text: str) -> None:
    RESULTS[num] = ("PASS" if ok else "FAIL", text)
    assert ok, text


def test_criterion_01_integral_brackets():
    start = time.perf_counter()
    worst = -math.inf
    ok = True
    for c, t in ((-1, 0), (1, 0), (2, 1), (0.5, -0.5), (0, 0)):
        for zr in (0.0, 0.5, 0.9, 0.99):
            res = estimates.I_ct(zr, c, t)
            lo, hi = estimates.I_ct_bounds(zr, c, t)
            slack = res.err_est + 1e-9
            ok &= lo - slack <= res.value <= hi + slack
            worst = max(worst, (lo - res.value) / lo, (res.value - hi) / hi)
    elapsed = time.perf_counter() - start
    record(1, bool(ok and elapsed < 30), f"20 integral brackets, worst relative excess {worst:.3g}, {elapsed:.1f}s")


def test_criterion_02_reproducing_property():
    worst_rep = 0.0
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        for zr in (0.0, 0.3, 0.6, 0.9):
            z = zr * np.exp(0.7j)
            grid = grid_for(z, alpha)
            kz = kernels.kernel(z, grid.nodes, alpha)
            for n in range(11):
                worst_rep = max(worst_rep, abs(integrate_values(grid.nodes**n * np.conj(kz), grid) - z**n))
    worst_norm = 0.0
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        for zr in (0.0, 0.5, 0.9, 0.95):
            z = zr * np.exp(-1.1j)
            val = integrate(lambda w: np.abs(kernels.normalized_kernel(z, w, alpha)) ** 2, grid_for(z, alpha))
            worst_norm = max(worst_norm, abs(math.sqrt(val) - 1))
    record(2, worst_rep <= 1e-8 and worst_norm <= 1e-8,
           f"reproducing error {worst_rep:.2g}, unit-norm error {worst_norm:.2g}")


def test_criterion_03_kernel_norm_brackets():
    ok = True
    worst_p2 = 0.0
    for p in (1.5, 2.0, 3.0):
        for alpha in (0.0, 1.0):
            for zr in (0.3, 0.8, 0.95):
                lo, hi = kernels.kernel_norm_bounds(zr, p, alpha)
                val = kernels.kernel_norm(zr, p, alpha)
                ok &= lo * (1 - 1e-6) <= val <= hi * (1 + 1e-6)
                if p == 2:
                    ok &= abs(hi - lo) <= 1e-12 * hi
                    rel = abs(val / (1 - zr**2) ** (-(2 + alpha) / 2) - 1)
                    worst_p2 = max(worst_p2, rel)
    record(3, bool(ok and worst_p2 <= 1e-6), f"18 kernel norms bracketed, p=2 closed-form error {worst_p2:.2g}")


def test_criterion_04_lattice():
    lat = lattice.build_lattice(0.5, 0.95)
    rep = lattice.verify_lattice(lat, 10_000, seed=0)
    errs = [abs(float(np.sum(lattice.cell_measures(lat, a))) - (1 - (1 - 0.95**2) ** (a + 1))) for a in (0.0, 1.0)]
    ok = rep.worst_gap < 0.5 + 1e-9 and rep.min_separation >= 0.25 and max(errs) <= 1e-3
    record(4, bool(ok), f"{lat.count} centers, gap {rep.worst_gap:.4f}, separation {rep.min_separation:.4f}, "
                        f"cell total error {max(errs):.2g}")


def test_criterion_05_atomic_round_trip():
    start = time.perf_counter()
    lats = {r: lattice.build_lattice(r, 0.95) for r in (0.7, 0.5, 0.35)}
    ok = True
    worst = 0.0
    for alpha in (0.0, 1.0):
        k03 = lambda w, a=alpha: (1 - 0.3 * np.asarray(w, dtype=complex)) ** -(2.0 + a)
        for f in (operators.one, operators.identity_fn, k03):
            errs = [atomic.relative_sup_error(atomic.decompose(lats[r], f, 2.0, alpha), f) for r in (0.7, 0.5, 0.35)]
            ok &= errs[2] <= 1e-2 and errs[0] > errs[1] > errs[2]
            worst = max(worst, errs[2])
    elapsed = time.perf_counter() - start
    record(5, bool(ok and elapsed < 120), f"6 round trips, worst error at r=0.35 {worst:.2g}, "
                                          f"strictly decreasing in r, {elapsed:.1f}s")


def test_criterion_06_coefficient_decay():
    lat = lattice.build_lattice(0.7, 0.995)
    z = [1 - 2.0**-n for n in range(1, 7)]
    parts = []
    ok = True
    for alpha in (0.0, 1.0):
        S = atomic.weak_null_coeff_decay(lat, 2.0, alpha, z, 0.6)
        tail_decreasing = all(b < a for a, b in zip(S[2:], S[3:]))
        ok &= tail_decreasing and S[-1] < 0.1 * S[0]
        parts.append(f"alpha={alpha:g}: S6/S1 {S[-1] / S[0]:.3g}")
    record(6, bool(ok), "; ".join(parts))


def test_criterion_07_berezin_oracles():
    errs = {"identity": 0.0, "rank1": 0.0, "diagonal": 0.0}
    R = operators.rank_one_projection()
    D = operators.parse_operator("diagonal:inv_n")
    for alpha in (0.0, 1.0):
        for zr in (0.0, 0.3, 0.6, 0.9, 0.95):
            z = zr * np.exp(0.4j)
            errs["identity"] = max(errs["identity"], abs(operators.berezin(operators.Identity(), z, alpha) - 1))
            errs["rank1"] = max(errs["rank1"], abs(operators.berezin(R, z, alpha) - (1 - zr**2) ** (2 + alpha)))
            errs["diagonal"] = max(errs["diagonal"],
                                   abs(operators.berezin(D, z, alpha) - D.berezin_closed_form(z, alpha)))
    ok = errs["identity"] <= 1e-8 and errs["rank1"] <= 1e-6 and errs["diagonal"] <= 1e-6
    record(7, bool(ok), ", ".join(f"{k} {v:.2g}" for k, v in errs.items()))


def test_criterion_08_pointwise_kernel_bound():
    pts = [0.0, 0.5, -0.7j, 0.8 * np.exp(2.0j), 0.9]
    names = ("identity", "toeplitz:one", "toeplitz:oneminusr2", "rank1")
    count = 0
    worst = 0.0
    ok = True
    for name in names:
        S = operators.parse_operator(name)
        for m in (2.0, 4.0, 8.0):
            for z in pts:
                for w in pts:
                    chk = operators.kernel_pointwise_bound_check(S, z, w, m, 0.0, slack=1e-4)
                    ok &= chk.passed
                    count += 1
                    if chk.rhs > 0:
                        worst = max(worst, chk.lhs / chk.rhs)
    record(8, bool(ok), f"{count} grid checks, largest lhs/rhs {worst:.6f}")


def test_criterion_09_compactness_verdicts():
    start = time.perf_counter()
    expect = {"identity": False, "toeplitz:one": False, "toeplitz:oneminusr2": True,
              "diagonal:inv_n": True, "rank1": True}
    ok = True
    parts = []
    for name, compact in expect.items():
        v = diagnostics.compactness_scan(operators.parse_operator(name), 2.0, 0.0, 5.0).verdicts
        if compact:
            ok &= v["compact_consistent"] and v["berezin_outer_max"] < 0.05 * v["berezin_inner_max"]
            ok &= v["outer_half_monotone"]
        else:
            ok &= not v["compact_consistent"] and v["berezin_outer_max"] > 0.9
        parts.append(f"{name} {'compact' if v['compact_consistent'] else 'not compact'}")
    elapsed = time.perf_counter() - start
    record(9, bool(ok and elapsed < 300), ", ".join(parts) + f", {elapsed:.0f}s")


def test_criterion_10_threshold_arithmetic():
    ok = diagnostics.m_threshold(2, 0) == 4
    grid = np.linspace(1, 1.5, 52)[1:-1]
    ok &= all(diagnostics.m_threshold(p, 0) < 3 / (p - 1) for p in grid)
    worst = 0.0
    for p in (0.5, 1.0):
        for alpha in (0.0, 1.0, 2.5):
            delta = (1 + alpha) / p
            worst = max(worst, abs((2 + alpha) / (p * delta) + 1 - ((1 + p * delta) / (1 + alpha) + 1)))
            worst = max(worst, abs(diagnostics.m_threshold_small_p(p, alpha)[0] - (2 + 1 / (1 + alpha))))
    ok &= worst <= 1e-12
    regimes = [diagnostics.pq_regime(4, 1, 3, 0).classification, diagnostics.pq_regime(4, 1.5, 5, 0).classification,
               diagnostics.pq_regime(4, 1, 2, 0).classification]
    ok &= regimes == ["case_a", "case_b", "inapplicable"]
    record(10, bool(ok), f"m_threshold(2,0)=4, 50-point grid, branch gap {worst:.2g}, regimes {regimes}")


def test_criterion_11_scan_determinism(tmp_path):
    base = ["scan", "--op", "toeplitz:halfdisk", "--p", "2", "--alpha", "0", "--m", "5"]
    codes = [cli_main(base + ["--output", str(tmp_path / "a"), "--jobs", "1"]),
             cli_main(base + ["--output", str(tmp_path / "b"), "--jobs", "2"]),
             cli_main(base + ["--output", str(tmp_path / "c"), "--jobs", "4"])]
    same = all((tmp_path / f"a.{e}").read_bytes() == (tmp_path / f"{x}.{e}").read_bytes()
               for e in ("json", "csv") for x in ("b", "c"))
    record(11, codes == [0, 0, 0] and same, "JSON and CSV byte-identical across three runs with --jobs 1/2/4")


if __name__ == "__main__":
    import tempfile

    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for name, fn in tests:
        try:
            if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            pass
    for num in sorted(RESULTS):
        status, text = RESULTS[num]
        print(f"{status} criterion {num:2d}: {text}")
    sys.exit(0 if all(s == "PASS" for s, _ in RESULTS.values()) and len(RESULTS) == len(tests) else 1)
