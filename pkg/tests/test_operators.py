from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from bergman_lab.kernels import kernel, monomial_norm_sq
from bergman_lab.operators import (ConstantSequence, Diagonal, FiniteRank, HalfDisk, Identity,
                                   IntegralKernel, InverseIndex, LinearCombination, PowerDecay,
                                   RadialPower, Toeplitz, TruncationError, U_z_apply, Zero, auto_terms,
                                   berezin, identity_fn, kernel_pointwise_bound_check, kernel_tail_bound,
                                   one, parse_operator, parse_symbol, rank_one_projection, scan_quantities,
                                   sz_one, sz_one_norm, sz_one_norm_direct, two_norm)
from bergman_lab.quadrature import build_grid

ZS = (0.0, 0.5 * np.exp(0.4j), 0.9 * np.exp(-2.0j), 0.95j)


def test_identity_and_zero_images():
    z, w = 0.6 * np.exp(1j), np.array([0.1, -0.7j, 0.9])
    assert np.allclose(Identity().apply_to_kernel(z, w, 0.5), kernel(z, w, 0.5), rtol=1e-14)
    assert np.all(Zero().apply_to_kernel(z, w, 0.5) == 0)


def test_constant_diagonal_reproduces_kernel():
    D = Diagonal(ConstantSequence(1.0))
    z, w = 0.9, 0.99 * np.exp(0.3j)
    assert D.apply_to_kernel(z, w, 0.0) == pytest.approx(kernel(z, w, 0.0), rel=1e-13)


def test_explicit_truncation_checked():
    # 200 terms at |z w| = 0.9 leave a tail near 1e-6 relative; the check must refuse
    D = Diagonal(ConstantSequence(1.0), n_terms=200)
    with pytest.raises(TruncationError):
        D.apply_to_kernel(0.9, 0.99, 0.0)
    x = 0.9
    exact = float(mpmath.nsum(lambda n: x**n / mpmath.gamma(n + 1) * mpmath.gamma(n + 2), [200, mpmath.inf]))
    assert kernel_tail_bound(x, 0.0, 200) >= exact
    assert exact / (1 - x) ** -2 > 1e-9
    assert Diagonal(ConstantSequence(1.0), n_terms=400).apply_to_kernel(0.9, 0.99, 0.0) == pytest.approx(
        kernel(0.9, 0.99, 0.0), rel=1e-9)


def test_auto_terms_meets_tolerance():
    for x in (0.5, 0.9, 0.99):
        n = auto_terms(x, 1.0)
        assert kernel_tail_bound(x, 1.0, n) <= 1e-15 * (1 - x) ** -3
        assert n == 1 or kernel_tail_bound(x, 1.0, n - 1) > 1e-15 * (1 - x) ** -3


def test_toeplitz_one_reproduces_kernel():
    T = parse_operator("toeplitz:one")
    z, w = 0.7 * np.exp(0.5j), np.array([0.2, -0.6j])
    assert np.allclose(T.apply_to_kernel(z, w, 0.0), kernel(z, w, 0.0), rtol=1e-12)
    assert np.allclose(T.projection_form(z, w, 0.0), kernel(z, w, 0.0), rtol=1e-10)


@pytest.mark.parametrize("k", (1.0, 2.5))
def test_radial_eigenvalues_against_moments(k):
    alpha = 0.5
    sym = RadialPower(k)
    for n in (0, 3, 10):
        f = lambda u: (alpha + 1) * (1 - u) ** (alpha + k) * u**n
        ref = float(mpmath.quad(f, [0, 1])) / monomial_norm_sq(n, alpha)
        assert sym.eigenvalues(n, alpha) == pytest.approx(ref, rel=1e-12)


def test_spectral_and_projection_paths_agree():
    T = parse_operator("toeplitz:oneminusr2")
    z, w = 0.8 * np.exp(1.1j), np.array([0.3, 0.7 * np.exp(-0.4j)])
    spectral = T.apply_to_kernel(z, w, 1.0)
    assert np.allclose(T.projection_form(z, w, 1.0), spectral, rtol=1e-10)
    assert np.allclose(T.projected_image(z, 1.0)(w), spectral, rtol=1e-10)


def test_halfdisk_projection_against_pointwise_quadrature():
    T = parse_operator("toeplitz:halfdisk")
    assert isinstance(T.symbol, HalfDisk)
    z, w = 0.5 * np.exp(0.3j), np.array([0.1j, -0.4])
    assert np.allclose(T.kernel_image(z, 0.0)(w), T.projection_form(z, w, 0.0), rtol=1e-6)
    # the Berezin transform at the origin is the measure of the half disk
    assert berezin(T, 0.0, 0.0).real == pytest.approx(0.5, abs=1e-12)


def test_U_z_isometry():
    for f in (one, identity_fn, lambda w: w**2, lambda w: (1 - 0.3 * w) ** -2):
        for z in (0.5, 0.9 * np.exp(0.7j)):
            Uf = lambda w, z=z, f=f: U_z_apply(z, f, w, 0.0)
            assert two_norm(Uf, 0.0, peak=z) == pytest.approx(two_norm(f, 0.0), abs=1e-7)


def test_sz_one_examples():
    w = np.array([0.0, 0.3, -0.8j])
    for z in ZS:
        assert np.allclose(sz_one(Identity(), z, w, 1.0), 1, atol=1e-12)
        assert np.allclose(sz_one(Diagonal(ConstantSequence(2.0)), z, w, 1.0), 2, atol=1e-11)
        assert sz_one_norm(Identity(), z, 3.0, 0.0) == pytest.approx(1.0, abs=1e-10)
        assert sz_one_norm(Identity() * (-2.5), z, 4.0, 0.0) == pytest.approx(2.5, abs=1e-9)


def test_fast_and_direct_norms_agree():
    T = parse_operator("toeplitz:oneminusr2")
    for z in (0.0, 0.6 * np.exp(0.2j)):
        for m in (1.0, 2.0, 5.0):
            assert sz_one_norm(T, z, m, 0.0) == pytest.approx(sz_one_norm_direct(T, z, m, 0.0), rel=1e-8)
    assert sz_one_norm(T, 0.0, 2.0, 0.0) == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("alpha", (0.0, 1.0))
def test_berezin_oracles(alpha):
    R = rank_one_projection()
    D = parse_operator("diagonal:inv_n")
    for z in ZS:
        x = abs(z) ** 2
        assert abs(berezin(Identity(), z, alpha) - 1) <= 1e-8
        assert berezin(R, z, alpha) == pytest.approx((1 - x) ** (2 + alpha), abs=1e-6)
        assert berezin(D, z, alpha) == pytest.approx(D.berezin_closed_form(z, alpha), abs=1e-6)
        assert berezin(D, z, alpha, method="reproducing") == pytest.approx(D.berezin_closed_form(z, alpha), abs=1e-12)
    with pytest.raises(ValueError):
        berezin(Identity(), 0.1, alpha, method="nope")


def test_diagonal_closed_form_against_mpmath():
    D = parse_operator("diagonal:inv_n")
    x, alpha = 0.81, 1.0
    s = mpmath.nsum(lambda n: x**n / (n + 1) * mpmath.gamma(n + alpha + 2)
                    / (mpmath.gamma(n + 1) * mpmath.gamma(alpha + 2)), [0, mpmath.inf])
    assert D.berezin_closed_form(0.9, alpha).real == pytest.approx(float(s * (1 - x) ** (2 + alpha)), rel=1e-12)


def test_toeplitz_berezin_dual_path():
    for name in ("oneminusr2", "radialpow:2", "halfdisk"):
        T = parse_operator(f"toeplitz:{name}")
        for z in (0.3j, 0.9 * np.exp(0.1j)):
            assert berezin(T, z, 0.0) == pytest.approx(T.berezin_symbol_form(z, 0.0), abs=1e-6)


def test_berezin_linearity():
    R, D = rank_one_projection(), parse_operator("diagonal:pow:2")
    S = R * 2.0 + D * (-0.5j)
    assert isinstance(S, LinearCombination)
    for z in ZS[:3]:
        expect = 2.0 * berezin(R, z, 0.0) - 0.5j * berezin(D, z, 0.0)
        assert berezin(S, z, 0.0) == pytest.approx(expect, abs=1e-9)


def test_finite_rank_general_terms():
    F = FiniteRank(((identity_fn, identity_fn),))
    z = 0.6 * np.exp(0.9j)
    # S f = <f, w> w, so S K_z = conj(z) w and the Berezin value is |z|^2 (1-|z|^2)^2 at alpha = 0
    assert F.apply_to_kernel(z, 0.3, 0.0) == pytest.approx(np.conj(z) * 0.3)
    assert berezin(F, z, 0.0).real == pytest.approx(0.36 * 0.64**2, abs=1e-12)


def test_integral_kernel_bergman_projection():
    P = IntegralKernel(lambda w, u: (1 - w * np.conj(u)) ** -2.0)
    z = 0.4j
    assert P.apply_to_kernel(z, 0.5, 0.0) == pytest.approx(kernel(z, 0.5, 0.0), rel=1e-10)


@pytest.mark.parametrize("name", ("identity", "toeplitz:one", "toeplitz:oneminusr2", "rank1"))
def test_pointwise_bound(name):
    S = parse_operator(name)
    pts = [0.0, 0.5, -0.7j, 0.8 * np.exp(2.0j), 0.9]
    for m in (2.0, 4.0, 8.0):
        for z in pts:
            for w in pts:
                assert kernel_pointwise_bound_check(S, z, w, m, 0.0).passed


def test_pointwise_bound_examples():
    chk = kernel_pointwise_bound_check(parse_operator("toeplitz:oneminusr2"), 0.7, -0.4j, 4.0, 0.0)
    assert chk.passed and chk.lhs <= chk.rhs
    zero = kernel_pointwise_bound_check(Zero(), 0.3, 0.2, 4.0, 0.0)
    assert zero.lhs == 0 and zero.rhs == 0 and zero.passed


def test_parsers():
    assert parse_operator("identity").name == "identity"
    assert parse_operator("rank1").name == "rank1"
    assert parse_operator("toeplitz:radialpow:3").name == "toeplitz:radialpow:3"
    assert isinstance(parse_operator("diagonal:inv_n").eigenvalues, InverseIndex)
    assert isinstance(parse_operator("diagonal:pow:1.5").eigenvalues, PowerDecay)
    assert parse_symbol("oneminusr2") == RadialPower(1.0)
    for bad in ("", "toeplitz:", "toeplitz:square", "diagonal:pow:-1", "diagonal:foo"):
        with pytest.raises(ValueError):
            parse_operator(bad)


def test_scan_quantities_weight_change():
    T = parse_operator("toeplitz:oneminusr2")
    ber, norms = scan_quantities(T, 0.5, 0.0, (2.0,), beta=1.5)
    assert ber == pytest.approx(berezin(T, 0.5, 0.0), abs=1e-12)
    grid = build_grid(1.5, 128, 256)
    assert norms[2.0] == pytest.approx(float(np.sqrt(np.sum(
        grid.weights * np.abs(sz_one(T, 0.5, grid.nodes, 0.0)) ** 2))), rel=1e-8)
    with pytest.raises(ValueError):
        scan_quantities(T, 0.5, 0.0, (0.0,))


def test_sz_one_norms_grow_only_as_allowed():
    # the spectral Toeplitz oneminusr2 keeps S_z 1 bounded by 1 on the disk
    T = parse_operator("toeplitz:oneminusr2")
    for z in ZS:
        assert sz_one_norm(T, z, 8.0, 0.0) <= 1 + 1e-9
    assert math.isfinite(sz_one_norm(parse_operator("toeplitz:halfdisk"), 0.99, 5.0, 0.0))
