import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import eigvalsh_tridiagonal

from oracles import harmonic_oscillator_ground
from symbreak.closed_forms import InadmissibleParameters, a_bar, a_c, a_from_Lambda, critical_p
from symbreak.radial_opt import ConvergenceError, ckn_radial_constant
from symbreak.spectral import (
    assemble_sector_operator,
    k1_eigenvalue,
    lowest_eigenvalue,
    schrodinger_operator,
    spectral_threshold,
    sturm_count,
    symmetry_verdict,
)


def _oscillator(L=12.0, n=4001):
    s = np.linspace(-L, L, n + 1)[1:-1]
    return schrodinger_operator(s**2, 2 * L / n)


def test_harmonic_oscillator():
    exact = harmonic_oscillator_ground()
    assert_allclose(exact, 1.0, atol=1e-14)
    assert abs(lowest_eigenvalue(_oscillator()) - exact) <= 1e-8


def test_sturm_count_against_lapack():
    rng = np.random.default_rng(3)
    diag = rng.normal(size=200)
    off = rng.normal(size=199)
    eigs = eigvalsh_tridiagonal(diag, off)
    for x in np.linspace(eigs[0] - 1, eigs[-1] + 1, 37):
        assert sturm_count(diag, off, x) == int(np.sum(eigs < x))


def test_lowest_against_lapack():
    op = _oscillator(n=2001)
    ref = eigvalsh_tridiagonal(op.diagonal, op.offdiagonal, select="i", select_range=(0, 0))[0]
    assert abs(lowest_eigenvalue(op, extrapolate=False) - ref) <= 1e-10


def test_free_operator_tends_to_c():
    c = 2.5
    prev = math.inf
    for L in (5.0, 10.0, 20.0, 40.0):
        n = int(40 * L)
        h = 2 * L / n
        op = schrodinger_operator(np.full(n - 1, c), h)
        lam = lowest_eigenvalue(op, extrapolate=False)
        # exact discrete Dirichlet eigenvalue
        assert_allclose(lam, c + 2 / h**2 * (1 - math.cos(math.pi / n)), atol=1e-10)
        assert c < lam < prev
        prev = lam


def test_shift_moves_eigenvalue_exactly():
    op = _oscillator(n=1001)
    shifted = schrodinger_operator(op.potential + 3.0, op.h)
    assert_allclose(lowest_eigenvalue(shifted), lowest_eigenvalue(op) + 3.0, atol=2e-10)


def test_refinement_order():
    errs = []
    for n in (500, 1000, 2000):
        errs.append(abs(lowest_eigenvalue(_oscillator(n=n), extrapolate=False) - 1.0))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.9)


@pytest.fixture(scope="module")
def maximizer():
    return ckn_radial_constant(0.8, 3.0, 1.0, 4, extrapolate=False).require()


def test_sector_shift_between_k0_and_k1(maximizer):
    op0 = assemble_sector_operator(maximizer, 0.8, 1.0, 3.0, 4, 0).local_part()
    op1 = assemble_sector_operator(maximizer, 0.8, 1.0, 3.0, 4, 1)
    assert op0.kinetic == op1.kinetic
    assert_allclose(op1.potential - op0.potential, op1.kinetic * 3.0, rtol=1e-13)


def test_theta_one_operator():
    est = ckn_radial_constant(1.0, 4.0, 1.0, 3, extrapolate=False).require()
    op = assemble_sector_operator(est, 1.0, 1.0, 4.0, 3, 1)
    v = est.profile.values
    assert_allclose(op.kinetic, 1.0, rtol=1e-12)
    expected = (1.0 + 2.0) - est.multiplier * 3.0 * v**2
    assert_allclose(op.potential, expected, rtol=1e-12, atol=1e-12)


def test_felli_schneider_value():
    # theta = 1: the k = 1 eigenvalue is Lambda + d - 1 - p^2 Lambda / 4
    for p, Lam, d in [(4.0, 1.0, 3), (3.0, 2.0, 5)]:
        assert_allclose(k1_eigenvalue(1.0, p, Lam, d), Lam + d - 1 - p * p * Lam / 4, atol=1e-5)


def test_tangent_k0_nonnegative(maximizer):
    op = assemble_sector_operator(maximizer, 0.8, 1.0, 3.0, 4, 0)
    assert lowest_eigenvalue(op) >= -1e-8


def test_unconverged_rejected():
    est = ckn_radial_constant(0.8, 3.0, 1.0, 3, max_iter=2, extrapolate=False)
    with pytest.raises(ConvergenceError):
        assemble_sector_operator(est, 0.8, 1.0, 3.0, 3, 1)


def test_report_invariants():
    rep = symmetry_verdict(0.8, 3.0, 1.0, 4, kmax=4)
    eigs = [rep.sector_eigenvalues[k] for k in range(5)]
    assert np.all(np.diff(eigs) > 0)
    assert rep.margin == rep.sector_eigenvalues[1]
    assert rep.profile_meta["d"] == 4
    assert set(rep.to_dict()) >= {"sector_eigenvalues", "verdict", "margin", "profile_meta"}


@pytest.mark.parametrize("theta, p, d", [(1.0, 4.0, 3), (0.8, 3.0, 5)])
def test_verdict_around_a_bar(theta, p, d):
    ab = a_bar(theta, p, d)
    above = symmetry_verdict(theta, p, (ab + 0.02 - a_c(d)) ** 2, d, kmax=1)
    below = symmetry_verdict(theta, p, (ab - 0.02 - a_c(d)) ** 2, d, kmax=1)
    assert above.verdict == "symmetric_stable" and above.margin > 0
    assert below.verdict == "symmetry_broken" and below.margin < 0


def test_k1_monotone_near_crossing():
    theta, p, d = 0.9, 3.0, 4
    ab = a_bar(theta, p, d)
    a_vals = ab + np.linspace(-0.05, 0.05, 6)
    eigs = [k1_eigenvalue(theta, p, (a - a_c(d)) ** 2, d) for a in a_vals]
    assert np.all(np.diff(eigs) > 0)


@pytest.mark.parametrize("theta, p, d, expected", [(1.0, 6.0, 3, 0.0), (1.0, 4.0, 3, -0.3165)])
def test_spectral_threshold_examples(theta, p, d, expected):
    val = spectral_threshold(theta, p, d)
    assert abs(val - a_bar(theta, p, d)) <= 1e-3
    assert abs(val - expected) <= 1e-3


def test_threshold_rejects():
    with pytest.raises(InadmissibleParameters):
        spectral_threshold(1.0, 4.0, 1)


def _grid_cases():
    cases = []
    for d in (3, 4, 5):
        p_max = min(2 * d / (d - 2), 6.0)
        for p in np.linspace(2.5, p_max - 0.3, 5):
            floor = d * (p - 2) / (2 * p)
            for theta in np.linspace(floor, 1.0, 5):
                cases.append((float(theta), float(p), d))
    return cases


@pytest.mark.slow
@pytest.mark.parametrize("theta, p, d", _grid_cases())
def test_threshold_grid_agrees_with_a_bar(theta, p, d):
    assert abs(spectral_threshold(theta, p, d) - a_bar(theta, p, d)) <= 1e-3
