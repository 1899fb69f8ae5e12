import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose

from symbreak import closed_forms as cf
from symbreak.closed_forms import InadmissibleParameters, ParamSet


def test_derive_basic():
    assert cf.derive(ParamSet(d=5)).a_c == 1.5
    assert cf.derive(ParamSet(d=5, a=1.5)).Lambda == 0.0
    der = cf.derive(ParamSet(d=3, a=0.2, b=0.2))
    assert_allclose(der.p_of_ab, 6.0, rtol=1e-15)
    assert der.two_star == 6.0
    assert cf.derive(ParamSet(d=4, a=0.0, b=1.0)).p_of_ab == 2.0


def test_two_star_sentinel():
    assert cf.critical_exponent(1) is cf.UNBOUNDED
    assert cf.critical_exponent(2) == math.inf
    assert 1e300 < cf.critical_exponent(2)


def test_derive_rejects():
    with pytest.raises(InadmissibleParameters):
        cf.derive(ParamSet(d=0))
    with pytest.raises(InadmissibleParameters):
        cf.derive(ParamSet(d=3, p=-1.0))


def test_admissible_examples():
    v = cf.admissible(ParamSet(d=3, a=0.0, b=0.5, theta=1.0), "CKN")
    assert v.ok
    assert cf.p_of(0.0, 0.5, 3) == 3.0
    v = cf.admissible(ParamSet(d=2, a=-1.0, gamma=0.4), "WLH")
    assert not v.ok and v.reason == "γ > 1/2 required when d=2"
    v = cf.admissible(ParamSet(d=3, a=0.0, b=1.5, theta=1.0), "CKN")
    assert not v.ok and v.reason == "b ≤ a+1 violated"


@pytest.mark.parametrize(
    "params, family",
    [
        (ParamSet(d=3), "CKN"),
        (ParamSet(d=3, a=0.6, b=0.7, theta=1.0), "CKN"),
        (ParamSet(d=1, a=-1.0, b=-0.8, theta=0.9), "CKN"),
        (ParamSet(d=1, a=-1.0, b=-0.2, theta=0.4), "CKN"),
        (ParamSet(d=3, a=0.0, b=0.5, theta=0.1), "CKN"),
        (ParamSet(d=4, a=0.0, gamma=0.5), "WLH"),
        (ParamSet(d=3, a=0.0, b=0.5, theta=1.0), "other"),
        (ParamSet(d=3, a=math.nan, b=0.5, theta=1.0), "CKN"),
    ],
)
def test_admissible_rejects_without_raising(params, family):
    assert not cf.admissible(params, family).ok


def test_scaling_laws():
    assert cf.radial_scaling_ckn(0.7, 3.0, 1.0, 2.5) == 2.5
    # (p-2)/(2p) = 1/4 at p = 4, so the exponent is -3/4
    assert_allclose(cf.radial_scaling_ckn(1.0, 4.0, 4.0, 1.0), 4.0 ** (-3.0 / 4.0), rtol=1e-15)
    assert cf.radial_scaling_wlh(0.25, 7.0, 3.0) == 3.0
    assert cf.radial_scaling_wlh(2.0, 1.0, 3.0) == 3.0
    with pytest.raises(InadmissibleParameters):
        cf.radial_scaling_ckn(1.0, 4.0, 0.0, 1.0)
    with pytest.raises(InadmissibleParameters):
        cf.radial_scaling_wlh(0.2, 1.0, 1.0)


def test_a_bar_values():
    assert abs(cf.a_bar(1.0, 6.0, 3)) < 1e-15
    assert_allclose(cf.a_bar(1.0, 4.0, 3), 0.5 - (2 * math.sqrt(2) / 6) * math.sqrt(3), rtol=1e-15)
    assert_allclose(cf.a_bar(1.0, 4.0, 3), -0.3165, atol=1e-4)
    p = 3.0
    assert_allclose(cf.a_bar((p - 2) / (2 * p), p, 4), cf.a_c(4), atol=1e-15)
    with pytest.raises(InadmissibleParameters, match="θ below linearization window"):
        cf.a_bar(0.1, 3.0, 3)


def test_a_bar_increasing_in_theta():
    th = np.linspace(0.2, 1.0, 50)
    vals = [cf.a_bar(t, 3.0, 4) for t in th]
    assert np.all(np.diff(vals) < 0)
    # larger theta pushes the threshold further from a_c


def test_a_tilde_values():
    assert cf.a_tilde(0.25, 4) == cf.a_c(4)
    assert cf.a_tilde(1.25, 5) == -0.5
    with pytest.raises(InadmissibleParameters):
        cf.a_tilde(0.2, 3)


def _lambda_sb_mp(gamma, d):
    g, d = mpmath.mpf(gamma), mpmath.mpf(d)
    q = 4 * g - 1
    return (q / 8 * mpmath.e * (mpmath.pi ** (q - d) / 16) ** (1 / q) * (d / g) ** (4 * g / q)
            * mpmath.gamma(d / 2) ** (2 / q))


def _lambda_star_mp(d):
    d = mpmath.mpf(d)
    return (d - 1) * mpmath.e * (2 ** (d + 1) * mpmath.pi) ** (-1 / (d - 1)) * mpmath.gamma(d / 2) ** (2 / (d - 1))


@pytest.mark.parametrize("gamma, d", [(0.3, 2), (0.75, 3), (1.25, 5), (3.0, 7), (12.5, 30), (40.0, 3)])
def test_lambda_sb_against_mpmath(gamma, d):
    mpmath.mp.dps = 40
    assert_allclose(cf.lambda_sb(gamma, d), float(_lambda_sb_mp(gamma, d)), rtol=1e-13)


@pytest.mark.parametrize("d", [2, 3, 5, 10, 30])
def test_lambda_star_against_mpmath(d):
    mpmath.mp.dps = 40
    assert_allclose(cf.lambda_star_wlh(d), float(_lambda_star_mp(d)), rtol=1e-13)


def test_lambda_star_d5():
    assert_allclose(cf.lambda_star_wlh(5), 3.33, atol=5e-3)
    assert_allclose(cf.a_star_wlh(5), -0.32, atol=5e-3)
    for d in range(2, 12):
        assert_allclose(cf.a_c(d) - cf.a_star_wlh(d), math.sqrt(cf.lambda_star_wlh(d)), rtol=1e-15)


def test_lambda_sb_large_gamma_finite():
    val = cf.lambda_sb(1e6, 3)
    assert math.isfinite(val) and val > 0
    with pytest.raises(InadmissibleParameters):
        cf.lambda_sb(0.25, 3)
    with pytest.raises(InadmissibleParameters):
        cf.lambda_star_wlh(1)


def test_lambda_0_defining_equation():
    d, p = 5, 3.0
    th = cf.vartheta(d, p)
    base, sob = 0.17, 0.0675
    r = cf.lambda_0(th, p, d, base, sob)
    assert_allclose(r.Lambda ** ((d - 1) / d) * sob, th * base ** (1 / th), rtol=1e-13)
    assert_allclose(r.a, cf.a_c(d) - math.sqrt(r.Lambda), rtol=1e-15)


def test_lambda_1_branches():
    d, p = 5, 3.0
    th = cf.vartheta(d, p)
    base, sob = 0.17, 0.0675
    r = cf.lambda_1(th, p, d, base, sob)
    k = base ** (1 / th) / sob
    first, second = k ** (d / (d - 1)), (cf.a_c(d) ** 2 * k) ** d
    assert_allclose(r.Lambda, min(first, second), rtol=1e-13)
    assert r.branch == (0 if first <= second else 1)
    assert "brace" in r.note
    # a tiny Sobolev constant flips the selected branch
    r2 = cf.lambda_1(th, p, d, base, 1e6)
    assert r2.branch == 1


def test_thresholds_need_critical_case():
    with pytest.raises(InadmissibleParameters):
        cf.lambda_0(0.9, 3.0, 5, 0.2, 0.07)
    with pytest.raises(InadmissibleParameters):
        cf.lambda_1(0.5, 3.0, 2, 0.2, 0.07)
