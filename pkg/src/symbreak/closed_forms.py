"""Closed-form quantities for the CKN and WLH families.

Everything here is a direct evaluation: parameter bookkeeping (a_c, Lambda,
vartheta, p(a, b), 2*), admissibility windows, the radial scaling laws in
Lambda, and the threshold expressions a_bar, a_tilde, Lambda_SB,
Lambda_star_WLH, a_0 and a_1.

Formulas with large exponents (Lambda_SB for big gamma) are evaluated in log
space so that no intermediate power under- or overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

#: Explicit marker for 2* when d is 1 or 2. Comparisons against it behave
#: like an unbounded upper limit.
UNBOUNDED = math.inf


class InadmissibleParameters(ValueError):
    """Raised when a parameter tuple lies outside the window of a formula."""


@dataclass(frozen=True)
class ParamSet:
    """Parameters of an inequality. Unused entries stay ``None``."""

    d: int
    a: float | None = None
    b: float | None = None
    p: float | None = None
    theta: float | None = None
    gamma: float | None = None


@dataclass(frozen=True)
class DerivedParams:
    a_c: float
    Lambda: float | None
    vartheta: float | None
    p_of_ab: float | None
    two_star: float


class Verdict(NamedTuple):
    ok: bool
    reason: str


def critical_exponent(d: int) -> float:
    """2* = 2d/(d-2) for d >= 3, ``UNBOUNDED`` otherwise."""
    return 2.0 * d / (d - 2.0) if d >= 3 else UNBOUNDED


def a_c(d: int) -> float:
    return (d - 2) / 2.0


def Lambda_of(a: float, d: int) -> float:
    x = a - a_c(d)
    return x * x


def vartheta(d: int, p: float) -> float:
    return d * (p - 2.0) / (2.0 * p)


def p_of(a: float, b: float, d: int) -> float:
    """The exponent p(a, b) = 2d / (d - 2 + 2(b - a))."""
    return 2.0 * d / (d - 2.0 + 2.0 * (b - a))


def a_from_Lambda(Lambda: float, d: int) -> float:
    """Inverse of Lambda(a) on the branch a < a_c."""
    return a_c(d) - math.sqrt(Lambda)


def critical_p(theta: float, d: int) -> float:
    """p such that vartheta(d, p) = theta, i.e. p = 2d / (d - 2 theta)."""
    return 2.0 * d / (d - 2.0 * theta)


def derive(params: ParamSet) -> DerivedParams:
    d = params.d
    if not isinstance(d, (int,)) or d < 1:
        raise InadmissibleParameters(f"dimension must be an integer >= 1, got {d!r}")
    p = params.p
    p_ab = None
    if params.a is not None and params.b is not None:
        denom = d - 2.0 + 2.0 * (params.b - params.a)
        p_ab = 2.0 * d / denom if denom > 0 else math.nan
        if p is None:
            p = p_ab
    if p is not None and not p > 0:
        raise InadmissibleParameters(f"p must be positive, got {p!r}")
    return DerivedParams(
        a_c=a_c(d),
        Lambda=None if params.a is None else Lambda_of(params.a, d),
        vartheta=None if p is None else vartheta(d, p),
        p_of_ab=p_ab,
        two_star=critical_exponent(d),
    )


def admissible(params: ParamSet, family: str) -> Verdict:
    """Check the parameter windows of the CKN or WLH family.

    Never raises; the reason names the first violated condition.
    """
    family = family.upper()
    d = params.d
    if not isinstance(d, int) or d < 1:
        return Verdict(False, "d >= 1 required")
    ac = a_c(d)
    a = params.a
    if a is None:
        return Verdict(False, "a is required")
    if not math.isfinite(a):
        return Verdict(False, "a must be finite")
    if not a < ac:
        return Verdict(False, "a < a_c violated")

    if family == "WLH":
        g = params.gamma
        if g is None or not math.isfinite(g):
            return Verdict(False, "gamma is required")
        if d == 2 and not g > 0.5:
            return Verdict(False, "γ > 1/2 required when d=2")
        if not g >= d / 4.0:
            return Verdict(False, "γ ≥ d/4 violated")
        return Verdict(True, "admissible")

    if family != "CKN":
        return Verdict(False, f"unknown family {family!r}")

    b = params.b
    theta = params.theta
    if b is None or not math.isfinite(b):
        return Verdict(False, "b is required")
    if theta is None or not math.isfinite(theta):
        return Verdict(False, "theta is required")
    if not b <= a + 1:
        return Verdict(False, "b ≤ a+1 violated")
    if d == 1:
        if not b > a + 0.5:
            return Verdict(False, "b > a+1/2 violated (d=1)")
        if not (0.5 < theta <= 1):
            return Verdict(False, "θ ∈ (1/2, 1] violated (d=1)")
    elif d == 2:
        if not b > a:
            return Verdict(False, "b > a violated (d=2)")
    elif not b >= a:
        return Verdict(False, "b ≥ a violated")
    if not (0 <= theta <= 1):
        return Verdict(False, "θ ∈ [0, 1] violated")
    p = p_of(a, b, d)
    if params.p is not None and not math.isclose(params.p, p, rel_tol=1e-12, abs_tol=1e-12):
        return Verdict(False, f"p = p(a,b) = {p:.17g} violated")
    if d >= 2 and not theta >= vartheta(d, p) - 1e-15:
        return Verdict(False, "θ ≥ ϑ(d,p) violated")
    return Verdict(True, "admissible")


def radial_scaling_ckn(theta: float, p: float, Lambda: float, base: float) -> float:
    """C*_CKN at Lambda from its value ``base`` at Lambda = 1."""
    if not Lambda > 0:
        raise InadmissibleParameters("Lambda = 0: the radial CKN constant diverges")
    if not base > 0:
        raise InadmissibleParameters("base constant must be positive")
    return base * Lambda ** ((p - 2.0) / (2.0 * p) - theta)


def radial_scaling_wlh(gamma: float, Lambda: float, base: float) -> float:
    """C*_WLH at Lambda from its value ``base`` at Lambda = 1."""
    if not Lambda > 0:
        raise InadmissibleParameters("Lambda = 0: the radial WLH constant diverges")
    if not gamma >= 0.25:
        raise InadmissibleParameters("gamma >= 1/4 required")
    if not base > 0:
        raise InadmissibleParameters("base constant must be positive")
    return base * Lambda ** (-1.0 + 1.0 / (4.0 * gamma))


def a_bar(theta: float, p: float, d: int) -> float:
    """Linearization threshold: below it the radial extremal is unstable."""
    if d < 2:
        raise InadmissibleParameters("a_bar needs d >= 2")
    if not p > 2:
        raise InadmissibleParameters("a_bar needs p > 2")
    arg = 2.0 * p * theta / (p - 2.0) - 1.0
    if arg < 0:
        raise InadmissibleParameters("θ below linearization window")
    return a_c(d) - 2.0 * math.sqrt(d - 1.0) / (p + 2.0) * math.sqrt(arg)


def a_tilde(gamma: float, d: int) -> float:
    if d < 2:
        raise InadmissibleParameters("a_tilde needs d >= 2")
    if not gamma >= 0.25:
        raise InadmissibleParameters("gamma >= 1/4 required")
    return a_c(d) - 0.5 * math.sqrt((d - 1.0) * (4.0 * gamma - 1.0))


def log_lambda_sb(gamma: float, d: int) -> float:
    """log Lambda_SB(gamma), summed term by term."""
    if not gamma > 0.25:
        raise InadmissibleParameters("Lambda_SB needs gamma > 1/4")
    q = 4.0 * gamma - 1.0
    return (
        math.log(q / 8.0)
        + 1.0
        + ((q - d) * math.log(math.pi) - math.log(16.0)) / q
        + (4.0 * gamma / q) * math.log(d / gamma)
        + (2.0 / q) * math.lgamma(d / 2.0)
    )


def lambda_sb(gamma: float, d: int) -> float:
    return math.exp(log_lambda_sb(gamma, d))


def lambda_star_wlh(d: int) -> float:
    if d < 2:
        raise InadmissibleParameters("Lambda_star_WLH needs d >= 2")
    log_val = (
        math.log(d - 1.0)
        + 1.0
        - ((d + 1) * math.log(2.0) + math.log(math.pi)) / (d - 1.0)
        + 2.0 * math.lgamma(d / 2.0) / (d - 1.0)
    )
    return math.exp(log_val)


def a_star_wlh(d: int) -> float:
    return a_c(d) - math.sqrt(lambda_star_wlh(d))


class ThresholdValue(NamedTuple):
    Lambda: float
    a: float
    branch: int = 0
    note: str = ""


def _check_critical(theta: float, p: float, d: int) -> float:
    if d < 3:
        raise InadmissibleParameters("the Schwarz and a priori thresholds need d >= 3")
    th = vartheta(d, p)
    if not math.isclose(theta, th, rel_tol=1e-9, abs_tol=1e-12):
        raise InadmissibleParameters(
            f"critical case required: theta = {theta!r} but vartheta(d, p) = {th!r}"
        )
    return th


def lambda_0(theta: float, p: float, d: int, base_ckn: float, sobolev: float) -> ThresholdValue:
    """Schwarz-symmetrization threshold in the critical case theta = vartheta(p, d).

    Solves ``Lambda**((d-1)/d) = vartheta * base**(1/vartheta) / S_d`` where
    ``base`` is C*_CKN at Lambda = 1 and ``S_d`` the Sobolev constant.
    """
    th = _check_critical(theta, p, d)
    if not (base_ckn > 0 and sobolev > 0):
        raise InadmissibleParameters("base constant and Sobolev constant must be positive")
    log_rhs = math.log(th) + math.log(base_ckn) / th - math.log(sobolev)
    Lam = math.exp(log_rhs * d / (d - 1.0))
    return ThresholdValue(Lam, a_c(d) - math.sqrt(Lam))


LAMBDA1_READING = (
    "min{(C^(1/theta)/S_d)^(d/(d-1)), (a_c^2 C^(1/theta)/S_d)^d} "
    "(unbalanced brace closed at the end of the expression)"
)


def lambda_1(theta: float, p: float, d: int, base_ckn: float, sobolev: float) -> ThresholdValue:
    """A priori existence threshold; ``branch`` is 0 or 1 for the selected term of the min."""
    _check_critical(theta, p, d)
    if not (base_ckn > 0 and sobolev > 0):
        raise InadmissibleParameters("base constant and Sobolev constant must be positive")
    log_k = math.log(base_ckn) / theta - math.log(sobolev)
    first = log_k * d / (d - 1.0)
    second = (2.0 * math.log(a_c(d)) + log_k) * d
    branch = 0 if first <= second else 1
    Lam = math.exp(min(first, second))
    return ThresholdValue(Lam, a_c(d) - math.sqrt(Lam), branch, LAMBDA1_READING)
