"""Profiles on the cylinder R x S^{d-1} and the functionals evaluated on them.

After the Emden-Fowler change of variables ``s = log|x|``, ``omega = x/|x|``,
``v(s, omega) = |x|**(a_c - a) * u(x)``, radial functions on R^d become
functions of ``s`` alone.  They are stored as samples on the uniform grid
``s_i = -L + i*h``, ``h = 2L/(n-1)``.

Discretization conventions (shared with the optimizers and the sector
operators):

* integrals use the composite trapezoid rule,
* the Dirichlet term is ``sum((v[i+1] - v[i])**2) / h``, whose first
  variation is the standard three-point Laplacian,
* norms on the cylinder carry the surface factor ``|S^{d-1}|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import roots_jacobi

from .closed_forms import InadmissibleParameters, a_c

DEFAULT_L = 40.0
DEFAULT_N = 8192
DECAY_TOL = 1e-12


def line_grid(L: float, n: int) -> tuple[np.ndarray, float]:
    s = np.linspace(-L, L, n)
    return s, 2.0 * L / (n - 1)


def trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def dirichlet_sum(values: np.ndarray, h: float) -> float:
    """Discrete ``int |v'|^2 ds`` (forward differences, midpoint rule)."""
    dv = np.diff(values)
    return float(dv @ dv) / h


def stiffness_apply(values: np.ndarray, h: float) -> np.ndarray:
    """Half the gradient of :func:`dirichlet_sum`."""
    out = np.empty_like(values)
    dv = np.diff(values) / h
    out[0] = -dv[0]
    out[-1] = dv[-1]
    out[1:-1] = dv[:-1] - dv[1:]
    return out


@dataclass(frozen=True, eq=False)
class LineProfile:
    """Samples of an even, decaying function on ``[-L, L]``."""

    L: float
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L!r}")
        if self.n < 16:
            raise ValueError(f"need at least 16 grid nodes, got {self.n}")
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.n,):
            raise ValueError(f"values has shape {vals.shape}, expected ({self.n},)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, L: float = DEFAULT_L, n: int = DEFAULT_N) -> "LineProfile":
        s, _ = line_grid(L, n)
        return cls(L, n, f(s))

    @cached_property
    def s(self) -> np.ndarray:
        return line_grid(self.L, self.n)[0]

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @cached_property
    def quad_weights(self) -> np.ndarray:
        return trapezoid_weights(self.n, self.h)

    def integrate(self, f_values: np.ndarray) -> float:
        return float(self.quad_weights @ f_values)

    def decay_ratio(self) -> float:
        peak = np.max(np.abs(self.values))
        if peak == 0:
            return math.inf
        return max(abs(self.values[0]), abs(self.values[-1])) / peak

    def is_decayed(self, tol: float = DECAY_TOL) -> bool:
        return self.decay_ratio() <= tol

    def with_values(self, values) -> "LineProfile":
        return LineProfile(self.L, self.n, values)

    def interpolant(self) -> CubicSpline:
        return CubicSpline(self.s, self.values, bc_type="natural")


def sech_profile(L: float = DEFAULT_L, n: int = DEFAULT_N, rate: float = 1.0, power: float = 1.0):
    s, _ = line_grid(L, n)
    return LineProfile(L, n, np.exp(-power * np.logaddexp(rate * s, -rate * s) + power * math.log(2)))


def gaussian_profile(L: float = DEFAULT_L, n: int = DEFAULT_N, width: float = 1.0):
    s, _ = line_grid(L, n)
    return LineProfile(L, n, np.exp(-0.5 * (s / width) ** 2))


class SphereData:
    """Surface measure and harmonic data of S^{d-1}.

    ``zonal_rule(m)`` returns nodes ``t`` and weights ``w`` with
    ``sum(w * g(t)) ~ int_{S^{d-1}} g(omega_1) d omega`` for smooth ``g``.
    """

    def __init__(self, d: int):
        if d < 1:
            raise InadmissibleParameters("d >= 1 required")
        self.d = d

    @cached_property
    def surface(self) -> float:
        return 2.0 * math.pi ** (self.d / 2.0) / math.gamma(self.d / 2.0)

    def harmonic_eigenvalue(self, k: int) -> float:
        return float(k * (k + self.d - 2))

    def zonal_rule(self, m: int = 96) -> tuple[np.ndarray, np.ndarray]:
        if self.d == 1:
            return np.array([-1.0, 1.0]), np.array([1.0, 1.0])
        if self.d == 2:
            t = np.cos((2.0 * np.arange(1, m + 1) - 1.0) * math.pi / (2.0 * m))
            return t, np.full(m, 2.0 * math.pi / m)
        t, w = _gegenbauer_rule(m, (self.d - 3) / 2.0)
        return t, w * SphereData(self.d - 1).surface


def _gegenbauer_rule(m: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule for the weight ``(1 - t^2)^alpha`` on ``[-1, 1]``, ``alpha > -1/2``.

    Nodes from ``roots_jacobi`` are polished by Newton steps on the
    orthonormal recurrence, and the weights are the Christoffel numbers
    ``1 / sum_k p_k(t)^2``.  This keeps moments accurate to a few ulp where
    the library weights drift by about 1e-14.
    """
    t, _ = roots_jacobi(m, alpha, alpha)
    lam = alpha + 0.5
    k = np.arange(1, m + 1)
    beta = np.sqrt(k * (k + 2 * lam - 1) / (4 * (k + lam) * (k + lam - 1)))
    mu0 = math.sqrt(math.pi) * math.exp(math.lgamma(alpha + 1) - math.lgamma(alpha + 1.5))

    def orthonormal(x):
        P = np.empty((m + 1, x.size))
        dP = np.empty_like(P)
        P[0], dP[0] = 1.0 / math.sqrt(mu0), 0.0
        P[1], dP[1] = x * P[0] / beta[0], P[0] / beta[0]
        for j in range(1, m):
            P[j + 1] = (x * P[j] - beta[j - 1] * P[j - 1]) / beta[j]
            dP[j + 1] = (P[j] + x * dP[j] - beta[j - 1] * dP[j - 1]) / beta[j]
        return P, dP

    for _ in range(2):
        P, dP = orthonormal(t)
        t = t - P[m] / dP[m]
    P, _ = orthonormal(t)
    return t, 1.0 / np.sum(P[:m] ** 2, axis=0)


@dataclass(frozen=True, eq=False)
class CylinderProfile:
    """``v(s, omega) = base(s) + dipole(s) * omega_1``: an s-only part plus a k = 1 mode."""

    base: LineProfile
    dipole: np.ndarray = field(repr=False)

    def __post_init__(self):
        dip = np.array(self.dipole, dtype=float)
        if dip.shape != (self.base.n,):
            raise ValueError("dipole must live on the grid of the base profile")
        dip.setflags(write=False)
        object.__setattr__(self, "dipole", dip)


@dataclass(frozen=True)
class CylinderFunctionalValue:
    grad_sq: float
    mass_sq: float
    p_norm_sq: float
    energy: float
    entropy: float = math.nan
    bound: float = math.nan

    @property
    def t(self) -> float:
        return self.grad_sq / self.mass_sq


def _cylinder_norms(v, p: float, d: int, m: int = 96):
    """(grad_sq, mass_sq, p_integral) of a LineProfile or CylinderProfile on the cylinder."""
    sph = SphereData(d)
    S = sph.surface
    if isinstance(v, LineProfile):
        G = S * dirichlet_sum(v.values, v.h)
        B = S * v.integrate(v.values**2)
        P = S * v.integrate(np.abs(v.values) ** p)
        return G, B, P
    if isinstance(v, CylinderProfile):
        base, f = v.base, v.dipole
        second_moment = S / d
        G = S * dirichlet_sum(base.values, base.h) + second_moment * (
            dirichlet_sum(f, base.h) + (d - 1) * base.integrate(f**2)
        )
        B = S * base.integrate(base.values**2) + second_moment * base.integrate(f**2)
        t, w = sph.zonal_rule(m)
        field_vals = np.abs(base.values[:, None] + f[:, None] * t[None, :]) ** p
        P = float(base.quad_weights @ field_vals @ w)
        return G, B, P
    raise TypeError(f"unsupported profile type {type(v).__name__}")


def eval_ckn_energy(v, theta: float, Lambda: float, p: float, d: int) -> CylinderFunctionalValue:
    """Evaluate ``E = (|grad v|^2 + Lambda |v|^2)^theta |v|^(2(1-theta))`` on the cylinder.

    ``bound = p_norm_sq / energy`` is a lower bound for the CKN constant.
    """
    if not Lambda > 0:
        raise InadmissibleParameters("Lambda > 0 required")
    if not 0 <= theta <= 1:
        raise InadmissibleParameters("theta in [0, 1] required")
    if not p > 2:
        raise InadmissibleParameters("p > 2 required")
    G, B, P = _cylinder_norms(v, p, d)
    if B == 0:
        raise ValueError("profile is identically zero")
    energy = (G + Lambda * B) ** theta * B ** (1.0 - theta)
    p_norm_sq = P ** (2.0 / p)
    return CylinderFunctionalValue(G, B, p_norm_sq, energy, bound=p_norm_sq / energy)


def _xlogx2(values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    nz = values != 0
    out[nz] = values[nz] ** 2 * (2.0 * np.log(np.abs(values[nz])))
    return out


def eval_wlh_entropy(w: LineProfile, gamma: float, Lambda: float, d: int) -> CylinderFunctionalValue:
    """Entropy ``int_C |w|^2 log |w|^2`` after rescaling ``w`` to unit L^2(C) norm.

    ``bound = exp(entropy / (2 gamma)) / (grad_sq + Lambda)`` is a lower bound
    for the WLH constant.
    """
    if not Lambda > 0:
        raise InadmissibleParameters("Lambda > 0 required")
    S = SphereData(d).surface
    mass = S * w.integrate(w.values**2)
    if mass == 0:
        raise ValueError("profile is identically zero")
    vals = w.values / math.sqrt(mass)
    entropy = S * w.integrate(_xlogx2(vals))
    G = S * dirichlet_sum(vals, w.h)
    bound = math.exp(entropy / (2.0 * gamma)) / (G + Lambda)
    return CylinderFunctionalValue(G, 1.0, math.nan, math.nan, entropy, bound)


def emden_fowler_forward(r: np.ndarray, u: np.ndarray, a: float, d: int, tol: float = DECAY_TOL) -> LineProfile:
    """Map samples of a radial ``u`` on a log-uniform grid to ``v(s) = e^{(a_c - a)s} u(e^s)``.

    ``log r`` must be a uniform grid symmetric about 0.
    """
    r = np.asarray(r, dtype=float)
    s = np.log(r)
    n = s.size
    L = 0.5 * (s[-1] - s[0])
    if n < 16 or not L > 0:
        raise ValueError("need an increasing log-uniform grid with at least 16 nodes")
    if abs(s[0] + s[-1]) > 1e-9 * L or np.max(np.abs(np.diff(s) - 2 * L / (n - 1))) > 1e-9 * L:
        raise ValueError("log r must be uniform and symmetric about 0")
    prof = LineProfile(L, n, np.exp((a_c(d) - a) * s) * np.asarray(u, dtype=float))
    if not prof.is_decayed(tol):
        raise ValueError(
            f"transformed profile does not decay at the ends of the grid "
            f"(ratio {prof.decay_ratio():.3g} > {tol:g}); truncation would be inaccurate"
        )
    return prof


def emden_fowler_inverse(v: LineProfile, a: float, d: int, r: np.ndarray | None = None):
    """Return ``(r, u)`` with ``u(r) = r^{-(a_c - a)} v(log r)``.

    Without ``r`` the native grid ``r = e^s`` is used (exact); otherwise ``v``
    is interpolated by a cubic spline and set to zero outside ``[-L, L]``.
    """
    shift = a_c(d) - a
    if r is None:
        r = np.exp(v.s)
        return r, v.values * np.exp(-shift * v.s)
    r = np.asarray(r, dtype=float)
    s = np.log(r)
    vals = np.where(np.abs(s) <= v.L, v.interpolant()(np.clip(s, -v.L, v.L)), 0.0)
    return r, vals * np.exp(-shift * s)


def sigma_rescale(v, sigma: float, onto: tuple[float, int] | None = None, tol: float = 1e-10):
    """The dilation ``v_sigma(s, omega) = v(sigma s, omega)``.

    By default the samples are kept and the grid is rescaled to
    ``[-L/sigma, L/sigma]``, which is exact.  With ``onto=(L, n)`` the
    dilated function is interpolated onto that grid; this is refused when the
    dilated profile does not fit in it or is resolved by fewer than 16 nodes.
    """
    if not sigma > 0:
        raise ValueError("sigma > 0 required")
    base = v.base if isinstance(v, CylinderProfile) else v
    if onto is None:
        new_base = LineProfile(base.L / sigma, base.n, base.values)
        if isinstance(v, CylinderProfile):
            return CylinderProfile(new_base, v.dipole)
        return new_base

    L, n = onto
    s, h = line_grid(L, n)
    span = base.L / sigma
    if span < L:
        edge = base.decay_ratio()
        if edge > tol:
            raise ValueError(f"dilated profile escapes the grid (edge ratio {edge:.3g})")
    else:
        inside = np.abs(base.s) <= sigma * L
        peak = np.max(np.abs(base.values))
        outside = np.max(np.abs(base.values[~inside]), initial=0.0)
        if outside > tol * peak:
            raise ValueError("dilated profile escapes the grid")
    if 2 * span / h < 16:
        raise ValueError("dilated profile is resolved by fewer than 16 grid nodes")

    def resample(values):
        spline = CubicSpline(base.s, values, bc_type="natural")
        x = sigma * s
        return np.where(np.abs(x) <= base.L, spline(np.clip(x, -base.L, base.L)), 0.0)

    new_base = LineProfile(L, n, resample(base.values))
    if isinstance(v, CylinderProfile):
        return CylinderProfile(new_base, resample(v.dipole))
    return new_base


@dataclass(frozen=True)
class SigmaCheck:
    """Relative residuals of the sigma-scaling identity for both candidate exponents."""

    sigma: float
    exponent_theta: float
    exponent_theta_sq: float
    residual_theta: float
    residual_theta_sq: float


def sigma_identity_check(v, sigma: float, theta: float, Lambda: float, p: float, d: int) -> SigmaCheck:
    """Compare ``Q_{sigma^2 Lambda}[v_sigma]^(1/theta)`` with ``sigma^x Q_Lambda[v]^(1/theta)``.

    ``Q = E / |v|_p^2`` is the energy normalized by the constraint.  Both
    candidate exponents ``x = (2 theta - 1 + 2/p) / theta`` and
    ``x = (2 theta - 1 + 2/p) / theta**2`` are evaluated; residuals are
    relative to the second term.
    """
    v_sigma = sigma_rescale(v, sigma)
    ref = eval_ckn_energy(v, theta, Lambda, p, d)
    new = eval_ckn_energy(v_sigma, theta, sigma**2 * Lambda, p, d)
    q_ref = (ref.energy / ref.p_norm_sq) ** (1.0 / theta)
    q_new = (new.energy / new.p_norm_sq) ** (1.0 / theta)
    num = 2.0 * theta - 1.0 + 2.0 / p
    x1, x2 = num / theta, num / theta**2
    r1 = (q_new - sigma**x1 * q_ref) / (sigma**x1 * q_ref)
    r2 = (q_new - sigma**x2 * q_ref) / (sigma**x2 * q_ref)
    return SigmaCheck(sigma, x1, x2, r1, r2)


def read_profile(path, n: int | None = None, tol: float = 1e-10) -> LineProfile:
    """Read a two-column ``s v(s)`` text file onto a symmetric uniform grid.

    Lines starting with ``#`` are comments; ``s`` must be strictly increasing.
    Values outside the sampled range are taken as zero, so the data must
    decay at both ends.
    """
    path = Path(path)
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns, found {data.shape[1]}")
    s, vals = data[:, 0], data[:, 1]
    if s.size < 4 or np.any(np.diff(s) <= 0):
        raise ValueError(f"{path}: s must be strictly increasing with at least 4 samples")
    peak = np.max(np.abs(vals))
    if peak == 0 or max(abs(vals[0]), abs(vals[-1])) > tol * peak:
        raise ValueError(f"{path}: profile does not decay at the ends of the sampled range")
    L = max(abs(s[0]), abs(s[-1]))
    n = n or max(16, s.size)
    grid, _ = line_grid(L, n)
    spline = CubicSpline(s, vals)
    inside = (grid >= s[0]) & (grid <= s[-1])
    out = np.zeros(n)
    out[inside] = spline(grid[inside])
    return LineProfile(L, n, out)
