"""Linearization of the CKN functional around the radial maximizer.

Perturbations ``f(s) Y_k(omega)`` with ``Y_k`` a normalized spherical
harmonic of degree ``k`` decouple.  For ``k >= 1`` the perturbation is
orthogonal to every s-only quantity, so the second variation of
``E = A^theta B^(1-theta)`` under the constraint ``|v|_p = 1`` reduces to the
local Schrodinger form

    c1 (-f'' + (Lambda + k(k+d-2)) f) + c2 f - mu (p-1) v^(p-2) f,

with ``c1 = theta A^(theta-1) B^(1-theta)``, ``c2 = (1-theta) A^theta B^(-theta)``
and ``mu = E`` for the normalized maximizer.  For ``k = 0`` a rank-one term

    -2 theta (1-theta) E |S^{d-1}| z <z, f>,   z = (-v'' + Lambda v)/A - v/B,

is added and the form is restricted to ``<v^(p-1), f> = 0``.  A negative
eigenvalue in the ``k = 1`` sector means the radial maximizer is not a local
minimizer among all functions: symmetry is broken.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.linalg import solve_banded
from scipy.sparse.linalg import LinearOperator, lobpcg

from .closed_forms import InadmissibleParameters, a_c, a_from_Lambda
from .cylinder import DEFAULT_L, DEFAULT_N, LineProfile, SphereData, dirichlet_sum, stiffness_apply
from .radial_opt import ConstantEstimate, ConvergenceError, ckn_radial_constant, default_tol


@dataclass(frozen=True, eq=False)
class SectorOperator:
    """Symmetric tridiagonal operator on the interior grid nodes, Dirichlet outside.

    ``potential`` holds the zeroth-order coefficient so the operator can be
    re-assembled on a coarser grid.  ``rank_one`` and ``constraint`` are set
    only for the ``k = 0`` sector.
    """

    k: int
    h: float
    kinetic: float
    potential: np.ndarray = field(repr=False)
    rank_one: np.ndarray | None = field(default=None, repr=False)
    rank_coef: float = 0.0
    constraint: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.potential.size

    @property
    def diagonal(self) -> np.ndarray:
        return 2.0 * self.kinetic / self.h**2 + self.potential

    @property
    def offdiagonal(self) -> np.ndarray:
        return np.full(self.n - 1, -self.kinetic / self.h**2)

    def local_part(self) -> "SectorOperator":
        return SectorOperator(self.k, self.h, self.kinetic, self.potential)

    def coarsened(self) -> "SectorOperator":
        return SectorOperator(self.k, 2.0 * self.h, self.kinetic, self.potential[::2])

    def matvec(self, f: np.ndarray) -> np.ndarray:
        """Apply to a vector or to the columns of a 2-D block."""
        f = np.asarray(f, dtype=float)
        col = f.ndim == 1
        F = f.reshape(self.n, -1)
        out = self.diagonal[:, None] * F
        off = -self.kinetic / self.h**2
        out[:-1] += off * F[1:]
        out[1:] += off * F[:-1]
        if self.rank_one is not None:
            z = self.rank_one
            out -= self.rank_coef * self.h * np.outer(z, z @ F)
        return out[:, 0] if col else out


def schrodinger_operator(potential: np.ndarray, h: float, kinetic: float = 1.0, k: int = 0) -> SectorOperator:
    """``kinetic * (-f'') + potential * f`` on a uniform grid with spacing ``h``."""
    return SectorOperator(k, h, kinetic, np.asarray(potential, dtype=float))


def sturm_count(diag, off, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``."""
    d = diag.tolist() if isinstance(diag, np.ndarray) else list(diag)
    e2 = [e * e for e in (off.tolist() if isinstance(off, np.ndarray) else off)]
    tiny = 1e-300
    count = 0
    q = d[0] - x
    if q == 0.0:
        q = -tiny
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def _bisect_lowest(diag, off, abstol=1e-11):
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = float(np.min(diag - radius))
    hi = float(np.min(diag + radius))
    while hi - lo > abstol + 4e-16 * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if sturm_count(diag, off, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _tangent_lowest(op: SectorOperator) -> float:
    """Lowest eigenvalue of the k = 0 operator restricted to ``constraint``-orthogonal functions."""
    n = op.n
    A = LinearOperator((n, n), matvec=op.matvec, matmat=op.matvec, dtype=float)
    local_min = _bisect_lowest(op.diagonal, op.offdiagonal, abstol=1e-6)
    shift = max(0.0, -local_min) + abs(op.kinetic)
    bands = np.zeros((3, n))
    bands[0, 1:] = -op.kinetic / op.h**2
    bands[1] = op.diagonal + shift
    bands[2, :-1] = -op.kinetic / op.h**2
    solve = lambda x: solve_banded((1, 1), bands, x)
    M = LinearOperator((n, n), matvec=solve, matmat=solve, dtype=float)
    Y = op.constraint.reshape(-1, 1) / np.linalg.norm(op.constraint)
    X = np.random.default_rng(0).standard_normal((n, 3))
    with warnings.catch_warnings():
        # only the lowest pair is used; its residual is checked below
        warnings.simplefilter("ignore", UserWarning)
        vals, vecs = lobpcg(A, X, M=M, Y=Y, largest=False, tol=1e-10, maxiter=2000)
    i = int(np.argmin(vals))
    x = vecs[:, i] - Y[:, 0] * (Y[:, 0] @ vecs[:, 0])
    x /= np.linalg.norm(x)
    r = op.matvec(x) - vals[i] * x
    r -= Y[:, 0] * (Y[:, 0] @ r)
    scale = max(1.0, abs(op.kinetic) / op.h**2)
    if np.linalg.norm(r) > 1e-6 * scale:
        raise ConvergenceError(f"constrained k=0 eigensolve stalled, residual {np.linalg.norm(r):.3e}")
    return float(vals[i])


def lowest_eigenvalue(op: SectorOperator, extrapolate: bool = True, abstol: float = 1e-11) -> float:
    """Smallest eigenvalue by Sturm-sequence bisection.

    With ``extrapolate`` the value on the grid with spacing ``2h`` (every
    other node) is combined with the fine one by Richardson extrapolation.
    Operators carrying a rank-one term and constraint (``k = 0``) are
    handled by constrained LOBPCG instead, without extrapolation.
    """
    if op.rank_one is not None:
        return _tangent_lowest(op)
    fine = _bisect_lowest(op.diagonal, op.offdiagonal, abstol)
    if not extrapolate:
        return fine
    c = op.coarsened()
    coarse = _bisect_lowest(c.diagonal, c.offdiagonal, abstol)
    return fine + (fine - coarse) / 3.0


def _cylinder_quantities(profile: LineProfile, Lambda: float, d: int):
    S = SphereData(d).surface
    v = profile.values
    B = S * profile.integrate(v * v)
    A = S * dirichlet_sum(v, profile.h) + Lambda * B
    return A, B


def assemble_sector_operator(
    maximizer, theta: float, Lambda: float, p: float, d: int, k: int, mu: float | None = None
) -> SectorOperator:
    """Discrete second variation in the degree-``k`` harmonic sector.

    ``maximizer`` is a :class:`ConstantEstimate` from :func:`ckn_radial_constant`
    (rejected unless converged) or its profile, normalized to unit L^p norm
    on the cylinder.  ``mu`` defaults to the estimate's multiplier, or to
    ``E[v]`` for a bare profile.
    """
    if k < 0:
        raise ValueError("k >= 0 required")
    if isinstance(maximizer, ConstantEstimate):
        est = maximizer.require()
        maximizer = est.profile
        mu = est.multiplier if mu is None else mu
    A, B = _cylinder_quantities(maximizer, Lambda, d)
    E = A**theta * B ** (1.0 - theta)
    mu = E if mu is None else mu
    c1 = theta * E / A
    c2 = (1.0 - theta) * E / B
    v = maximizer.values
    ang = SphereData(d).harmonic_eigenvalue(k)
    potential = c1 * (Lambda + ang) + c2 - mu * (p - 1.0) * np.abs(v) ** (p - 2.0)
    if k > 0:
        return SectorOperator(k, maximizer.h, c1, potential)
    h = maximizer.h
    Lv = stiffness_apply(v, h) / h + Lambda * v
    z = Lv / A - v / B
    coef = 2.0 * theta * (1.0 - theta) * E * SphereData(d).surface
    return SectorOperator(0, h, c1, potential, rank_one=z, rank_coef=coef, constraint=np.abs(v) ** (p - 1.0))


@dataclass
class SpectralReport:
    sector_eigenvalues: dict[int, float]
    verdict: str
    margin: float
    profile_meta: dict
    tangent_k0: float | None = None

    def to_dict(self) -> dict:
        return {
            "sector_eigenvalues": {str(k): v for k, v in self.sector_eigenvalues.items()},
            "verdict": self.verdict,
            "margin": self.margin,
            "tangent_k0": self.tangent_k0,
            "profile_meta": self.profile_meta,
        }


def symmetry_verdict(
    theta: float,
    p: float,
    Lambda: float,
    d: int,
    kmax: int = 3,
    L: float = DEFAULT_L,
    n: int = DEFAULT_N,
    tol: float | None = None,
    with_tangent: bool = False,
) -> SpectralReport:
    """Sector eigenvalues at the radial maximizer and the symmetry verdict.

    ``sector_eigenvalues[k]`` is the lowest eigenvalue of the local part of
    the sector operator (for ``k = 0`` this omits the rank-one term and the
    constraint; the constrained value is ``tangent_k0`` when requested).
    The verdict follows the sign of the ``k = 1`` eigenvalue.
    """
    tol = default_tol() if tol is None else tol
    if d < 2:
        raise InadmissibleParameters("symmetry breaking needs d >= 2")
    est = ckn_radial_constant(theta, p, Lambda, d, L=L, n=n, extrapolate=False, tol=tol).require()
    prof = est.profile
    eigs = {}
    for k in range(kmax + 1):
        op = assemble_sector_operator(prof, theta, Lambda, p, d, k).local_part()
        eigs[k] = lowest_eigenvalue(op)
    lam1 = eigs.get(1, math.nan)
    if lam1 < -tol:
        verdict = "symmetry_broken"
    elif lam1 <= tol:
        verdict = "marginal"
    else:
        verdict = "symmetric_stable"
    tangent = None
    if with_tangent:
        tangent = lowest_eigenvalue(assemble_sector_operator(prof, theta, Lambda, p, d, 0))
    meta = {
        "theta": theta, "p": p, "Lambda": Lambda, "a": a_from_Lambda(Lambda, d), "d": d,
        "L": prof.L, "n": prof.n, "constant": est.raw_value, "residual": est.residual,
    }
    return SpectralReport(eigs, verdict, lam1, meta, tangent)


def k1_eigenvalue(theta: float, p: float, Lambda: float, d: int, L: float = DEFAULT_L, n: int = DEFAULT_N) -> float:
    """Lowest eigenvalue of the ``k = 1`` sector operator at the radial maximizer."""
    est = ckn_radial_constant(theta, p, Lambda, d, L=L, n=n, extrapolate=False).require()
    op = assemble_sector_operator(est.profile, theta, Lambda, p, d, 1)
    return lowest_eigenvalue(op)


def spectral_threshold(
    theta: float, p: float, d: int, L: float = DEFAULT_L, n: int = DEFAULT_N, xtol: float = 1e-6
) -> float:
    """Value of ``a`` where the ``k = 1`` eigenvalue changes sign.

    The eigenvalue is positive for ``a`` close to ``a_c`` and becomes
    negative below the threshold.  A sign change is bracketed inside
    ``(a_c - 10, a_c)`` by geometric steps in ``Lambda = (a - a_c)^2`` and then
    refined with Brent's method in ``a``.
    """
    if d < 2:
        raise InadmissibleParameters("symmetry breaking needs d >= 2")
    ac = a_c(d)

    def f(a):
        return k1_eigenvalue(theta, p, (a - ac) ** 2, d, L=L, n=n)

    Lam_min, Lam_max = 1e-4, 100.0
    Lam = 1.0
    val = f(a_from_Lambda(Lam, d))
    if val < 0:
        while val < 0:
            hi_Lam = Lam
            Lam /= 4.0
            if Lam < Lam_min:
                raise ConvergenceError("no crossing in bracket (a_c - 10, a_c)")
            val = f(a_from_Lambda(Lam, d))
        lo_Lam = Lam
    else:
        while val >= 0:
            lo_Lam = Lam
            Lam *= 4.0
            if Lam > Lam_max:
                Lam = Lam_max
                val = f(a_from_Lambda(Lam, d))
                if val >= 0:
                    raise ConvergenceError("no crossing in bracket (a_c - 10, a_c)")
                break
            val = f(a_from_Lambda(Lam, d))
        hi_Lam = Lam
    # lo_Lam: stable side (a closer to a_c), hi_Lam: broken side
    a_stable, a_broken = a_from_Lambda(lo_Lam, d), a_from_Lambda(hi_Lam, d)
    return optimize.brentq(f, a_broken, a_stable, xtol=xtol, rtol=1e-12)
