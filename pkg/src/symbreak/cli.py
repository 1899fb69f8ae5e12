"""Command-line interface.

Exit codes: 0 success, 2 inadmissible parameters, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import closed_forms as cf
from . import regions, spectral
from .closed_forms import InadmissibleParameters
from .cylinder import DEFAULT_L, DEFAULT_N, LineProfile, eval_ckn_energy, eval_wlh_entropy, gaussian_profile, read_profile, sech_profile
from .radial_opt import (
    ConvergenceError,
    ckn_radial_constant,
    default_tol,
    gn_constant,
    log_sobolev_constant,
    sobolev_constant,
    wlh_radial_constant,
)

EXIT_OK, EXIT_INADMISSIBLE, EXIT_NONCONVERGENCE = 0, 2, 3


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits; non-finite floats become null."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return f"{x:.17g}" if math.isfinite(x) else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _Lambda(args) -> float:
    if getattr(args, "Lambda", None) is not None:
        return args.Lambda
    if getattr(args, "a", None) is None:
        raise InadmissibleParameters("either --lambda or --a is required")
    if not args.a < cf.a_c(args.d):
        raise InadmissibleParameters("a < a_c violated")
    return cf.Lambda_of(args.a, args.d)


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise InadmissibleParameters(f"--{name} is required")


def _maybe(fn, *a):
    try:
        return fn(*a)
    except InadmissibleParameters:
        return None


def cmd_constants(args) -> dict:
    d = args.d
    der = cf.derive(cf.ParamSet(d=d, a=args.a, b=args.b, p=args.p, theta=args.theta, gamma=args.gamma))
    p = args.p if args.p is not None else der.p_of_ab
    th = args.theta
    out = dict.fromkeys(
        ["a_c", "Lambda", "vartheta", "p_ab", "a_bar", "a_tilde", "Lambda_SB", "Lambda_star_WLH", "a_star_WLH",
         "Lambda0", "a0", "Lambda1", "a1"]
    )
    out.update(a_c=der.a_c, Lambda=der.Lambda, vartheta=der.vartheta, p_ab=der.p_of_ab)
    if p is not None and th is not None:
        out["a_bar"] = _maybe(cf.a_bar, th, p, d)
    if args.gamma is not None:
        out["a_tilde"] = _maybe(cf.a_tilde, args.gamma, d)
        out["Lambda_SB"] = _maybe(cf.lambda_sb, args.gamma, d)
    if d >= 2:
        out["Lambda_star_WLH"] = cf.lambda_star_wlh(d)
        out["a_star_WLH"] = cf.a_star_wlh(d)
    critical = d >= 3 and p is not None and th is not None and 2 < p < cf.critical_exponent(d) and math.isclose(
        th, cf.vartheta(d, p), rel_tol=1e-9, abs_tol=1e-12
    )
    if critical:
        base = ckn_radial_constant(th, p, 1.0, d, tol=args.tol).require().value
        sob = sobolev_constant(d).require().value
        l0 = cf.lambda_0(th, p, d, base, sob)
        l1 = cf.lambda_1(th, p, d, base, sob)
        out.update(Lambda0=l0.Lambda, a0=l0.a, Lambda1=l1.Lambda, a1=l1.a,
                   Lambda1_branch=l1.branch, Lambda1_reading=l1.note)
    return out


def cmd_radial_constant(args) -> dict:
    fam = args.family
    grid = {"L": args.length, "n": args.grid_n}
    if fam == "ckn":
        _need(args, "p", "theta")
        est = ckn_radial_constant(args.theta, args.p, _Lambda(args), args.d, tol=args.tol, **grid)
    elif fam == "wlh":
        _need(args, "gamma")
        est = wlh_radial_constant(args.gamma, _Lambda(args), args.d, tol=args.tol, **grid)
    elif fam == "gn":
        _need(args, "p")
        est = gn_constant(args.p, args.d)
    elif fam == "sobolev":
        est = sobolev_constant(args.d, **grid)
    else:
        est = log_sobolev_constant(args.d)
    est.require()
    return est.to_dict()


def cmd_spectrum(args) -> dict:
    _need(args, "p", "theta", "a")
    if args.theta < cf.vartheta(args.d, args.p) - 1e-15 or args.theta > 1:
        raise InadmissibleParameters("θ ∈ [ϑ(d,p), 1] violated")
    rep = spectral.symmetry_verdict(args.theta, args.p, _Lambda(args), args.d, kmax=args.kmax, tol=args.tol)
    return rep.to_dict()


def cmd_threshold(args):
    w, d = args.which, args.d
    if w == "a_bar":
        _need(args, "p", "theta")
        return cf.a_bar(args.theta, args.p, d)
    if w == "a_tilde":
        _need(args, "gamma")
        return cf.a_tilde(args.gamma, d)
    if w == "a_star_wlh":
        if args.numeric:
            return regions.a_star_wlh_check(d).numeric
        return cf.a_star_wlh(d)
    if w == "spectral":
        _need(args, "p", "theta")
        return spectral.spectral_threshold(args.theta, args.p, d)
    _need(args, "p")
    th = cf.vartheta(d, args.p) if args.theta is None else args.theta
    if w == "a_star_ckn":
        return regions.a_star_ckn(args.p, d).a
    if d < 3:
        raise InadmissibleParameters("a0 and a1 need d >= 3")
    base = ckn_radial_constant(th, args.p, 1.0, d, tol=args.tol).require().value
    sob = sobolev_constant(d).require().value
    if w == "a0":
        return cf.lambda_0(th, args.p, d, base, sob).a
    return cf.lambda_1(th, args.p, d, base, sob).a


def cmd_map(args) -> dict:
    if not args.critical:
        _need(args, "theta")
    x_min = args.x_min if args.x_min is not None else (0.05 if args.critical else 2.05)
    x_max = args.x_max if args.x_max is not None else (0.99 if args.critical else min(cf.critical_exponent(args.d), 8.0) - 0.05)
    spec = regions.MapSpec(
        d=args.d, critical=args.critical, x_min=x_min, x_max=x_max, a_min=args.a_min, a_max=args.a_max,
        nx=args.nx, ny=args.ny, theta=None if args.critical else args.theta, workers=args.workers,
        cache=f"{args.out}.curves.json",
    )
    rmap = regions.build_map(spec)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    paths = regions.emit(rmap, args.out, formats)
    out = {"written": {k: str(v) for k, v in paths.items()}, "cells": len(rmap.cells)}
    if args.critical:
        xs = regions.crossings(rmap.curves.x, rmap.curves.curves["a_bar"], rmap.curves.curves["a_star_ckn"])
        out["a_bar_vs_a_star_ckn_crossings"] = xs
    return out


def _profile(spec: str, args):
    # odd node count so that every other node is again a symmetric grid
    L, n = args.length, args.grid_n | 1
    if spec == "gaussian":
        return gaussian_profile(L, n)
    if spec == "sech":
        return sech_profile(L, n)
    if spec.startswith("file:"):
        return read_profile(Path(spec[5:]), n=n)
    raise InadmissibleParameters(f"unknown profile {spec!r}")


def cmd_verify(args) -> dict:
    """Ratio of the two sides for a test profile against the radial constant.

    The ratio is extrapolated from the profile and its every-other-node
    subsample; ``discretization_error`` is the size of that correction and is
    allowed for in ``holds``.
    """
    prof = _profile(args.profile, args)
    coarse = LineProfile(prof.L, (prof.n + 1) // 2, prof.values[::2])
    Lam = _Lambda(args)
    if args.inequality == "ckn":
        _need(args, "p", "theta")
        val, val_c = (eval_ckn_energy(v, args.theta, Lam, args.p, args.d) for v in (prof, coarse))
        est = ckn_radial_constant(args.theta, args.p, Lam, args.d, tol=args.tol).require()
    else:
        _need(args, "gamma")
        val, val_c = (eval_wlh_entropy(v, args.gamma, Lam, args.d) for v in (prof, coarse))
        est = wlh_radial_constant(args.gamma, Lam, args.d, tol=args.tol).require()
    err = abs(val.bound - val_c.bound) / 3.0
    ratio = val.bound + (val.bound - val_c.bound) / 3.0
    holds = ratio <= est.value * (1.0 + args.tol) + err
    return {
        "inequality": args.inequality,
        "profile": args.profile,
        "Lambda": Lam,
        "ratio": ratio,
        "ratio_raw": val.bound,
        "discretization_error": err,
        "radial_constant": est.value,
        "holds": bool(holds),
        "gap": est.value - ratio,
        "grad_sq": val.grad_sq,
        "mass_sq": val.mass_sq,
        "p_norm_sq": val.p_norm_sq,
        "energy": val.energy,
        "entropy": val.entropy,
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symbreak", description="Constants, thresholds and symmetry maps for CKN and WLH inequalities.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, *, a=True, lam=False, grid=False):
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--p", type=float)
        sp.add_argument("--theta", type=float)
        sp.add_argument("--gamma", type=float)
        if a:
            sp.add_argument("--a", type=float)
        if lam:
            sp.add_argument("--lambda", dest="Lambda", type=float)
        if grid:
            sp.add_argument("--grid-n", type=int, default=DEFAULT_N)
            sp.add_argument("--length", type=float, default=DEFAULT_L)
        sp.add_argument("--tol", type=float, default=None, help="overrides SYMBREAK_TOL (default 1e-8)")

    sp = sub.add_parser("constants", help="closed-form constants and thresholds as JSON")
    common(sp)
    sp.add_argument("--b", type=float)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("radial-constant", help="radial optimal or auxiliary sharp constant")
    sp.add_argument("--family", choices=["ckn", "wlh", "gn", "sobolev", "logsobolev"], required=True)
    common(sp, lam=True, grid=True)
    sp.set_defaults(func=cmd_radial_constant)

    sp = sub.add_parser("spectrum", help="sector eigenvalues at the radial maximizer")
    common(sp)
    sp.add_argument("--kmax", type=int, default=3)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("threshold", help="a single threshold value")
    sp.add_argument("--which", required=True,
                    choices=["a_bar", "a_tilde", "a_star_ckn", "a_star_wlh", "a0", "a1", "spectral"])
    sp.add_argument("--numeric", action="store_true", help="a_star_wlh: solve with the optimizer instead of the closed form")
    common(sp, a=False)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("map", help="existence / symmetry map as CSV, JSON and SVG")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--critical", action="store_true", help="theta = vartheta(p, d), horizontal axis theta")
    sp.add_argument("--theta", type=float, help="fixed theta for the non-critical (p, a) map")
    sp.add_argument("--x-min", type=float)
    sp.add_argument("--x-max", type=float)
    sp.add_argument("--a-min", type=float)
    sp.add_argument("--a-max", type=float)
    sp.add_argument("--nx", type=int, default=100)
    sp.add_argument("--ny", type=int, default=100)
    sp.add_argument("--out", required=True, help="output prefix")
    sp.add_argument("--formats", default="csv,json,svg")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("verify", help="evaluate the inequality on a test profile")
    sp.add_argument("--inequality", choices=["ckn", "wlh"], required=True)
    sp.add_argument("--profile", default="sech", help="gaussian, sech or file:PATH")
    common(sp, grid=True)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = default_tol()
    try:
        result = args.func(args)
    except InadmissibleParameters as exc:
        print(f"inadmissible parameters: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, dict):
        print(dumps(result))
    else:
        print(f"{float(result):.17g}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
