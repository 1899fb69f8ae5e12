"""Threshold curves and the existence / symmetry map of the CKN family.

In the critical case ``theta = vartheta(p, d)`` the map lives in the
``(theta, a)`` strip; ``p = 2d / (d - 2 theta)`` is recovered column by column.
Otherwise ``theta`` is fixed and the horizontal coordinate is ``p``; only the
linearization curve is available there.

Zones of the existence panel: (1) ``a >= a0``, (2) ``a > a1``,
(3) ``a > a_star_ckn``.  Zones of the symmetry panel: (1) ``a < a_bar``,
(2) ``a < a_star_ckn``, (3) unknown, (4) ``a0 <= a < a_c``.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import optimize

from . import closed_forms as cf
from .closed_forms import InadmissibleParameters
from .radial_opt import ConvergenceError, ckn_radial_constant, gn_constant, log_sobolev_constant, sobolev_constant, wlh_radial_constant

EXISTENCE_FLAGS = ("radial_extremal", "apriori", "gn_comparison")
SYMMETRY_FLAGS = ("linearization_break", "gn_break", "schwarz_symmetric", "unknown")
ALL_FLAGS = EXISTENCE_FLAGS + SYMMETRY_FLAGS + ("outside_domain",)
CURVE_NAMES = ("a0", "a1", "a_bar", "a_star_ckn")
CACHE_VERSION = 1


class ZoneConsistencyError(RuntimeError):
    """A cell was classified as both Schwarz-symmetric and symmetry-breaking."""


def _brentq_in_a(g, d: int, span: float = 50.0, what: str = "root"):
    """Root of ``g(a)`` in ``(a_c - span, a_c)``, with both endpoint values in the error."""
    ac = cf.a_c(d)
    lo, hi = ac - span, ac - 1e-12
    g_lo, g_hi = g(lo), g(hi)
    if not g_lo * g_hi < 0:
        raise ConvergenceError(
            f"{what}: no sign change in (a_c - {span:g}, a_c); g(lo) = {g_lo:.6g}, g(hi) = {g_hi:.6g}"
        )
    return optimize.brentq(g, lo, hi, xtol=1e-13, rtol=1e-15, maxiter=500)


@dataclass
class StarCKN:
    a: float
    p: float
    d: int
    gn: float
    base: float
    residual: float


def a_star_ckn(p: float, d: int, gn: float | None = None, base: float | None = None) -> StarCKN:
    """Root in ``a`` of ``C*_CKN(vartheta, p, a) = C_GN(p)``.

    ``C*_CKN`` is evaluated through the radial scaling law from its value at
    ``Lambda = 1``.  The exponent ``(p-2)/(2p) - vartheta`` is
    ``-(d-1)(p-2)/(2p) < 0``, so the radial constant is monotone in ``a`` and
    the root is unique.
    """
    if d < 2:
        raise InadmissibleParameters("a_star_ckn needs d >= 2")
    if not (2 < p < cf.critical_exponent(d)):
        raise InadmissibleParameters("p in (2, 2*) required")
    th = cf.vartheta(d, p)
    if gn is None:
        gn = gn_constant(p, d).require().value
    if base is None:
        base = ckn_radial_constant(th, p, 1.0, d).require().value

    def g(a):
        return math.log(cf.radial_scaling_ckn(th, p, cf.Lambda_of(a, d), base)) - math.log(gn)

    a = _brentq_in_a(g, d, what="a_star_ckn")
    res = abs(gn - cf.radial_scaling_ckn(th, p, cf.Lambda_of(a, d), base)) / gn
    return StarCKN(a, p, d, gn, base, res)


@dataclass
class StarWLHReport:
    d: int
    numeric: float
    closed_form: float
    difference: float
    C_LS: float
    base: float
    residual_at_closed_form: float


def a_star_wlh_check(d: int, **grid) -> StarWLHReport:
    """Solve ``C_LS = C*_WLH(d/4, a)`` with the optimizer and compare with the closed form."""
    if d < 3:
        raise InadmissibleParameters("a_star_wlh_check needs d >= 3")
    gamma = d / 4.0
    c_ls = log_sobolev_constant(d).require().value
    base = wlh_radial_constant(gamma, 1.0, d, **grid).require().value

    def g(a):
        return math.log(cf.radial_scaling_wlh(gamma, cf.Lambda_of(a, d), base)) - math.log(c_ls)

    a_num = _brentq_in_a(g, d, what="a_star_wlh")
    a_cf = cf.a_star_wlh(d)
    res = abs(cf.radial_scaling_wlh(gamma, cf.Lambda_of(a_cf, d), base) - c_ls) / c_ls
    return StarWLHReport(d, a_num, a_cf, a_num - a_cf, c_ls, base, res)


# -- curve tables ------------------------------------------------------------


@dataclass
class CurveTable:
    """Threshold curves sampled at the column abscissae ``x``.

    Entries are ``nan`` where a curve is undefined for that column.
    """

    d: int
    critical: bool
    x: np.ndarray
    curves: dict[str, np.ndarray]
    theta: float | None = None

    def at(self, x: float) -> dict[str, float]:
        out = {}
        for name, ys in self.curves.items():
            if self.x.size == 0:
                out[name] = math.nan
            elif self.x.size == 1:
                out[name] = float(ys[0]) if math.isclose(x, self.x[0]) else math.nan
            else:
                out[name] = float(np.interp(x, self.x, ys, left=math.nan, right=math.nan))
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "critical": self.critical,
            "theta": self.theta,
            "x": self.x.tolist(),
            "curves": {k: [None if not math.isfinite(y) else y for y in v.tolist()] for k, v in self.curves.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CurveTable":
        curves = {k: np.array([math.nan if y is None else y for y in v], dtype=float) for k, v in obj["curves"].items()}
        return cls(obj["d"], obj["critical"], np.array(obj["x"], dtype=float), curves, obj.get("theta"))


def _critical_column(args):
    theta, d, sobolev = args
    p = cf.critical_p(theta, d)
    out = dict.fromkeys(CURVE_NAMES, math.nan)
    out["a_bar"] = cf.a_bar(theta, p, d)
    base = ckn_radial_constant(theta, p, 1.0, d).require().value
    if sobolev is not None:
        out["a0"] = cf.lambda_0(theta, p, d, base, sobolev).a
        out["a1"] = cf.lambda_1(theta, p, d, base, sobolev).a
    out["a_star_ckn"] = a_star_ckn(p, d, base=base).a
    return out


def _noncritical_column(args):
    p, d, theta = args
    out = dict.fromkeys(CURVE_NAMES, math.nan)
    try:
        if theta >= cf.vartheta(d, p) - 1e-15:
            out["a_bar"] = cf.a_bar(theta, p, d)
    except InadmissibleParameters:
        pass
    return out


def sample_curves(
    d: int, xs, critical: bool = True, theta: float | None = None, workers: int = 1
) -> CurveTable:
    """Sample the threshold curves at every column abscissa.

    Columns are independent; with ``workers > 1`` they are computed in a
    process pool and gathered in column order.
    """
    xs = np.asarray(xs, dtype=float)
    if critical:
        if d < 2:
            raise InadmissibleParameters("critical map needs d >= 2")
        sob = sobolev_constant(d).require().value if d >= 3 else None
        jobs = [(float(x), d, sob) for x in xs]
        fn = _critical_column
    else:
        if theta is None:
            raise InadmissibleParameters("non-critical map needs a fixed theta")
        jobs = [(float(x), d, theta) for x in xs]
        fn = _noncritical_column
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            cols = list(ex.map(fn, jobs))
    else:
        cols = [fn(j) for j in jobs]
    curves = {name: np.array([c[name] for c in cols], dtype=float) for name in CURVE_NAMES}
    return CurveTable(d, critical, xs, curves, None if critical else theta)


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class RegionCell:
    x: float
    a: float
    flags: dict = field(default_factory=dict)

    @property
    def coords(self) -> tuple[float, float]:
        return (self.x, self.a)

    def flag_vector(self) -> list[int]:
        return [int(bool(self.flags.get(k, False))) for k in ALL_FLAGS]


def _outside(point, d, critical, theta):
    x, a = point
    if not a < cf.a_c(d):
        return True
    if critical:
        return not (0 < x < 1) or d < 2
    if theta is None or not (2 < x < cf.critical_exponent(d)):
        return True
    return theta < cf.vartheta(d, x) - 1e-15 or theta > 1


def classify(point, d: int, mode: str = "critical", table: CurveTable | None = None, theta: float | None = None) -> RegionCell:
    """Zone flags of the point ``(x, a)``.

    ``mode`` is ``"critical"`` (x = theta) or ``"p"`` (x = p at fixed
    ``theta``).  Curve values come from ``table`` when given (linear
    interpolation between columns) and are computed at ``x`` otherwise.
    """
    critical = mode == "critical"
    if not critical and mode != "p":
        raise ValueError(f"unknown mode {mode!r}")
    x, a = float(point[0]), float(point[1])
    flags = dict.fromkeys(ALL_FLAGS, False)
    if _outside((x, a), d, critical, theta):
        flags["outside_domain"] = True
        return RegionCell(x, a, flags)
    if table is not None:
        c = table.at(x)
    else:
        fn = _critical_column if critical else _noncritical_column
        if critical:
            sob = sobolev_constant(d).require().value if d >= 3 else None
            c = fn((x, d, sob))
        else:
            c = fn((x, d, theta))

    return _flags_from((x, a), c)


@dataclass
class MapSpec:
    d: int
    critical: bool = True
    x_min: float = 0.05
    x_max: float = 0.99
    a_min: float | None = None
    a_max: float | None = None
    nx: int = 100
    ny: int = 100
    theta: float | None = None
    workers: int = 1
    cache: str | None = None

    def bounds(self) -> tuple[float, float, float, float]:
        ac = cf.a_c(self.d)
        a_min = ac - 4.0 if self.a_min is None else self.a_min
        a_max = ac if self.a_max is None else self.a_max
        return self.x_min, self.x_max, a_min, a_max

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        x0, x1, a0, a1 = self.bounds()
        return np.linspace(x0, x1, self.nx), np.linspace(a0, a1, self.ny)

    def cache_key(self) -> dict:
        x0, x1, _, _ = self.bounds()
        return {"version": CACHE_VERSION, "d": self.d, "critical": self.critical, "theta": self.theta,
                "x_min": x0, "x_max": x1, "nx": self.nx}


@dataclass
class RegionMap:
    spec: MapSpec
    x: np.ndarray
    a: np.ndarray
    cells: list[RegionCell]
    curves: CurveTable

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def critical(self) -> bool:
        return self.spec.critical

    def flag_matrix(self) -> np.ndarray:
        """Array of shape ``(len(cells), len(ALL_FLAGS))`` of 0/1 flags."""
        if not self.cells:
            return np.zeros((0, len(ALL_FLAGS)), dtype=int)
        return np.array([c.flag_vector() for c in self.cells], dtype=int)

    def metadata(self) -> dict:
        x0, x1, a0, a1 = self.spec.bounds()
        return {
            "d": self.d,
            "critical": self.critical,
            "theta": self.spec.theta,
            "a_c": cf.a_c(self.d),
            "x_label": "theta" if self.critical else "p",
            "grid": {"x_min": x0, "x_max": x1, "a_min": a0, "a_max": a1, "nx": self.spec.nx, "ny": self.spec.ny},
            "flags": list(ALL_FLAGS),
        }


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_or_sample_curves(spec: MapSpec) -> CurveTable:
    """Curve table for ``spec``, reusing the JSON cache at ``spec.cache`` when its key matches."""
    xs, _ = spec.axes()
    key = spec.cache_key()
    if spec.cache and os.path.exists(spec.cache):
        try:
            with open(spec.cache) as fh:
                obj = json.load(fh)
            if obj.get("key") == key:
                return CurveTable.from_json(obj["table"])
        except (OSError, ValueError, KeyError):
            pass
    table = sample_curves(spec.d, xs, spec.critical, spec.theta, spec.workers)
    if spec.cache:
        _atomic_write(Path(spec.cache), json.dumps({"key": key, "table": table.to_json()}))
    return table


def build_map(spec: MapSpec, table: CurveTable | None = None) -> RegionMap:
    """Classify every grid cell; aborts with :class:`ZoneConsistencyError` on an inconsistent cell."""
    if spec.critical and spec.d < 3:
        raise InadmissibleParameters("the critical map needs d >= 3 for a0 and a1")
    xs, As = spec.axes()
    if table is None:
        table = load_or_sample_curves(spec)
    mode = "critical" if spec.critical else "p"
    cells = []
    for j, a in enumerate(As):
        for i, x in enumerate(xs):
            point = (float(x), float(a))
            if _outside(point, spec.d, spec.critical, spec.theta):
                cells.append(classify(point, spec.d, mode, table, spec.theta))
                continue
            c = {name: float(table.curves[name][i]) for name in CURVE_NAMES}
            cells.append(_flags_from(point, c))
    return RegionMap(spec, xs, As, cells, table)


def _flags_from(point, c):
    # c maps curve names to their values at this column
    x, a = point
    flags = dict.fromkeys(ALL_FLAGS, False)

    def fin(name):
        return math.isfinite(c[name])

    flags["radial_extremal"] = fin("a0") and a >= c["a0"]
    flags["apriori"] = fin("a1") and a > c["a1"]
    flags["gn_comparison"] = fin("a_star_ckn") and a > c["a_star_ckn"]
    flags["linearization_break"] = fin("a_bar") and a < c["a_bar"]
    flags["gn_break"] = fin("a_star_ckn") and a < c["a_star_ckn"]
    flags["schwarz_symmetric"] = flags["radial_extremal"]
    flags["unknown"] = not (flags["linearization_break"] or flags["gn_break"] or flags["schwarz_symmetric"])
    if flags["schwarz_symmetric"] and (flags["linearization_break"] or flags["gn_break"]):
        raise ZoneConsistencyError(
            f"cell (x={x!r}, a={a!r}) is both Schwarz-symmetric and symmetry-breaking; curves {c}"
        )
    return RegionCell(x, a, flags)


def crossings(x, y1, y2) -> list[float]:
    """Abscissae where ``y1 - y2`` changes sign, by linear interpolation."""
    x = np.asarray(x, dtype=float)
    diff = np.asarray(y1, dtype=float) - np.asarray(y2, dtype=float)
    out = []
    for i in range(len(x) - 1):
        f0, f1 = diff[i], diff[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0:
            out.append(float(x[i]))
        elif f0 * f1 < 0:
            out.append(float(x[i] - f0 * (x[i + 1] - x[i]) / (f1 - f0)))
    if len(x) and diff[-1] == 0.0:
        out.append(float(x[-1]))
    return out


# -- emission -------------------------------------------------------------------

EXISTENCE_STYLE = (  # (flag, fill, legend)
    ("radial_extremal", "#08519c", "(1) a ≥ a0: radial extremal"),
    ("apriori", "#4292c6", "(2) a > a1: a priori estimates"),
    ("gn_comparison", "#c6dbef", "(3) a > a⋆_CKN: comparison with GN"),
)
SYMMETRY_STYLE = (
    ("linearization_break", "#a50f15", "(1) a < ā: linearization"),
    ("gn_break", "#fb6a4a", "(2) a < a⋆_CKN: comparison with GN"),
    ("unknown", "#bdbdbd", "(3) unknown"),
    ("schwarz_symmetric", "url(#hatch)", "(4) a0 ≤ a < a_c: Schwarz symmetrization"),
)
CURVE_STYLE = {"a0": "#000000", "a1": "#6a51a3", "a_bar": "#cb181d", "a_star_ckn": "#2171b5"}


def _zone(cell: RegionCell, style) -> str | None:
    if cell.flags.get("outside_domain"):
        return None
    for flag, fill, _ in style:
        if cell.flags.get(flag):
            return fill
    return None


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(rmap: RegionMap) -> str:
    """Two panels (existence, symmetry) with zone cells, curve polylines and a legend."""
    W, H, M, gap, legend_h = 360.0, 300.0, 50.0, 60.0, 120.0
    x0, x1, a0, a1 = rmap.spec.bounds()
    nx, ny = len(rmap.x), len(rmap.a)
    width = 2 * (W + M) + gap + M
    height = H + 2 * M + legend_h
    dx = W / nx if nx else 0.0
    dy = H / ny if ny else 0.0
    xspan = (x1 - x0) or 1.0
    aspan = (a1 - a0) or 1.0

    def px(ox, x):
        return ox + (x - x0) / xspan * W

    def py(a):
        return M + H - (a - a0) / aspan * H

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'font-family="sans-serif" font-size="11">',
        '<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)"><rect width="6" height="6" fill="#ffffff"/>'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#238b45" stroke-width="2"/></pattern></defs>',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]
    xlabel = "θ" if rmap.critical else "p"
    panels = (("existence", EXISTENCE_STYLE), ("symmetry", SYMMETRY_STYLE))
    for k, (title, style) in enumerate(panels):
        ox = M + k * (W + M + gap)
        out.append(f'<g id="panel-{title}">')
        out.append(f'<text x="{_fmt(ox + W / 2)}" y="{_fmt(M - 12)}" text-anchor="middle" font-size="13">'
                   f'({"ab"[k]}) {title}, d = {rmap.d}</text>')
        # merge vertical runs of equal zone within each column
        for i in range(nx):
            run_fill, run_start = None, 0
            for j in range(ny + 1):
                fill = _zone(rmap.cells[j * nx + i], style) if j < ny else object()
                if fill != run_fill:
                    if run_fill is not None and j > run_start:
                        y_top = M + H - j * dy
                        out.append(f'<rect x="{_fmt(ox + i * dx)}" y="{_fmt(y_top)}" width="{_fmt(dx + 0.3)}" '
                                   f'height="{_fmt((j - run_start) * dy + 0.3)}" fill="{run_fill}"/>')
                    run_fill, run_start = fill, j
        for name, ys in rmap.curves.curves.items():
            pts = [(px(ox, x), py(y)) for x, y in zip(rmap.curves.x, ys)
                   if math.isfinite(y) and a0 <= y <= a1]
            if len(pts) > 1:
                coords = " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in pts)
                out.append(f'<polyline points="{coords}" fill="none" stroke="{CURVE_STYLE[name]}" '
                           f'stroke-width="1.5" data-curve="{name}"/>')
        out.append(f'<rect x="{_fmt(ox)}" y="{_fmt(M)}" width="{_fmt(W)}" height="{_fmt(H)}" '
                   'fill="none" stroke="#000000"/>')
        out.append(f'<text x="{_fmt(ox)}" y="{_fmt(M + H + 14)}">{x0:.3g}</text>')
        out.append(f'<text x="{_fmt(ox + W)}" y="{_fmt(M + H + 14)}" text-anchor="end">{x1:.3g}</text>')
        out.append(f'<text x="{_fmt(ox + W / 2)}" y="{_fmt(M + H + 14)}" text-anchor="middle">{xlabel}</text>')
        out.append(f'<text x="{_fmt(ox - 4)}" y="{_fmt(M + H)}" text-anchor="end">{a0:.3g}</text>')
        out.append(f'<text x="{_fmt(ox - 4)}" y="{_fmt(M + 10)}" text-anchor="end">{a1:.3g}</text>')
        out.append(f'<text x="{_fmt(ox - 4)}" y="{_fmt(M + H / 2)}" text-anchor="end">a</text>')
        ly = M + H + 34
        for n_, (_, fill, label) in enumerate(style):
            y = ly + 16 * n_
            out.append(f'<rect x="{_fmt(ox)}" y="{_fmt(y - 9)}" width="12" height="10" fill="{fill}" stroke="#000000"/>')
            out.append(f'<text x="{_fmt(ox + 18)}" y="{_fmt(y)}">{label}</text>')
        out.append("</g>")
    cx = M + 2 * W + M + gap - 110
    for n_, (name, color) in enumerate(CURVE_STYLE.items()):
        y = M + H + 34 + 16 * n_
        out.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(y - 4)}" x2="{_fmt(cx + 18)}" y2="{_fmt(y - 4)}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{_fmt(cx + 22)}" y="{_fmt(y)}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(rmap: RegionMap, prefix, formats=("csv", "json", "svg")) -> dict[str, Path]:
    """Write ``prefix.csv``, ``prefix.json`` and/or ``prefix.svg``; returns the written paths."""
    prefix = str(prefix)
    written = {}
    unknown = set(formats) - {"csv", "json", "svg"}
    if unknown:
        raise ValueError(f"unknown formats {sorted(unknown)}")
    for fmt in formats:
        path = Path(f"{prefix}.{fmt}")
        try:
            with open(path, "w", newline="") as fh:
                if fmt == "csv":
                    w = csv.writer(fh)
                    w.writerow(["x", "a", *ALL_FLAGS])
                    for cell in rmap.cells:
                        w.writerow([repr(cell.x), repr(cell.a), *cell.flag_vector()])
                elif fmt == "json":
                    obj = rmap.metadata()
                    tab = rmap.curves.to_json()
                    obj["curves"] = {name: [[x, y] for x, y in zip(tab["x"], ys)] for name, ys in tab["curves"].items()}
                    obj["cells"] = [[c.x, c.a, c.flag_vector()] for c in rmap.cells]
                    json.dump(obj, fh)
                else:
                    fh.write(render_svg(rmap))
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        written[fmt] = path
    return written


def read_csv_flags(path) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates and 0/1 flag matrix from an emitted CSV file."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    coords = np.array([[float(r[0]), float(r[1])] for r in body], dtype=float).reshape(-1, 2)
    flags = np.array([[int(v) for v in r[2:]] for r in body], dtype=int).reshape(-1, len(ALL_FLAGS))
    return coords, flags
