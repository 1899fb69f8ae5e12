import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from symbreak import closed_forms as cf
from symbreak.closed_forms import InadmissibleParameters
from symbreak.regions import (
    ALL_FLAGS,
    CurveTable,
    MapSpec,
    ZoneConsistencyError,
    a_star_ckn,
    a_star_wlh_check,
    build_map,
    classify,
    crossings,
    emit,
    load_or_sample_curves,
    read_csv_flags,
)


def _table(d=5, xs=(0.3, 0.6, 0.9), a0=(1.0, 0.6, 0.1), a1=(0.05, 0.03, 0.01), ab=(-0.4, -0.25, -0.05),
           ast=(-0.3, -0.2, -0.06)):
    arr = lambda v: np.array(v, dtype=float)
    return CurveTable(d, True, arr(xs), {"a0": arr(a0), "a1": arr(a1), "a_bar": arr(ab), "a_star_ckn": arr(ast)})


def test_a_star_ckn_residual():
    r = a_star_ckn(3.0, 5)
    assert r.residual <= 1e-6
    assert r.a < cf.a_c(5)


def test_a_star_ckn_small_p_above_a_bar():
    p = cf.critical_p(0.1, 5)
    assert cf.a_bar(0.1, p, 5) < a_star_ckn(p, 5).a


def test_a_star_ckn_rejects():
    with pytest.raises(InadmissibleParameters):
        a_star_ckn(7.0, 5)
    with pytest.raises(InadmissibleParameters):
        a_star_ckn(3.0, 1)


def test_a_star_wlh_check_d3():
    rep = a_star_wlh_check(3)
    assert abs(rep.difference) <= 1e-3
    assert rep.residual_at_closed_form <= 1e-3
    with pytest.raises(InadmissibleParameters):
        a_star_wlh_check(2)


def test_classify_zones():
    tab = _table()
    cell = classify((0.6, 0.8), 5, table=tab)
    assert cell.flags["schwarz_symmetric"] and cell.flags["radial_extremal"]
    assert cell.flags["apriori"] and cell.flags["gn_comparison"]
    cell = classify((0.6, -0.5), 5, table=tab)
    assert cell.flags["linearization_break"] and cell.flags["gn_break"]
    assert not cell.flags["apriori"]
    cell = classify((0.6, 0.0), 5, table=tab)
    assert cell.flags["unknown"] and cell.flags["gn_comparison"]
    assert not (cell.flags["schwarz_symmetric"] or cell.flags["linearization_break"])
    cell = classify((0.6, 0.3), 5, table=tab)
    assert cell.flags["unknown"] and cell.flags["apriori"]


def test_classify_interpolates_and_is_pure():
    tab = _table()
    c1 = classify((0.45, 0.81), 5, table=tab)
    c2 = classify((0.45, 0.81), 5, table=tab)
    assert c1.flags == c2.flags
    assert c1.flags["radial_extremal"]  # a0 interpolates to 0.8 at x = 0.45
    assert not classify((0.45, 0.79), 5, table=tab).flags["radial_extremal"]


def test_classify_outside_domain():
    tab = _table()
    assert classify((0.6, 1.5), 5, table=tab).flags["outside_domain"]
    assert classify((1.2, 0.0), 5, table=tab).flags["outside_domain"]
    cell = classify((3.0, 0.0), 3, mode="p", theta=0.1)
    assert cell.flags["outside_domain"]


def test_classify_noncritical():
    cell = classify((4.0, -0.5), 3, mode="p", theta=1.0)
    assert cell.flags["linearization_break"]
    cell = classify((4.0, 0.0), 3, mode="p", theta=1.0)
    assert cell.flags["unknown"]


def test_zone_inconsistency_aborts():
    tab = _table(a0=(-0.5, -0.5, -0.5))
    with pytest.raises(ZoneConsistencyError):
        classify((0.6, -0.45), 5, table=tab)


def test_build_and_emit(tmp_path):
    spec = MapSpec(d=5, x_min=0.3, x_max=0.9, nx=3, ny=2)
    rmap = build_map(spec, table=_table())
    paths = emit(rmap, tmp_path / "m")
    with open(paths["csv"]) as fh:
        assert len(fh.read().strip().splitlines()) == 1 + 6
    coords, flags = read_csv_flags(paths["csv"])
    assert np.array_equal(flags, rmap.flag_matrix())
    assert_allclose(coords[:, 0], np.tile(rmap.x, 2), rtol=0)
    obj = json.loads(paths["json"].read_text())
    assert obj["d"] == 5 and obj["flags"] == list(ALL_FLAGS)
    assert len(obj["curves"]["a_bar"]) == 3
    svg = paths["svg"].read_text()
    assert svg.startswith("<svg") and "(4) a0" in svg and 'data-curve="a_star_ckn"' in svg


def test_two_by_two_rows(tmp_path):
    spec = MapSpec(d=5, x_min=0.3, x_max=0.9, nx=2, ny=2)
    tab = _table(xs=(0.3, 0.9), a0=(1.0, 0.1), a1=(0.05, 0.01), ab=(-0.4, -0.05), ast=(-0.3, -0.06))
    paths = emit(build_map(spec, table=tab), tmp_path / "m", ["csv"])
    coords, flags = read_csv_flags(paths["csv"])
    assert flags.shape == (4, len(ALL_FLAGS))


def test_empty_grid(tmp_path):
    spec = MapSpec(d=5, nx=0, ny=0)
    empty = CurveTable(5, True, np.array([]), {k: np.array([]) for k in ("a0", "a1", "a_bar", "a_star_ckn")})
    paths = emit(build_map(spec, table=empty), tmp_path / "e")
    coords, flags = read_csv_flags(paths["csv"])
    assert flags.shape == (0, len(ALL_FLAGS))
    assert json.loads(paths["json"].read_text())["cells"] == []
    assert paths["svg"].read_text().rstrip().endswith("</svg>")


def test_emit_unwritable(tmp_path):
    spec = MapSpec(d=5, x_min=0.3, x_max=0.9, nx=3, ny=2)
    rmap = build_map(spec, table=_table())
    with pytest.raises(OSError, match="missing"):
        emit(rmap, tmp_path / "missing" / "m")


def test_curve_cache(tmp_path):
    cache = tmp_path / "curves.json"
    spec = MapSpec(d=3, critical=False, theta=1.0, x_min=2.5, x_max=5.5, nx=4, ny=3, cache=str(cache))
    first = load_or_sample_curves(spec)
    assert cache.exists()
    again = load_or_sample_curves(spec)
    for k in first.curves:
        assert np.array_equal(first.curves[k], again.curves[k], equal_nan=True)
    m1, m2 = build_map(spec), build_map(spec)
    assert np.array_equal(m1.flag_matrix(), m2.flag_matrix())
    cache.write_text("{not json")
    assert np.array_equal(load_or_sample_curves(spec).curves["a_bar"], first.curves["a_bar"])


def test_critical_columns_small():
    spec = MapSpec(d=5, x_min=0.6, x_max=0.95, nx=3, ny=4)
    rmap = build_map(spec)
    c = rmap.curves.curves
    ac = cf.a_c(5)
    for name in ("a0", "a1", "a_bar", "a_star_ckn"):
        assert np.all(c[name] < ac)
    assert np.all(c["a0"] > c["a_bar"])
    assert np.all(c["a1"] < c["a0"])


def test_critical_map_needs_d3():
    with pytest.raises(InadmissibleParameters):
        build_map(MapSpec(d=2, nx=2, ny=2))


def test_crossings():
    x = np.linspace(0, 1, 11)
    assert_allclose(crossings(x, x, 0.55 + 0 * x), [0.55])
    assert crossings(x, x, x + 1) == []
