import json
from fractions import Fraction as F

import numpy as np
import pytest

from toricstab import errors
from toricstab.catalog_io import (
    catalog_lookup,
    dump_pl,
    dump_polytope,
    dumps_deterministic,
    load_pl,
    load_polytope,
    write_report,
)
from toricstab.functional import PLConvexFunction
from toricstab.lattice import riemann_roch_check


EXPECTED_NAMES = {"CP1", "CP2", "CP1xCP1", "Bl1CP2", "Bl2CP2", "Bl3CP2", "CP3"}


def test_catalog_contents(catalog_entries):
    assert {e.name for e in catalog_entries} >= EXPECTED_NAMES
    by_name = {e.name: e for e in catalog_entries}
    assert set(by_name["CP2"].polytope.normals) == {(1, 0), (0, 1), (-1, -1)}
    assert set(by_name["Bl2CP2"].polytope.normals) == {(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0)}
    assert by_name["CP3"].polytope.dim == 3


def test_catalog_all_reflexive(catalog_entries):
    for e in catalog_entries:
        assert e.polytope.is_reflexive


def test_catalog_reflexive_identity(catalog_entries):
    for e in catalog_entries:
        P = e.polytope
        assert P.boundary_measure() == pytest.approx(P.dim * P.volume(), rel=1e-12)


def test_catalog_symmetry_flags(catalog_entries):
    by_name = {e.name: e for e in catalog_entries}
    assert by_name["CP2"].soliton_zero_by_symmetry
    assert not by_name["Bl1CP2"].soliton_zero_by_symmetry
    # swap symmetry present on Bl1CP2
    assert ((0, 1), (1, 0)) in by_name["Bl1CP2"].symmetry_generators
    for e in catalog_entries:
        assert e.check_symmetries()


def test_catalog_lookup():
    assert catalog_lookup("CP2").name == "CP2"
    assert catalog_lookup("bl1cp2").name == "Bl1CP2"
    assert catalog_lookup("segment").name == "CP1"
    with pytest.raises(errors.NotFoundError):
        catalog_lookup("CP9")


def test_load_polytope_roundtrip(tmp_path):
    p = tmp_path / "seg.json"
    p.write_text('{"dim": 1, "normals": [[1], [-1]]}')
    seg = load_polytope(p)
    assert seg.vertices == ((F(-1),), (F(1),))
    out = tmp_path / "seg2.json"
    dump_polytope(seg, out)
    again = load_polytope(out)
    assert again.normals == seg.normals and again.dim == seg.dim


def test_load_polytope_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "normals": [[1,0],[0]]}')
    with pytest.raises(errors.ParseError):
        load_polytope(bad)
    bad.write_text('{"dim": 2, "normals": [[1,0],[0,1],[-1,-0.5]]}')
    with pytest.raises(errors.ParseError):
        load_polytope(bad)
    bad.write_text("{not json")
    with pytest.raises(errors.ParseError) as exc:
        load_polytope(bad)
    assert "line" in str(exc.value)
    with pytest.raises(errors.ParseError):
        load_polytope(tmp_path / "missing.json")
    bad.write_text('{"dim": 2, "normals": [[1,0],[0,1]]}')
    with pytest.raises(errors.UnboundedError):
        load_polytope(bad)


def test_load_pl(tmp_path):
    p = tmp_path / "u.json"
    p.write_text('{"pieces": [{"a": ["0"], "c": "0"}, {"a": ["1"], "c": "0"}]}')
    u = load_pl(p)
    assert u((F(1, 2),)) == F(1, 2)
    assert u((F(-1, 2),)) == 0


def test_pl_roundtrip(tmp_path):
    u = PLConvexFunction([([F(1, 3), F(-2, 7)], F(5, 11)), ([0, 0], 0)])
    path = tmp_path / "u.json"
    dump_pl(u, path)
    v = load_pl(path)
    assert v.pieces == u.pieces


def test_load_pl_errors(tmp_path):
    p = tmp_path / "u.json"
    # decimal strings are exact rationals and accepted; these are not
    p.write_text('{"pieces": [{"a": ["x/y"], "c": "0"}]}')
    with pytest.raises(errors.ParseError):
        load_pl(p)
    p.write_text('{"pieces": [{"a": [0.5], "c": "0"}]}')  # JSON float rejected
    with pytest.raises(errors.ParseError):
        load_pl(p)
    p.write_text('{"pieces": [{"a": ["1/0"], "c": "0"}]}')
    with pytest.raises(errors.ParseError):
        load_pl(p)
    p.write_text('{"pieces": []}')
    with pytest.raises(errors.ParseError):
        load_pl(p)
    p.write_text('{"nope": 1}')
    with pytest.raises(errors.ParseError):
        load_pl(p)


def test_write_report_json_csv(tmp_path, seg):
    u = PLConvexFunction.max_with_zero([1])
    rep = riemann_roch_check(seg, [0.0], u, 2, [10, 15, 20])
    jpath = tmp_path / "rr.json"
    write_report(rep, jpath)
    doc = json.loads(jpath.read_text())
    assert doc["fit"]["F1_est"] == rep.fit.F1_est
    cpath = tmp_path / "rr.csv"
    write_report(rep, cpath, format="csv")
    lines = cpath.read_text().strip().splitlines()
    assert lines[0] == "k,N_k,S1,S2,ratio"
    assert len(lines) == 4
    with pytest.raises(ValueError):
        write_report(rep, tmp_path / "x.foo", format="foo")


def test_dumps_deterministic():
    a = dumps_deterministic({"b": 1.5, "a": [0.1, 2]})
    b = dumps_deterministic({"a": [0.1, 2], "b": 1.5})
    assert a == b
    assert a.endswith("\n")


def test_soliton_zero_flag_is_verified(solitons, catalog_entries):
    for e in catalog_entries:
        if e.soliton_zero_by_symmetry:
            assert np.max(np.abs(solitons[e.name].theta)) <= 1e-10
