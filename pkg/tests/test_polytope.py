import math
from fractions import Fraction as F

import numpy as np
import pytest

from toricstab import errors
from toricstab.functional import PLConvexFunction
from toricstab.polytope import build, refine_by_pl, simplex_from_points

from oracles import brute_force_lattice_points, shoelace_area


def test_segment():
    seg = build([[1], [-1]], require_reflexive=True)
    assert seg.vertices == ((F(-1),), (F(1),))
    assert seg.volume_exact() == 2
    assert seg.boundary_measure() == pytest.approx(2.0, abs=1e-14)


def test_cp2_vertices_hand_solve():
    # facet-pair systems solved by hand: (1,1), (1,-2), (-2,1)
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    assert set(cp2.vertices) == {(F(1), F(1)), (F(1), F(-2)), (F(-2), F(1))}


def test_bl1_vertices_hand_solve():
    bl1 = build([[1, 0], [0, 1], [-1, -1], [1, 1]])
    assert set(bl1.vertices) == {(F(1), F(0)), (F(0), F(1)), (F(-2), F(1)), (F(1), F(-2))}


def test_cp2_measures():
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    assert cp2.volume_exact() == F(9, 2)
    # dsigma-lengths: 3 + 3 + 3*sqrt2/sqrt2 = 9
    assert cp2.boundary_measure() == pytest.approx(9.0, rel=1e-13)


def test_bl1_measures_shoelace_oracle():
    # ordered cycle (1,0) -> (0,1) -> (-2,1) -> (1,-2); shoelace gives 4
    assert shoelace_area([(1, 0), (0, 1), (-2, 1), (1, -2)]) == pytest.approx(4.0)
    bl1 = build([[1, 0], [0, 1], [-1, -1], [1, 1]])
    assert bl1.volume_exact() == 4
    assert bl1.boundary_measure() == pytest.approx(8.0, rel=1e-13)


def test_unbounded_two_normals():
    with pytest.raises(errors.UnboundedError):
        build([[1, 0], [0, 1]])


def test_unbounded_halfspace_cone():
    with pytest.raises(errors.UnboundedError):
        build([[1, 0], [0, 1], [-1, 0]])


def test_nonprimitive_normal():
    with pytest.raises(errors.NonPrimitiveNormalError):
        build([[2, 0], [0, 1], [-1, -1]])


def test_duplicate_normal():
    with pytest.raises(errors.DuplicateNormalError):
        build([[1, 0], [1, 0], [0, 1], [-1, -1]])


def test_not_reflexive():
    # the facet pair {3x+y=1, -y=1} meets at (2/3, -1)
    with pytest.raises(errors.NotReflexiveError):
        build([[3, 1], [-1, 1], [0, -1]], require_reflexive=True)
    # same build without the flag succeeds
    P = build([[3, 1], [-1, 1], [0, -1]])
    assert not P.is_reflexive
    assert (F(2, 3), F(-1)) in P.vertices


def test_noninteger_entries_rejected():
    with pytest.raises(errors.ValidationError):
        build([[1.0, 0.0], [0, 1], [-1, -1]])


def test_redundant_normal_degenerate():
    # (1, 0) touches {2x+y<=1, -x<=1, -y<=1} only at the vertex (1, -1)
    with pytest.raises(errors.EmptyOrDegenerateError):
        build([[2, 1], [-1, 0], [0, -1], [1, 0]])


def test_facet_invariants():
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    for f in cp2.facets:
        assert f.measure_weight > 0
        lv = tuple(F(x) for x in f.normal)
        for j in f.vertex_indices:
            v = cp2.vertices[j]
            assert sum(a * b for a, b in zip(lv, v)) == 1
        assert len(f.vertex_indices) >= cp2.dim


def test_triangulate_simplex_is_itself():
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    tri = cp2.triangulate()
    assert len(tri) == 1
    assert set(tri[0].vertices) == set(cp2.vertices)


def test_triangulate_quadrilateral_two_pieces():
    bl1 = build([[1, 0], [0, 1], [-1, -1], [1, 1]])
    tri = bl1.triangulate()
    assert len(tri) == 2
    assert sum(s.volume_exact() for s in tri) == bl1.volume_exact()


def test_triangulate_covers_volume(catalog_entries):
    for e in catalog_entries:
        P = e.polytope
        total = sum((s.volume_exact() for s in P.triangulate()), F(0))
        assert total == P.volume_exact()


def test_triangulate_facet_cp2():
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    segs = cp2.triangulate_facet(0)  # facet {x1 = 1}
    assert len(segs) == 1
    assert math.fsum(s.volume for s in segs) == pytest.approx(3.0)


def test_facet_triangulation_area_consistency(catalog_entries):
    for e in catalog_entries:
        P = e.polytope
        n = P.dim
        # weighted facet areas must reassemble n * |P|
        total = math.fsum(
            f.measure_weight * math.fsum(s.volume for s in P.triangulate_facet(f.index))
            for f in P.facets
        )
        assert total == pytest.approx(n * P.volume(), rel=1e-12)


def test_volume_unimodular_invariance():
    # x -> Ax with A in GL(2, Z); normals transform by A^{-T} = M
    rng = np.random.default_rng(5)
    base = [[1, 0], [0, 1], [-1, -1], [1, 1]]
    P = build(base)
    for M in ([[1, 1], [0, 1]], [[1, 0], [3, 1]], [[2, 1], [1, 1]]):
        Mn = np.array(M)
        assert abs(round(np.linalg.det(Mn))) == 1
        moved = [list(Mn @ np.array(l)) for l in base]
        Q = build(moved)
        assert Q.volume_exact() == P.volume_exact()


def test_lattice_points_examples(seg, cp2):
    assert seg.lattice_points(3).ravel().tolist() == [-3, -2, -1, 0, 1, 2, 3]
    assert len(cp2.lattice_points(1)) == 10
    assert len(cp2.lattice_points(2)) == 28


def test_lattice_points_brute_force_oracle(cp2, bl1):
    for P, normals in ((cp2, [(1, 0), (0, 1), (-1, -1)]), (bl1, [(1, 0), (0, 1), (-1, -1), (1, 1)])):
        for k in (1, 2, 3):
            got = {tuple(p) for p in P.lattice_points(k)}
            assert got == set(brute_force_lattice_points(normals, k))


def test_lattice_points_lexicographic_and_monotone(cp2):
    pts = cp2.lattice_points(3)
    as_tuples = [tuple(p) for p in pts]
    assert as_tuples == sorted(as_tuples)
    counts = [len(cp2.lattice_points(k)) for k in range(1, 6)]
    assert counts == sorted(counts)


def test_lattice_capacity(cp2):
    with pytest.raises(errors.CapacityExceededError):
        cp2.lattice_points(10, capacity=100)


def test_refine_by_pl_segment(seg):
    u = PLConvexFunction.max_with_zero([1])
    dec = refine_by_pl(seg, u)
    assert len(dec) == 2
    vols = sorted(ch.volume_exact() for ch in dec)
    assert vols == [1, 1]
    by_piece = {ch.piece_index: set(ch.vertices) for ch in dec}
    assert by_piece[0] == {(F(-1),), (F(0),)}
    assert by_piece[1] == {(F(0),), (F(1),)}


def test_refine_by_pl_cp2_areas(cp2):
    u = PLConvexFunction.max_with_zero([1, 0])
    dec = refine_by_pl(cp2, u)
    vols = sorted(ch.volume_exact() for ch in dec)
    assert vols == [F(2), F(5, 2)]


def test_refine_by_pl_single_piece(cp2):
    u = PLConvexFunction([([1, 1], 2)])
    dec = refine_by_pl(cp2, u)
    assert len(dec) == 1
    assert dec.pieces[0].volume_exact() == cp2.volume_exact()


def test_refine_by_pl_redundant_piece_dropped(seg):
    # the piece x - 10 is dominated everywhere on P
    u = PLConvexFunction([([0], 0), ([1], 0), ([1], -10)])
    dec = refine_by_pl(seg, u)
    assert len(dec) == 2


def test_refine_volume_partition(catalog_entries):
    rng = np.random.default_rng(11)
    for e in catalog_entries:
        P = e.polytope
        pieces = []
        for _ in range(3):
            a = [F(int(rng.integers(-2000, 2001)), 1000) for _ in range(P.dim)]
            c = F(int(rng.integers(-1000, 1001)), 1000)
            pieces.append((a, c))
        u = PLConvexFunction(pieces)
        dec = refine_by_pl(P, u)
        assert sum((ch.volume_exact() for ch in dec), F(0)) == P.volume_exact()


def test_simplex_volume():
    s = simplex_from_points([(0, 0), (1, 0), (0, 1)])
    assert s.volume == pytest.approx(0.5)
    assert s.volume_exact() == F(1, 2)
    with pytest.raises(errors.DegenerateSimplexError):
        simplex_from_points([(0, 0), (1, 1), (2, 2)])


def test_contains():
    cp2 = build([[1, 0], [0, 1], [-1, -1]])
    assert cp2.contains((0, 0))
    assert cp2.contains((1, 1))
    assert not cp2.contains((2, 0))
