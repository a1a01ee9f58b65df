"""Reflexive lattice polytopes from facet normals.

A polytope is given in H-representation ``P = {x : <x, l_i> <= 1}`` with
primitive integer outer normals ``l_i``.  All combinatorial geometry
(vertex enumeration, facet incidence, chamber splitting, triangulation)
runs in exact rational arithmetic; floating point enters only when a
simplex is handed to the integration layer.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rational import affine_rank, det, dot, frac, is_primitive, kernel_vector, rank, solve, vsub
from .errors import (
    CapacityExceededError,
    DegenerateSimplexError,
    DuplicateNormalError,
    EmptyOrDegenerateError,
    NonPrimitiveNormalError,
    NotReflexiveError,
    UnboundedError,
    ValidationError,
)

#: default budget for lattice-point enumeration candidates
LATTICE_CAPACITY = 10**8


@dataclass(frozen=True)
class Simplex:
    """A k-simplex in R^n given by k+1 rational vertices.

    ``volume`` is the k-dimensional Lebesgue measure of the simplex inside
    its affine hull (``|det|/n!`` in the full-dimensional case).
    """

    vertices: tuple

    @property
    def dim(self):
        return len(self.vertices) - 1

    @property
    def ambient_dim(self):
        return len(self.vertices[0])

    def volume_exact(self):
        """Exact rational volume; full-dimensional simplices only."""
        k = self.dim
        if k != self.ambient_dim:
            raise ValueError("exact volume requires a full-dimensional simplex")
        edges = [vsub(v, self.vertices[0]) for v in self.vertices[1:]]
        return abs(det(edges)) / Fraction(math.factorial(k))

    @property
    def volume(self):
        k = self.dim
        if k == 0:
            return 1.0
        edges = [vsub(v, self.vertices[0]) for v in self.vertices[1:]]
        if k == self.ambient_dim:
            return float(abs(det(edges))) / math.factorial(k)
        gram = [[dot(a, b) for b in edges] for a in edges]
        g = det(gram)
        return math.sqrt(float(g)) / math.factorial(k)

    def as_array(self):
        return np.array([[float(c) for c in v] for v in self.vertices], dtype=float)


@dataclass(frozen=True)
class Facet:
    """Facet i of a polytope: the face on {<x, l_i> = 1}.

    ``measure_weight`` is 1/||l_i||_2, the density of the weighted boundary
    measure dsigma with respect to Lebesgue surface measure on the facet.
    """

    index: int
    normal: tuple
    vertex_indices: tuple
    measure_weight: float


class _HRep:
    """Rational halfspace intersection {Ax <= b, Ex = f} (internal).

    Vertex enumeration is by exhaustive active-set search, which is exact
    and fast at the sizes this package targets (d <= ~25, n <= 6).
    """

    def __init__(self, n, ineqs, eqs=()):
        self.n = n
        self.ineqs = tuple((tuple(a), frac(b)) for a, b in ineqs)
        self.eqs = tuple((tuple(a), frac(b)) for a, b in eqs)
        self._vertices = None

    def _eq_basis(self):
        rows, rhs = [], []
        for a, b in self.eqs:
            if rank(rows + [a]) > len(rows):
                rows.append(a)
                rhs.append(b)
        return rows, rhs

    def vertices(self):
        """Lexicographically sorted exact vertices."""
        if self._vertices is not None:
            return self._vertices
        eq_rows, eq_rhs = self._eq_basis()
        need = self.n - len(eq_rows)
        found = set()
        for combo in itertools.combinations(range(len(self.ineqs)), need):
            rows = eq_rows + [self.ineqs[j][0] for j in combo]
            rhs = eq_rhs + [self.ineqs[j][1] for j in combo]
            x = solve(rows, rhs)
            if x is None:
                continue
            if any(dot(a, x) > b for a, b in self.ineqs):
                continue
            if any(dot(a, x) != b for a, b in self.eqs):
                continue
            found.add(x)
        self._vertices = tuple(sorted(found))
        return self._vertices

    def dim(self):
        return affine_rank(list(self.vertices()))

    def _active_sets(self):
        if getattr(self, "_act", None) is None:
            verts = self.vertices()
            self._act = [
                frozenset(i for i, v in enumerate(verts) if dot(a, v) == b) for a, b in self.ineqs
            ]
        return self._act

    def _triangulate_from(self, face_idx):
        verts = self.vertices()
        fdim = affine_rank([verts[i] for i in face_idx])
        if fdim < 0:
            return []
        act = self._active_sets()
        if getattr(self, "_tri_cache", None) is None:
            self._tri_cache = {}
        cache = self._tri_cache

        def tri(face, d):
            if face in cache:
                return cache[face]
            idx_sorted = sorted(face)
            if d == 0:
                out = [(idx_sorted[0],)]
                cache[face] = out
                return out
            apex = min(idx_sorted, key=lambda i: verts[i])
            children = {}
            for aset in act:
                child = face & aset
                if child == face or not child:
                    continue
                if child not in children and affine_rank([verts[i] for i in child]) == d - 1:
                    children[child] = None
            out = []
            for child in sorted(children, key=lambda c: sorted(verts[i] for i in c)):
                if apex in child:
                    continue
                for s in tri(child, d - 1):
                    out.append((apex,) + s)
            cache[face] = out
            return out

        return [tuple(verts[i] for i in s) for s in tri(face_idx, fdim)]

    def triangulate(self):
        """Fan triangulation (from the lexicographically first vertex of each
        face, recursively); returns tuples of rational points."""
        return self._triangulate_from(frozenset(range(len(self.vertices()))))

    def triangulate_face(self, normal, rhs):
        """Triangulate the face where <normal, x> = rhs, reusing the known
        vertices (faces are spanned by vertex subsets; no re-enumeration)."""
        verts = self.vertices()
        nv = tuple(frac(c) for c in normal)
        rv = frac(rhs)
        face = frozenset(i for i, v in enumerate(verts) if dot(nv, v) == rv)
        if not face:
            return []
        return self._triangulate_from(face)

    def face_on(self, normal, rhs):
        """The face where an (in)equality is active, as a new _HRep."""
        return _HRep(self.n, self.ineqs, self.eqs + ((tuple(normal), frac(rhs)),))


def _check_normals(normals):
    if not normals:
        raise ValidationError("empty normal list")
    n = len(normals[0])
    out = []
    for row in normals:
        if len(row) != n:
            raise ValidationError(f"ragged normal row {row!r}")
        iv = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise ValidationError(f"non-integer normal entry {x!r}")
            iv.append(int(x))
        if not is_primitive(iv):
            raise NonPrimitiveNormalError(f"normal {tuple(iv)} is not primitive")
        out.append(tuple(iv))
    if len(set(out)) != len(out):
        raise DuplicateNormalError("repeated facet normal")
    return n, out


def _check_bounded(n, normals):
    rows = [tuple(Fraction(x) for x in l) for l in normals]
    if rank(rows) < n:
        raise UnboundedError("normals do not span R^n")
    # the recession cone {y : <l_i, y> <= 0} is pointed once rank == n;
    # it is nontrivial iff it has an extreme ray, which lies on n-1
    # independent active constraints.
    for combo in itertools.combinations(range(len(rows)), n - 1):
        sub = [rows[j] for j in combo]
        if rank(sub) != n - 1:
            continue
        y = kernel_vector(sub, n)
        if y is None:
            continue
        for cand in (y, tuple(-c for c in y)):
            if all(dot(l, cand) <= 0 for l in rows):
                raise UnboundedError(f"recession direction {cand}")


class Polytope:
    """A bounded polytope ``{x : <x, l_i> <= 1}`` with 0 in its interior.

    Use :func:`build` (or the constructor) with the integer facet normals.
    Instances are immutable; derived data is cached internally and all
    operations are safe for concurrent readers.
    """

    def __init__(self, normals, *, require_reflexive=False, label=None):
        n, nm = _check_normals([list(r) for r in normals])
        if len(nm) < n + 1:
            raise UnboundedError(f"{len(nm)} normals cannot bound R^{n}")
        _check_bounded(n, nm)
        self.dim = n
        self.normals = tuple(nm)
        self.label = label
        self._hrep = _HRep(n, [(tuple(Fraction(x) for x in l), Fraction(1)) for l in nm])
        verts = self._hrep.vertices()
        if len(verts) < n + 1 or affine_rank(list(verts)) < n:
            raise EmptyOrDegenerateError("vertex set does not span")
        self._vertices = verts
        facets = []
        for i, l in enumerate(nm):
            lv = tuple(Fraction(x) for x in l)
            on = tuple(j for j, v in enumerate(verts) if dot(lv, v) == 1)
            if len(on) < n or affine_rank([verts[j] for j in on]) != n - 1:
                raise EmptyOrDegenerateError(f"normal {l} supports no facet (redundant)")
            w = 1.0 / math.hypot(*[float(x) for x in l])
            facets.append(Facet(index=i, normal=l, vertex_indices=on, measure_weight=w))
        self._facets = tuple(facets)
        self.is_reflexive = all(v.denominator == 1 for vert in verts for v in vert)
        if require_reflexive and not self.is_reflexive:
            raise NotReflexiveError("vertices are not all lattice points")
        self._triangulation = None
        self._volume_exact = None

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self):
        """Exact rational vertices, lexicographically sorted."""
        return self._vertices

    @property
    def facets(self):
        return self._facets

    def vertices_array(self):
        return np.array([[float(c) for c in v] for v in self._vertices], dtype=float)

    def contains(self, x, margin=Fraction(0)):
        xv = tuple(frac(c) for c in x)
        return all(dot(tuple(Fraction(c) for c in l), xv) <= 1 - margin for l in self.normals)

    def __repr__(self):
        lab = f" {self.label!r}" if self.label else ""
        return f"<Polytope{lab} dim={self.dim} facets={len(self.normals)} vertices={len(self._vertices)}>"

    # -- measures ------------------------------------------------------

    def triangulate(self):
        """Simplices covering P with measure-zero overlaps.

        A polytope that is itself a simplex is returned as one piece;
        otherwise the recursive vertex-fan triangulation is used.
        """
        if self._triangulation is None:
            self._triangulation = tuple(Simplex(tuple(s)) for s in self._hrep.triangulate())
        return self._triangulation

    def volume_exact(self):
        if self._volume_exact is None:
            self._volume_exact = sum((s.volume_exact() for s in self.triangulate()), Fraction(0))
        return self._volume_exact

    def volume(self):
        """Lebesgue volume |P|."""
        return float(self.volume_exact())

    def triangulate_facet(self, i):
        """(n-1)-simplices covering facet i."""
        nv = tuple(Fraction(x) for x in self.normals[i])
        return tuple(Simplex(tuple(s)) for s in self._hrep.triangulate_face(nv, 1))

    def boundary_measure(self):
        """|dP| in the weighted boundary measure dsigma = dsigma_0 / ||l_i||."""
        total = []
        for f in self._facets:
            area = math.fsum(s.volume for s in self.triangulate_facet(f.index))
            total.append(area * f.measure_weight)
        return math.fsum(total)

    # -- lattice points ------------------------------------------------

    def lattice_points(self, k, capacity=None):
        """Integer points of the dilation kP, in lexicographic order.

        Returns an (N, n) int64 array.  Raises CapacityExceededError when
        the bounding-box candidate count exceeds ``capacity``.
        """
        if k < 1 or int(k) != k:
            raise ValueError(f"dilation factor must be a positive integer, got {k!r}")
        k = int(k)
        cap = LATTICE_CAPACITY if capacity is None else capacity
        lo, hi = [], []
        for j in range(self.dim):
            coords = [v[j] for v in self._vertices]
            lo.append(math.ceil(k * min(coords)))
            hi.append(math.floor(k * max(coords)))
        counts = [h - l + 1 for l, h in zip(lo, hi)]
        total = 1
        for c in counts:
            total *= c
        if total > cap:
            raise CapacityExceededError(f"{total} candidate points exceeds capacity {cap}")
        L = np.array(self.normals, dtype=np.int64).T  # (n, d)
        if self.dim == 1:
            cand = np.arange(lo[0], hi[0] + 1, dtype=np.int64)[:, None]
            keep = cand[(cand @ L <= k).all(axis=1)]
            return keep
        ranges = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo[1:], hi[1:])]
        grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, self.dim - 1)
        rest = grid @ L[1:, :]  # (M, d)
        out = []
        for i0 in range(lo[0], hi[0] + 1):
            mask = (rest + i0 * L[0, :] <= k).all(axis=1)
            if mask.any():
                sel = grid[mask]
                out.append(np.concatenate([np.full((len(sel), 1), i0, dtype=np.int64), sel], axis=1))
        if not out:
            return np.empty((0, self.dim), dtype=np.int64)
        return np.concatenate(out, axis=0)


def build(normals, require_reflexive=False, label=None):
    """Validate facet normals and construct a :class:`Polytope`."""
    return Polytope(normals, require_reflexive=require_reflexive, label=label)


# -- chamber decompositions --------------------------------------------


@dataclass(frozen=True)
class Chamber:
    """Closure of one linearity region of a PL convex function inside P."""

    vertices: tuple
    piece_index: int
    hrep: _HRep

    def triangulate(self):
        return tuple(Simplex(tuple(s)) for s in self.hrep.triangulate())

    def volume_exact(self):
        return sum((s.volume_exact() for s in self.triangulate()), Fraction(0))

    def barycenter(self):
        m = len(self.vertices)
        return tuple(sum(v[j] for v in self.vertices) / m for j in range(len(self.vertices[0])))


@dataclass(frozen=True)
class ChamberDecomposition:
    """Partition of P into maximal-domain chambers of u = max of affine pieces."""

    parent: Polytope
    function: object
    pieces: tuple

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)


def refine_by_pl(P, u):
    """Split P along the linearity chambers of the PL convex function u.

    Chamber lambda is ``P ∩ {<a^l - a^m, x> + (c^l - c^m) >= 0  for all m}``.
    Empty and lower-dimensional chambers are dropped.  Exact arithmetic;
    the active piece is re-verified at every chamber vertex and barycenter.
    """
    n = P.dim
    pieces = list(u.pieces)
    base = [(tuple(Fraction(x) for x in l), Fraction(1)) for l in P.normals]
    seen = set()
    chambers = []
    for lam, (a_l, c_l) in enumerate(pieces):
        if (a_l, c_l) in seen:
            continue  # identical pieces would produce the same chamber twice
        seen.add((a_l, c_l))
        ineqs = list(base)
        for mu, (a_m, c_m) in enumerate(pieces):
            if (a_m, c_m) == (a_l, c_l):
                continue
            # <a_m - a_l, x> <= c_l - c_m
            ineqs.append((vsub(a_m, a_l), c_l - c_m))
        hrep = _HRep(n, ineqs)
        verts = hrep.vertices()
        if len(verts) < n + 1 or affine_rank(list(verts)) < n:
            continue
        ch = Chamber(vertices=verts, piece_index=lam, hrep=hrep)
        for x in list(verts) + [ch.barycenter()]:
            val = max(dot(a, x) + c for a, c in pieces)
            if dot(a_l, x) + c_l != val:
                raise ValidationError("chamber verification failed; u is not the max of its pieces")
        chambers.append(ch)
    return ChamberDecomposition(parent=P, function=u, pieces=tuple(chambers))


def simplex_from_points(points):
    """Build a Simplex, rejecting affinely dependent vertices.

    Floats are accepted here (unlike in normals or PL data): each float is
    converted to its exact binary rational value.
    """
    pts = tuple(
        tuple(Fraction(c) if isinstance(c, float) else frac(c) for c in p) for p in points
    )
    if affine_rank(list(pts)) != len(pts) - 1:
        raise DegenerateSimplexError(f"{len(pts)} affinely dependent vertices")
    return Simplex(pts)
