"""The degeneration functional L(u), Futaki invariants, and K-energy.

For a PL convex function u = max of rational affine pieces on a polytope P
with torus weight theta,

    L(u) = int_dP u e^{theta(x)} dsigma - int_P (n + theta(x)) u e^{theta(x)} dx,

the first-order invariant of the associated degeneration is
F1 = L(u) / (2 |P|), and F0(R) = -(1/|P|) int_P (R - u) e^{theta(x)} dx.
Interior terms are assembled chamber by chamber from closed-form
exponential moments; boundary terms facet by facet.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rational import dot, frac, frac_str, vec
from .errors import (
    AllSamplesDegenerateError,
    RNotDominatingError,
    ToricstabError,
    ValidationError,
)
from .integrate import adaptive_integrate, region_moments, weighted_boundary_moments
from .polytope import refine_by_pl


class PLConvexFunction:
    """u(x) = max over pieces of <a, x> + c, with rational pieces.

    Pieces are (a, c) with a a rational vector and c a rational scalar.
    Exact duplicates are removed; order is otherwise preserved.
    """

    def __init__(self, pieces):
        seen = []
        for a, c in pieces:
            p = (vec(a), frac(c))
            if p not in seen:
                seen.append(p)
        if not seen:
            raise ValidationError("a PL convex function needs at least one piece")
        n = len(seen[0][0])
        if any(len(a) != n for a, _ in seen):
            raise ValidationError("pieces have inconsistent dimensions")
        self.pieces = tuple(seen)
        self.dim = n

    is_rational = True  # construction only admits rational data

    @classmethod
    def linear(cls, a):
        return cls([(a, 0)])

    @classmethod
    def coordinate(cls, alpha, dim):
        a = [0] * dim
        a[alpha] = 1
        return cls([(a, 0)])

    @classmethod
    def constant(cls, c, dim):
        return cls([([0] * dim, c)])

    @classmethod
    def max_with_zero(cls, a):
        """max(0, <a,x>), the basic one-kink example."""
        return cls([([0] * len(a), 0), (a, 0)])

    def __call__(self, x):
        xv = tuple(frac(c) if not isinstance(c, float) else Fraction(c) for c in x)
        return max(dot(a, xv) + c for a, c in self.pieces)

    def evaluate_many(self, X):
        """Evaluate at float points X (N, n)."""
        X = np.asarray(X, dtype=float)
        A = np.array([[float(ai) for ai in a] for a, _ in self.pieces])
        C = np.array([float(c) for _, c in self.pieces])
        return (X @ A.T + C).max(axis=1)

    def scaled(self, alpha):
        alpha = frac(alpha)
        if alpha < 0:
            raise ValueError("only nonnegative scaling preserves convexity of the max")
        return PLConvexFunction([(tuple(alpha * ai for ai in a), alpha * c) for a, c in self.pieces])

    def __add__(self, other):
        """Max-plus sum: (u + v)(x) = u(x) + v(x), again PL convex."""
        pieces = []
        for a, c in self.pieces:
            for b, d in other.pieces:
                pieces.append((tuple(x + y for x, y in zip(a, b)), c + d))
        return PLConvexFunction(pieces)

    def add_linear(self, a, c=0):
        av = vec(a)
        cv = frac(c)
        return PLConvexFunction([(tuple(x + y for x, y in zip(p, av)), q + cv) for p, q in self.pieces])

    def max_on(self, P):
        return max(self(v) for v in P.vertices)

    def is_zero_on(self, P):
        """Exact test for u == 0 on P (valid for u >= 0 convex)."""
        return all(self(v) == 0 for v in P.vertices) and self((0,) * self.dim) <= 0

    def to_dict(self):
        return {
            "pieces": [
                {"a": [frac_str(x) for x in a], "c": frac_str(c)} for a, c in self.pieces
            ]
        }

    def __repr__(self):
        terms = [f"(a={tuple(map(str, a))}, c={c})" for a, c in self.pieces]
        return f"PLConvexFunction[{', '.join(terms)}]"


def normalize_at_origin(u):
    """Subtract value and a subgradient at 0: the result v satisfies
    v(0) = 0 and v >= 0, so inf_P v = v(0).

    The subgradient is the average of the gradients of all pieces active
    at 0 (exact rational tie handling)."""
    return normalize_at(u, (0,) * u.dim)


def normalize_at(u, base):
    """Normalize u at an arbitrary base point: subtract
    u(base) + <g, x - base> with g the averaged active gradient.

    Floats in ``base`` (e.g. a computed tau) are taken at their exact
    binary rational value, so activity ties stay exact."""
    b = tuple(Fraction(c) if isinstance(c, float) else frac(c) for c in base)
    val = max(dot(a, b) + c for a, c in u.pieces)
    active = [a for a, c in u.pieces if dot(a, b) + c == val]
    m = len(active)
    g = tuple(sum(a[j] for a in active) / m for j in range(u.dim))
    gb = dot(g, b)
    return PLConvexFunction(
        [(tuple(x - y for x, y in zip(a, g)), c - val + gb) for a, c in u.pieces]
    )


# -- interior/boundary assembly -----------------------------------------


def _chamber_data(P, u, theta, order=2):
    """Per-chamber moments plus the active affine piece, cached per call."""
    decomp = refine_by_pl(P, u)
    out = []
    for ch in decomp.pieces:
        a, c = u.pieces[ch.piece_index]
        af = np.array([float(x) for x in a])
        mom = region_moments(ch, theta, order=order)
        out.append((af, float(c), mom, ch))
    return out, decomp


def _interior_term(P, u, theta):
    """int_P (n + theta(x)) u e^{theta(x)} dx, chamber by chamber."""
    theta = np.asarray(theta, dtype=float)
    n = P.dim
    parts = []
    for af, cf, mom, _ in _chamber_data(P, u, theta)[0]:
        val = n * (af @ mom.i1 + cf * mom.i0)
        val += af @ mom.i2 @ theta + cf * (theta @ mom.i1)
        parts.append(val)
    return math.fsum(parts)


def _boundary_parts(P, u, theta, decomp):
    parts = []
    for f in P.facets:
        lvec = tuple(Fraction(x) for x in f.normal)
        for ch in decomp.pieces:
            a, c = u.pieces[ch.piece_index]
            simplices = ch.hrep.triangulate_face(lvec, 1)
            if not simplices or len(simplices[0]) != P.dim:  # need (n-1)-simplices
                continue
            mom = weighted_boundary_moments(simplices, theta, order=1)
            af = np.array([float(x) for x in a])
            parts.append(af @ mom.i1 + float(c) * mom.i0)
    return parts


def pl_boundary_integral(P, u, theta):
    """int_dP u e^{theta(x)} dsigma for PL u, split by facet and chamber."""
    theta = np.asarray(theta, dtype=float)
    return math.fsum(_boundary_parts(P, u, theta, refine_by_pl(P, u)))


@dataclass(frozen=True)
class DegenerationValues:
    """All chamber-assembled quantities of one (P, theta, u) in one pass."""

    boundary: float
    interior: float
    H: float

    @property
    def L(self):
        return self.boundary - self.interior


def degeneration_values(P, theta, u):
    """Boundary, interior, and H terms sharing a single decomposition."""
    theta = np.asarray(theta, dtype=float)
    n = P.dim
    decomp = refine_by_pl(P, u)
    interior, hparts = [], []
    for ch in decomp.pieces:
        a, c = u.pieces[ch.piece_index]
        af = np.array([float(x) for x in a])
        cf = float(c)
        mom = region_moments(ch, theta, order=2)
        val = n * (af @ mom.i1 + cf * mom.i0)
        val += af @ mom.i2 @ theta + cf * (theta @ mom.i1)
        interior.append(val)
        hparts.append(af @ mom.i1 + cf * mom.i0)
    boundary = math.fsum(_boundary_parts(P, u, theta, decomp))
    return DegenerationValues(boundary=boundary, interior=math.fsum(interior), H=math.fsum(hparts))


def L_functional(P, theta, u):
    """L(u) = boundary term - interior term (see module docstring)."""
    return degeneration_values(P, theta, u).L


def divergence_identity_gap(P, theta, u):
    """Residual of int_dP u e^t dsigma = int_P (<x,grad u> + n u + theta(x) u) e^t dx.

    Returns (boundary, interior, gap); the integration-by-parts step used
    throughout the functionals.
    """
    theta = np.asarray(theta, dtype=float)
    n = P.dim
    parts = []
    for af, cf, mom, _ in _chamber_data(P, u, theta)[0]:
        val = af @ mom.i1  # <x, grad u>
        val += n * (af @ mom.i1 + cf * mom.i0)
        val += af @ mom.i2 @ theta + cf * (theta @ mom.i1)
        parts.append(val)
    interior = math.fsum(parts)
    boundary = pl_boundary_integral(P, u, theta)
    return boundary, interior, boundary - interior


def futaki_F1(P, theta, u):
    """F1 = L(u) / (2 |P|), the modified Futaki invariant of the degeneration."""
    return L_functional(P, theta, u) / (2.0 * P.volume())


def futaki_F0(P, theta, u, R):
    """F0 = -(1/|P|) int_P (R - u) e^{theta(x)} dx; requires R > max_P u."""
    if Fraction(R) <= u.max_on(P):
        raise RNotDominatingError(f"R={R} does not dominate max_P u = {u.max_on(P)}")
    theta = np.asarray(theta, dtype=float)
    parts = []
    for af, cf, mom, _ in _chamber_data(P, u, theta, order=1)[0]:
        parts.append(float(R) * mom.i0 - (af @ mom.i1 + cf * mom.i0))
    return -math.fsum(parts) / P.volume()


def H_functional(P, theta, u):
    """H(u) = int_P u e^{theta(x)} dx."""
    theta = np.asarray(theta, dtype=float)
    parts = []
    for af, cf, mom, _ in _chamber_data(P, u, theta, order=1)[0]:
        parts.append(af @ mom.i1 + cf * mom.i0)
    return math.fsum(parts)


# -- random stability scan ----------------------------------------------


def _random_pl(rng, dim):
    """2..6 pieces, slopes uniform on the 1/1000 grid in [-3,3]^n, offsets
    in [-1,1]; a documented calibration choice, deterministic per seed."""
    r = int(rng.integers(2, 7))
    pieces = []
    for _ in range(r):
        a = [Fraction(int(rng.integers(-3000, 3001)), 1000) for _ in range(dim)]
        c = Fraction(int(rng.integers(-1000, 1001)), 1000)
        pieces.append((a, c))
    return PLConvexFunction(pieces)


@dataclass(frozen=True)
class StabilityScan:
    min_ratio: float
    argmin: PLConvexFunction
    samples_used: int
    ratios: tuple
    samples: tuple | None = None


def stability_margin(P, theta, sample_count, seed, threads=1, keep_samples=False):
    """Empirical margin min_u L(u) / int_dP u e^theta dsigma over random
    normalized PL convex functions; positive margin is the numerical
    footprint of modified K-stability.

    Requires theta to solve the soliton equation (checked via L(linear)).
    Deterministic for a given seed, independent of thread count.
    """
    for alpha in range(P.dim):
        lin = PLConvexFunction.coordinate(alpha, P.dim)
        if abs(L_functional(P, theta, lin)) > 1e-8 * (1.0 + P.boundary_measure()):
            raise ToricstabError("theta is not the soliton weight: L(linear) != 0")
    seeds = np.random.SeedSequence(seed).spawn(sample_count)

    def one(i):
        rng = np.random.default_rng(seeds[i])
        u = normalize_at_origin(_random_pl(rng, P.dim))
        if u.is_zero_on(P):
            return None
        vals = degeneration_values(P, theta, u)
        return (vals.L / vals.boundary, u, vals)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(one, range(sample_count)))
    else:
        results = [one(i) for i in range(sample_count)]
    kept = [r for r in results if r is not None]
    if not kept:
        raise AllSamplesDegenerateError(f"no usable samples out of {sample_count}")
    ratios = tuple(r[0] for r in kept)
    best = min(range(len(kept)), key=lambda i: kept[i][0])
    return StabilityScan(
        min_ratio=kept[best][0],
        argmin=kept[best][1],
        samples_used=len(kept),
        ratios=ratios,
        samples=tuple((r[1], r[2]) for r in kept) if keep_samples else None,
    )


# -- symplectic potentials and the reduced K-energy ----------------------


class SymplecticPotential:
    """Guillemin-type symplectic potential u0 = sum_i w_i l_i log l_i with
    l_i = 1 - <l_i, x> and w_i = 1/beta_i.

    The plain Guillemin potential has beta_i = 1; the conical variant uses
    beta_i = beta * l_i(tau).
    """

    def __init__(self, P, beta=None, tau=None):
        self.polytope = P
        self.L = np.array(P.normals, dtype=float)  # (d, n)
        if beta is None:
            self.kind = "Guillemin"
            self.beta = None
            self.tau = None
            self.facet_angles = np.ones(len(P.normals))
        else:
            from .errors import TauOutsidePolytopeError

            tau = np.asarray(tau, dtype=float)
            ltau = 1.0 - self.L @ tau
            if np.any(ltau <= 0):
                raise TauOutsidePolytopeError("tau outside the open polytope")
            self.kind = "ConicalGuillemin"
            self.beta = float(beta)
            self.tau = tau
            self.facet_angles = self.beta * ltau
        self.weights = 1.0 / self.facet_angles

    def _l(self, X):
        return 1.0 - X @ self.L.T  # (N, d)

    def value(self, X):
        l = self._l(X)
        return (self.weights * l * np.log(l)).sum(axis=1)

    def gradient(self, X):
        l = self._l(X)
        return -(self.weights * (np.log(l) + 1.0)) @ self.L

    def hessian_logdet(self, X):
        l = self._l(X)
        H = np.einsum("nd,di,dj->nij", self.weights / l, self.L, self.L)
        sign, logdet = np.linalg.slogdet(H)
        return logdet

    def __repr__(self):
        if self.kind == "Guillemin":
            return f"<SymplecticPotential Guillemin on {self.polytope!r}>"
        return f"<SymplecticPotential ConicalGuillemin beta={self.beta} on {self.polytope!r}>"


def guillemin_potential(P):
    return SymplecticPotential(P)


def graded_fan_simplices(P, levels=45):
    """Fan triangulation from 0 with geometric radial grading toward dP.

    Each facet simplex W spans a cone conv(0, W); the cone is cut at radii
    1 - 2^-j so that cells shrink geometrically toward the boundary, where
    the K-energy integrand has its (integrable) derivative singularity.
    Frustum slabs are triangulated by the staircase rule.  Returns
    (vertex-array, measure) pairs ready for the adaptive integrator.
    """
    out = []
    for f in P.facets:
        for s in P.triangulate_facet(f.index):
            W = s.as_array()  # (n, n): n vertices spanning the outer face
            n = W.shape[1]
            cone_vol = abs(np.linalg.det(W)) / math.factorial(n)
            if cone_vol == 0.0:
                continue
            # inner cone up to radius 1/2
            a = 0.5
            inner = np.vstack([np.zeros((1, n)), a * W])
            out.append((inner, cone_vol * a**n))
            for j in range(1, levels + 1):
                b = 1.0 - 2.0 ** (-j - 1) if j < levels else 1.0
                # staircase triangulation of the frustum between aW and bW
                for i in range(n):
                    verts = np.vstack([a * W[: i + 1], b * W[i:]])
                    meas = abs(np.linalg.det(verts[1:] - verts[0])) / math.factorial(n)
                    if meas > 0.0:
                        out.append((verts, meas))
                a = b
    return out


def _is_simple(P):
    """Every vertex on exactly n facets (smooth/Delzant-type combinatorics)."""
    for v in P.vertices:
        active = sum(1 for l in P.normals if dot(tuple(Fraction(x) for x in l), v) == 1)
        if active != P.dim:
            return False
    return True


def facet_slab_cells(P, i, levels=45):
    """Exact dyadic slab mesh of P by the level sets of l_i = 1 - <l_i, x>.

    Slab j is P intersected with {l_max 2^-(j+1) <= l_i <= l_max 2^-j}
    (the last slab reaches l_i = 0); clipping and triangulation are exact,
    so the slabs tile P.  On slab j the function log l_i varies by log 2
    only, which tames the l_i log l_i integrand without local refinement.
    """
    from .polytope import _HRep

    n = P.dim
    lvec = tuple(Fraction(x) for x in P.normals[i])
    neg = tuple(-x for x in lvec)
    lmax = 1 - min(dot(lvec, v) for v in P.vertices)
    base = [(tuple(Fraction(x) for x in l), Fraction(1)) for l in P.normals]
    cells = []
    hi = lmax
    for j in range(levels + 1):
        lo = lmax / 2 ** (j + 1) if j < levels else Fraction(0)
        # l_i <= hi  <=>  <-l, x> <= hi - 1 ;  l_i >= lo  <=>  <l, x> <= 1 - lo
        slab = _HRep(n, base + [(neg, hi - 1), (lvec, 1 - lo)])
        for s in slab.triangulate():
            V = np.array([[float(c) for c in v] for v in s])
            E = V[1:] - V[0]
            meas = abs(float(np.linalg.det(E))) / math.factorial(n) if len(s) == n + 1 else 0.0
            if meas > 0.0:
                cells.append((V, meas))
        hi = lo
    return cells


def _energy_quadrature(P, theta, weights, log_a, log_b, rel_tol, max_cells):
    """Shared K-energy engine.

    Both energy variants have the pointwise form

        [-log det(H_w) - sum_i (1 - a_i - b_i l_i)
         + sum_i (a_i + b_i l_i) log l_i] * e^{theta(x)}

    with H_w = sum_i w_i l_i l_i^T / l_i.  On a simple polytope,
    det(H_w) * prod_i l_i is a positive polynomial (Cauchy-Binet), so the
    first two groups are analytic on the closure and integrate on the
    plain triangulation, while each (a_i + b_i l_i) log l_i term gets its
    own exact dyadic slab mesh, on which log l_i varies by only log 2 per
    slab.  Non-simple polytopes fall back to the combined integrand on a
    radially graded fan (slower, still correct).
    """
    theta = np.asarray(theta, dtype=float)
    L = np.array(P.normals, dtype=float)
    weights = np.asarray(weights, dtype=float)
    log_a = np.asarray(log_a, dtype=float)
    log_b = np.asarray(log_b, dtype=float)

    def lvals(X):
        return 1.0 - X @ L.T

    if not _is_simple(P):
        # det H * prod l_i vanishes at non-simple vertices, so the split is
        # unavailable; the log singularities still cancel pointwise
        def combined(X):
            l = lvals(X)
            H = np.einsum("nd,di,dj->nij", weights / l, L, L)
            _, logdet = np.linalg.slogdet(H)
            # the log-l_i part of coeff that came from splitting the
            # determinant stays inside -logdet here, hence coeff - 1
            coeff = log_a + log_b * l
            inner = ((coeff - 1.0) * np.log(l)).sum(axis=1) - (1.0 - coeff).sum(axis=1)
            return (-logdet + inner) * np.exp(X @ theta)

        rep = adaptive_integrate(
            combined, graded_fan_simplices(P), rel_tol=0.2 * rel_tol, abs_tol=1e-13,
            max_cells=max_cells,
        )
        return rep.value

    def smooth_part(X):
        l = lvals(X)
        H = np.einsum("nd,di,dj->nij", weights / l, L, L)
        _, logdet = np.linalg.slogdet(H)
        log_poly = logdet + np.log(l).sum(axis=1)  # log(det H * prod l): analytic
        rest = (log_a + log_b * l - 1.0).sum(axis=1)
        return (-log_poly + rest) * np.exp(X @ theta)

    parts = []
    rep = adaptive_integrate(
        smooth_part, P, rel_tol=0.1 * rel_tol, abs_tol=1e-13, max_cells=max_cells
    )
    parts.append(rep.value)
    for i in range(len(P.normals)):

        def singular(X, li=L[i], ai=log_a[i], bi=log_b[i]):
            l = 1.0 - X @ li
            return (ai + bi * l) * np.log(l) * np.exp(X @ theta)

        rep = adaptive_integrate(
            singular, facet_slab_cells(P, i), rel_tol=0.2 * rel_tol, abs_tol=1e-13,
            max_cells=max_cells,
        )
        parts.append(rep.value)
    return math.fsum(parts)


def k_energy(P, theta, potential=None, rel_tol=1e-7, max_cells=400_000):
    """Reduced K-energy F(u0) = -int_P log det(D^2 u0) e^theta + L(u0).

    L for the smooth potential is taken in the interior form
    int_P <x, grad u0> e^theta dx; the per-facet log l_i coefficient is
    then (1 - w_i) + w_i l_i (vanishing linearly for the plain Guillemin
    potential, where w_i = 1).
    """
    if potential is None:
        potential = SymplecticPotential(P)
    w = potential.weights
    return _energy_quadrature(P, theta, w, 1.0 - w, w, rel_tol, max_cells)
