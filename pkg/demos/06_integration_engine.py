# The integration engine behind everything else.
#
# All functionals reduce to integrals of (polynomial) * e^{<theta,x>} over
# polytopes, chambers, and weighted boundaries.  Two independent routes
# compute them: a closed form built on divided differences of exp, and
# degree-exact adaptive simplex quadrature.  Their agreement is the
# package's accuracy certificate.

import numpy as np

from toricstab import (
    IntegralSpec,
    boundary_integral,
    catalog_lookup,
    exp_integral_simplex,
    poly_exp_integral,
    simplex_from_points,
)

print("== the closed-form kernel ==")
s = simplex_from_points([(-1,), (1,)])
print("int_[-1,1] e^x dx      =", exp_integral_simplex(s, [1.0]), " (e - 1/e)")
tri = simplex_from_points([(0, 0), (1, 0), (0, 1)])
print("int_tri e^{x} dx       =", exp_integral_simplex(tri, [1.0, 0.0]), " (e - 2)")
print("(the vertex values {0, 1, 0} collide, so this one exercised the")
print(" confluent truncated-Taylor path rather than the separated formula)")

print("\n== dual routes on a random integrand ==")
rng = np.random.default_rng(0)
V = rng.uniform(-1, 1, size=(4, 3))
S = simplex_from_points([[float(c) for c in row] for row in V])
spec = IntegralSpec.affine_times_linear([0.3, -1.0, 0.2], 0.5, [1.0, 0.4, -0.7], [2.0, -1.0, 0.5])
closed = poly_exp_integral(S, spec)
adapt = poly_exp_integral(S, spec, method="adaptive")
print("closed form :", closed.value, f"(pieces: {closed.subdivisions})")
print("adaptive    :", adapt.value, f"(cells: {adapt.subdivisions}, est: {adapt.abs_error_estimate:.1e})")
print("difference  :", abs(closed.value - adapt.value))

print("\n== weighted boundary integrals ==")
cp2 = catalog_lookup("CP2").polytope
print("int_dP 1 dsigma on CP2 =", boundary_integral(cp2, IntegralSpec.one([0.0, 0.0]), [0.0, 0.0]),
      " (= |dP| = 9, exactly)")

print("\n== the divergence identity tying the two sides ==")
from toricstab import divergence_identity_gap, PLConvexFunction

u = PLConvexFunction([([0, 0], 0), ([1, 0], 0), ([-1, 1], 0)])
b, i, gap = divergence_identity_gap(cp2, [0.7, -0.3], u)
print("boundary form:", b)
print("interior form:", i)
print("gap          :", gap)
