# Conical soliton data: tau, cone angles, beta_bar, and L_{beta,tau}.
#
# Given any torus weight theta, the weighted barycenter tau of P fixes
# per-facet cone angles beta_i = beta * l_i(tau); the admissible range is
# beta <= beta_bar = 1 / max_i l_i(tau).  The modified functional
# L_{beta,tau} kills linear functions for *every* theta, not only the
# soliton -- that is what makes tau the right vanishing point.

import math

import numpy as np

from toricstab import (
    L_beta_tau,
    L_functional,
    PLConvexFunction,
    angles_and_beta_bar,
    catalog_lookup,
    compute_tau,
    conical_k_energy,
    k_energy,
    solve_soliton,
)

seg = catalog_lookup("CP1").polytope

print("== the segment with theta = 1 ==")
tau = compute_tau(seg, [1.0])
print("tau =", tau[0], "  (closed form 2/(e^2-1) =", 2 / (math.e**2 - 1), ")")
data = angles_and_beta_bar(seg, [1.0], 0.5)
print("beta_bar =", data.beta_bar, "  angles at beta=1/2:", data.angles)

print("\n== L_{beta,tau} kills linear functions for any theta ==")
rng = np.random.default_rng(1)
for _ in range(5):
    th = rng.normal(size=1)
    lin = PLConvexFunction.linear([2])
    print(f"theta={th[0]:+.3f}: L_beta_tau(2x) = {L_beta_tau(seg, th, 0.5, lin):+.2e}"
          f"   (plain L(2x) = {L_functional(seg, th, lin):+.3f})")

print("\n== at the soliton, tau = 0 and the angles are uniform ==")
bl1 = catalog_lookup("Bl1CP2").polytope
theta = solve_soliton(bl1).theta
data = angles_and_beta_bar(bl1, theta, 0.8)
print("tau =", data.tau, " beta_bar =", data.beta_bar)
print("angles:", data.angles, " (all equal to beta)")

print("\n== conical K-energy ==")
plain = k_energy(seg, [0.0])
print("Guillemin energy, theta=0      :", plain, " (hand value 2 ln 2 - 2 =", 2 * math.log(2) - 2, ")")
print("conical energy, beta=1, tau=0  :", conical_k_energy(seg, [0.0], 1.0))
for beta in (0.75, 0.5, 0.25):
    print(f"conical energy, theta=1, beta={beta}:", conical_k_energy(seg, [1.0], beta))

# higher dimensions are cheap too: the integrand splits into an analytic
# part plus per-facet l_i log l_i terms on exact dyadic slab meshes
cp3 = catalog_lookup("CP3").polytope
print("\nCP3 Guillemin energy (3-D, tol 1e-7):", k_energy(cp3, [0.0, 0.0, 0.0]))
