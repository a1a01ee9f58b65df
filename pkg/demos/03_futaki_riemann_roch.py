# Modified Futaki invariants and the lattice-sum expansion.
#
# A toric degeneration is encoded by a PL convex function u on P.  Its
# invariant F1 = L(u) / (2|P|) has a second, purely combinatorial route:
# weighted sums S1, S2 over the lattice points of dilations kP satisfy
#     -(S1 - S2) / (k N_k) = F0 + F1/k + o(k^-2),
# so fitting the ratio against 1/k recovers both coefficients.

import os

import numpy as np

from toricstab import (
    PLConvexFunction,
    catalog_lookup,
    futaki_F0,
    futaki_F1,
    L_functional,
    riemann_roch_check,
    solve_soliton,
)

seg = catalog_lookup("CP1").polytope
step = PLConvexFunction.max_with_zero([1])   # u = max(0, x)

print("== integral route on the segment ==")
print("L(u)      =", L_functional(seg, [0.0], step), " (hand value 1/2)")
print("F1        =", futaki_F1(seg, [0.0], step), " (hand value 1/8)")
print("F0 at R=2 =", futaki_F0(seg, [0.0], step, 2), " (hand value -7/4)")
print("F0 at R=3 =", futaki_F0(seg, [0.0], step, 3), " (R-dependent, unlike F1)")

print("\n== lattice route: ratio_k -> F0 + F1/k ==")
rep = riemann_roch_check(seg, [0.0], step, 2, range(10, 61, 5))
print(" k   N_k      S1        S2     ratio")
for r in rep.records:
    print(f"{r.k:3d} {r.N_k:5d} {r.S1:9.2f} {r.S2:8.2f} {r.ratio:+.6f}")
print("fit:  F0 =", rep.fit.F0_est, " F1 =", rep.fit.F1_est)
print("ref:  F0 =", rep.F0_integral, " F1 =", rep.F1_integral)

print("\n== R-independence of F1 ==")
for R in (2, 5, 9):
    f = riemann_roch_check(seg, [0.0], step, R, range(10, 61, 5)).fit
    print(f"R={R}: F1_est = {f.F1_est:+.6f}   F0_est = {f.F0_est:+.4f}")

print("\n== a nontrivial soliton: Bl1CP2 ==")
bl1 = catalog_lookup("Bl1CP2").polytope
theta = solve_soliton(bl1).theta
ux = PLConvexFunction.max_with_zero([1, 0])
rep = riemann_roch_check(bl1, theta, ux, 2, range(10, 61, 5))
print("F1 (lattice fit) =", rep.fit.F1_est)
print("F1 (integral)    =", rep.F1_integral)

# A linear u is a trivial degeneration: its invariant vanishes at the soliton.
lin = PLConvexFunction.linear([1, 0])
print("F1 of a linear u =", futaki_F1(bl1, theta, lin))

out = os.path.join(os.path.dirname(__file__), "rr_segment.svg")
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = np.array([r.k for r in rep.records], dtype=float)
    plt.figure(figsize=(5, 3.5))
    plt.plot(1 / ks, [r.ratio for r in rep.records], "o", label="lattice ratio")
    xs = np.linspace(0, 0.11, 100)
    plt.plot(xs, rep.fit.F0_est + rep.fit.F1_est * xs + rep.fit.curvature * xs**2, label="fit")
    plt.xlabel("1/k")
    plt.ylabel("-(S1-S2)/(k N_k)")
    plt.legend()
    plt.tight_layout()
    plt.savefig(out)
    print("\nwrote", out)
except ImportError:
    print("\nmatplotlib not available; skipped the plot")
