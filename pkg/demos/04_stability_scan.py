# Empirical modified K-stability margins.
#
# At the soliton theta, the functional L is nonnegative on normalized
# convex functions and vanishes only on the trivial (linear) ones.  The
# scan samples random normalized PL convex functions and reports the
# minimum of L(u) / int_dP u e^theta dsigma -- an empirical margin for
# the stability inequality L(u) >= lambda * int_dP u e^theta dsigma.

from toricstab import catalog, solve_soliton, stability_margin

SAMPLES = 120   # bump to 500+ for the margins quoted in the tests
SEED = 20240810

print(f"== min L(u) / int_dP u e^theta over {SAMPLES} samples ==")
for e in catalog():
    theta = solve_soliton(e.polytope).theta
    scan = stability_margin(e.polytope, theta, SAMPLES, seed=SEED, keep_samples=True)
    print(f"{e.name:10s} min ratio = {scan.min_ratio:.4f}  (usable samples: {scan.samples_used})")
    # every normalized sample also satisfies L(u) >= H(u) = int_P u e^theta:
    worst = min(v.L - v.H for _, v in scan.samples)
    print(f"{'':10s} min (L - H) over samples = {worst:+.3e}  (should be >= 0)")

print("\nThe minimizing function of the last scan:")
print(scan.argmin)
