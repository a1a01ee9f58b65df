# Reflexive polytopes from facet normals: vertices, measures, dilations.
#
# Every toric Fano manifold corresponds to a reflexive lattice polytope
# P = {x : <x, l_i> <= 1}.  This script walks through the built-in catalog
# and the basic geometry every later computation rests on.

from toricstab import build, catalog, refine_by_pl, PLConvexFunction

print("== the built-in catalog ==")
for e in catalog():
    P = e.polytope
    print(f"{e.name:10s} dim={P.dim} facets={len(P.normals)} "
          f"|P|={P.volume():8.4f} |dP|={P.boundary_measure():8.4f} "
          f"soliton=0 by symmetry: {e.soliton_zero_by_symmetry}")

# The weighted boundary measure dsigma = dsigma_0 / ||l_i|| satisfies
# |dP| = n |P| exactly for reflexive polytopes; the printout above shows it.

print("\n== building a polytope by hand ==")
bl1 = build([[1, 0], [0, 1], [-1, -1], [1, 1]], require_reflexive=True, label="Bl1CP2")
print("vertices:", bl1.vertices)
print("volume  :", bl1.volume_exact(), " (exact rational)")
print("triangulation:", [s.vertices for s in bl1.triangulate()])

print("\n== lattice points of dilations kP ==")
for k in range(1, 6):
    pts = bl1.lattice_points(k)
    print(f"k={k}: N_k = {len(pts)}  (Ehrhart: 4k^2 + 4k + 1 = {4*k*k + 4*k + 1})")

print("\n== chambers of a piecewise linear function ==")
u = PLConvexFunction.max_with_zero([1, 0])          # u = max(0, x1)
dec = refine_by_pl(bl1, u)
for ch in dec:
    print(f"piece {ch.piece_index}: volume {ch.volume_exact()}, vertices {ch.vertices}")
