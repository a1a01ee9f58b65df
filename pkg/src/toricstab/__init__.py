"""toricstab: soliton vector fields, modified Futaki invariants, and
equivariant Riemann-Roch lattice checks for toric Fano polytopes.

A reflexive lattice polytope P = {x : <x, l_i> <= 1} stands in for the
toric Fano manifold; every invariant here is an integral or lattice sum
over P.  See the README and demos/ for worked examples.
"""

from . import errors
from .catalog_io import (
    CatalogEntry,
    catalog,
    catalog_lookup,
    dump_pl,
    dump_polytope,
    load_pl,
    load_polytope,
    write_report,
)
from .conical import (
    ConicalData,
    L_beta_tau,
    angles_and_beta_bar,
    compute_tau,
    conical_guillemin_potential,
    conical_k_energy,
)
from .functional import (
    H_functional,
    L_functional,
    PLConvexFunction,
    StabilityScan,
    SymplecticPotential,
    divergence_identity_gap,
    futaki_F0,
    futaki_F1,
    guillemin_potential,
    k_energy,
    normalize_at,
    normalize_at_origin,
    stability_margin,
)
from .integrate import (
    IntegralSpec,
    QuadratureReport,
    adaptive_integrate,
    boundary_integral,
    exp_integral_simplex,
    poly_exp_integral,
    region_moments,
)
from .lattice import (
    Nk,
    PhiSpec,
    RRReport,
    phi_sum_check,
    riemann_roch_check,
    weighted_sums,
)
from .polytope import (
    Chamber,
    ChamberDecomposition,
    Facet,
    Polytope,
    Simplex,
    build,
    refine_by_pl,
    simplex_from_points,
)
from .soliton import SolitonVector, solve_soliton, theta_eval, weighted_volume

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry",
    "Chamber",
    "ChamberDecomposition",
    "ConicalData",
    "Facet",
    "H_functional",
    "IntegralSpec",
    "L_beta_tau",
    "L_functional",
    "Nk",
    "PLConvexFunction",
    "PhiSpec",
    "Polytope",
    "QuadratureReport",
    "RRReport",
    "Simplex",
    "SolitonVector",
    "StabilityScan",
    "SymplecticPotential",
    "adaptive_integrate",
    "angles_and_beta_bar",
    "boundary_integral",
    "build",
    "catalog",
    "catalog_lookup",
    "compute_tau",
    "conical_guillemin_potential",
    "conical_k_energy",
    "divergence_identity_gap",
    "dump_pl",
    "dump_polytope",
    "errors",
    "exp_integral_simplex",
    "futaki_F0",
    "futaki_F1",
    "guillemin_potential",
    "k_energy",
    "load_pl",
    "load_polytope",
    "normalize_at",
    "normalize_at_origin",
    "phi_sum_check",
    "poly_exp_integral",
    "refine_by_pl",
    "region_moments",
    "riemann_roch_check",
    "simplex_from_points",
    "solve_soliton",
    "stability_margin",
    "theta_eval",
    "weighted_sums",
    "weighted_volume",
    "write_report",
]
