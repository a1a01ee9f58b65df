"""Conical soliton data: the vanishing point tau, admissible cone angles,
and the modified log-functional L_{beta,tau}.

For a torus weight theta (not necessarily the soliton), tau is the
e^theta-weighted barycenter of P; the per-facet cone angles are
beta_i = beta * l_i(tau) with l_i(tau) = 1 - <l_i, tau>, admissible up to
beta_bar = 1 / max_i l_i(tau).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BetaOutOfRangeError, TauOutsidePolytopeError
from .functional import L_functional, SymplecticPotential, _chamber_data
from .integrate import region_moments

INTERIOR_MARGIN = 1e-12


@dataclass(frozen=True)
class ConicalData:
    theta: np.ndarray
    tau: np.ndarray
    beta: float
    angles: np.ndarray
    beta_bar: float
    tau_interior: bool

    def to_dict(self):
        return {
            "theta": self.theta.tolist(),
            "tau": self.tau.tolist(),
            "beta": self.beta,
            "angles": self.angles.tolist(),
            "beta_bar": self.beta_bar,
            "tau_interior": self.tau_interior,
        }


def compute_tau(P, theta):
    """Weighted barycenter tau_a = int_P x_a e^theta / int_P e^theta."""
    theta = np.asarray(theta, dtype=float)
    mom = region_moments(P, theta, order=1)
    return mom.i1 / mom.i0


def tau_interior(P, tau, margin=INTERIOR_MARGIN):
    L = np.array(P.normals, dtype=float)
    return bool(np.all(1.0 - L @ np.asarray(tau, dtype=float) >= margin))


def angles_and_beta_bar(P, theta, beta):
    """Cone angles beta_i = beta * l_i(tau) and the bound beta_bar.

    Raises BetaOutOfRangeError when beta exceeds beta_bar beyond 1e-12;
    a tau outside the open polytope is flagged, not fatal here.
    """
    theta = np.asarray(theta, dtype=float)
    if beta <= 0:
        raise BetaOutOfRangeError("beta must be positive")
    tau = compute_tau(P, theta)
    L = np.array(P.normals, dtype=float)
    ltau = 1.0 - L @ tau
    beta_bar = 1.0 / float(ltau.max())
    if beta > beta_bar + 1e-12:
        raise BetaOutOfRangeError(f"beta={beta} exceeds beta_bar={beta_bar}")
    return ConicalData(
        theta=theta,
        tau=tau,
        beta=float(beta),
        angles=float(beta) * ltau,
        beta_bar=beta_bar,
        tau_interior=tau_interior(P, tau),
    )


def L_beta_tau(P, theta, beta, u):
    """L_{beta,tau}(u) = beta (L(u) - int_P <tau, grad u> e^theta dx),
    with grad u piecewise constant over the chambers of u."""
    theta = np.asarray(theta, dtype=float)
    tau = compute_tau(P, theta)
    parts = []
    for af, _, mom, _ in _chamber_data(P, u, theta, order=0)[0]:
        parts.append(float(af @ tau) * mom.i0)
    return float(beta) * (L_functional(P, theta, u) - math.fsum(parts))


def conical_guillemin_potential(P, theta, beta):
    """The conical Guillemin potential u0 = sum beta_i^{-1} l_i log l_i for
    the (beta, tau) determined by theta."""
    data = angles_and_beta_bar(P, theta, beta)
    if not data.tau_interior:
        raise TauOutsidePolytopeError("tau outside the open polytope")
    return SymplecticPotential(P, beta=beta, tau=data.tau)


def conical_k_energy(P, theta, beta, potential=None, rel_tol=1e-7, max_cells=400_000):
    """F_{beta,tau}(u0) = -int_P log det(D^2 u0) e^theta + L_{beta,tau}(u0),
    with the interior form beta <x - tau, grad u0> for the smooth potential."""
    theta = np.asarray(theta, dtype=float)
    data = angles_and_beta_bar(P, theta, beta)
    if potential is None:
        potential = SymplecticPotential(P, beta=beta, tau=data.tau)
    else:
        if potential.kind != "ConicalGuillemin":
            raise ValueError("conical_k_energy needs a ConicalGuillemin potential")
        if abs(potential.beta - beta) > 1e-12 or not np.allclose(potential.tau, data.tau, atol=1e-10):
            raise ValueError("potential was built from a different (beta, tau)")
    tau = data.tau

    # with w_i = 1/(beta l_i(tau)) the log l_i coefficient of
    # -log det + beta <x - tau, grad u0> is exactly l_i / l_i(tau)
    from .functional import _energy_quadrature

    w = potential.weights
    zeros = np.zeros(len(P.normals))
    return _energy_quadrature(P, theta, w, zeros, beta * w, rel_tol, max_cells)
