"""Soliton vector field of a reflexive polytope.

theta is the unique minimizer of the strictly convex, coercive
V(theta) = int_P e^{<theta,x>} dx; at the minimum the e^theta-weighted
barycenter of P vanishes, equivalently L(u) = 0 for every linear u.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NoConvergenceError
from .integrate import region_moments

ARMIJO = 1e-4


@dataclass(frozen=True)
class SolitonVector:
    theta: np.ndarray
    residual: float
    iterations: int
    weighted_volume: float

    def __iter__(self):
        return iter(self.theta)


def theta_eval(theta, x):
    """theta(x) = <theta, x>."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if theta.shape != x.shape:
        raise DimensionMismatchError(f"theta has shape {theta.shape}, x has shape {x.shape}")
    return float(theta @ x)


def solve_soliton(P, tol=1e-12, max_iter=100):
    """Damped Newton iteration for the weighted-barycenter equation.

    Gradient and Hessian of V are the first and second exponential moments
    of P; the Hessian is positive definite, so the Newton direction always
    exists.  Residual is the scale-free sup norm ||grad||_inf / V.
    """
    simplices = P.triangulate()
    theta = np.zeros(P.dim)
    mom = region_moments(simplices, theta, order=2)
    value, grad = mom.i0, mom.i1
    res = float(np.max(np.abs(grad))) / value
    for it in range(1, max_iter + 1):
        if res <= tol:
            return SolitonVector(theta=theta, residual=res, iterations=it - 1, weighted_volume=value)
        step = np.linalg.solve(mom.i2, -grad)
        alpha = 1.0
        while True:
            cand = theta + alpha * step
            cm = region_moments(simplices, cand, order=0)
            if cm.i0 <= value + ARMIJO * alpha * float(grad @ step):
                break
            alpha *= 0.5
            if alpha < 1e-12:
                raise NoConvergenceError("line search failed", iterations=it, residual=res)
        theta = theta + alpha * step
        mom = region_moments(simplices, theta, order=2)
        value, grad = mom.i0, mom.i1
        res = float(np.max(np.abs(grad))) / value
    if res <= tol:
        return SolitonVector(theta=theta, residual=res, iterations=max_iter, weighted_volume=value)
    raise NoConvergenceError(
        f"no convergence after {max_iter} iterations (residual {res:.3e})",
        iterations=max_iter,
        residual=res,
    )


def weighted_volume(P, theta):
    """V(theta) = int_P e^{<theta,x>} dx."""
    return region_moments(P.triangulate(), np.asarray(theta, dtype=float), order=0).i0
