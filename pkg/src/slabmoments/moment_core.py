"""Moment-vector and basis arithmetic on the interval [-1, 1].

Moment vectors are plain 1D float arrays ``u = (u_0, ..., u_N)`` holding the
moments of an angular density against the monomial basis ``mu**j`` (or, for
the P_N model, against Legendre polynomials).  The order ``N`` is implicit in
the length.  All operations here are pure functions.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import solve_triangular

from .errors import NonPositiveDensity

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "default_quadrature",
    "normalize",
    "isotropic_moments",
    "moments_of_density",
    "monomial_in_legendre_matrix",
    "legendre_to_monomial",
    "monomial_to_legendre",
]


class QuadratureRule:
    """Nodes/weights pair on [-1, 1].

    Parameters
    ----------
    nodes, weights : array_like
        Quadrature nodes in [-1, 1] and positive weights summing to 2.
    degree : int
        Highest polynomial degree integrated exactly.
    """

    def __init__(self, nodes, weights, degree):
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.degree = int(degree)

    def integrate(self, values):
        """Integrate a function sampled at the nodes (trailing axis)."""
        return np.asarray(values, dtype=float) @ self.weights

    def __len__(self):
        return self.nodes.size


@lru_cache(maxsize=None)
def gauss_legendre(n_nodes):
    """Gauss-Legendre rule with ``n_nodes`` points (exact to degree 2n-1)."""
    nodes, weights = leggauss(n_nodes)
    return QuadratureRule(nodes, weights, 2 * n_nodes - 1)


def default_quadrature(order):
    """Rule used for integrals of smooth ansatz densities of moment order N."""
    return gauss_legendre(max(30, 2 * order + 10))


def normalize(u):
    """Normalized moments ``phi_j = u_j / u_0`` for j = 1..N.

    Raises
    ------
    NonPositiveDensity
        If ``u_0 <= 0``.
    """
    u = np.asarray(u, dtype=float)
    if u[0] <= 0.0:
        raise NonPositiveDensity(f"u_0 = {u[0]} is not positive")
    return u[1:] / u[0]


def isotropic_moments(order, density):
    """Moments of the angle-independent density ``psi = density / 2``.

    ``u_j = density / (j + 1)`` for even j and 0 for odd j; ``u_0 = density``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if density <= 0.0:
        raise NonPositiveDensity(f"density = {density} is not positive")
    j = np.arange(order + 1)
    u = np.where(j % 2 == 0, density / (j + 1.0), 0.0)
    return u


def moments_of_density(f_values, quadrature, order):
    """Monomial moments ``u_j = sum_i w_i mu_i**j f(mu_i)`` for j = 0..order."""
    if order > quadrature.degree:
        raise ValueError(
            f"order {order} exceeds quadrature design degree {quadrature.degree}"
        )
    f_values = np.asarray(f_values, dtype=float)
    powers = np.vander(quadrature.nodes, order + 1, increasing=True)
    return powers.T @ (quadrature.weights * f_values)


@lru_cache(maxsize=None)
def monomial_in_legendre_matrix(order):
    """Lower-triangular C with ``mu**i = sum_j C[i, j] P_j(mu)``.

    Built from ``mu P_j = ((j+1) P_{j+1} + j P_{j-1}) / (2j+1)``; all entries
    are non-negative, so the expansion is numerically benign.
    """
    C = np.zeros((order + 1, order + 1))
    C[0, 0] = 1.0
    for i in range(order):
        for j in range(i + 1):
            c = C[i, j]
            if c == 0.0:
                continue
            C[i + 1, j + 1] += c * (j + 1.0) / (2.0 * j + 1.0)
            if j > 0:
                C[i + 1, j - 1] += c * j / (2.0 * j + 1.0)
    return C


def legendre_to_monomial(u_leg):
    """Map Legendre-basis moments ``<P_j psi>`` to monomial moments ``<mu^j psi>``."""
    u_leg = np.asarray(u_leg, dtype=float)
    C = monomial_in_legendre_matrix(u_leg.size - 1)
    return C @ u_leg


def monomial_to_legendre(u):
    """Inverse of :func:`legendre_to_monomial` (triangular solve)."""
    u = np.asarray(u, dtype=float)
    C = monomial_in_legendre_matrix(u.size - 1)
    return solve_triangular(C, u, lower=True)
