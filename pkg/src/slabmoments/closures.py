"""Closure evaluation for the Kershaw K_N, P_N and minimum-entropy M_N models.

Given a realizable moment vector of order N, each closure supplies the
closing moment u_{N+1}, the flux F(u) = (u_1, ..., u_N, u_{N+1}) and the flux
Jacobian with its eigenstructure.  Kershaw and M_N operate on monomial
moments; P_N operates on Legendre-basis moments with truncation closure.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import BoundaryMoment, DegenerateState, NoConvergence
from .moment_core import default_quadrature, isotropic_moments
from .realizability import (
    REALIZABILITY_TOL,
    moment_bounds,
    realizability_slack,
)

__all__ = [
    "ClosureKind",
    "kershaw",
    "pn",
    "mn",
    "FluxJacobianReport",
    "interpolation_constant",
    "kershaw_close",
    "pn_close",
    "pn_flux_matrix",
    "mn_solve_dual",
    "mn_close",
    "flux",
    "jacobian",
    "characteristic_field",
]

#: Moment vectors with realizability slack below this (relative to u_0) are
#: regularized before the dual solve, or rejected with BoundaryMoment.
MN_BOUNDARY_SLACK = 1e-8

#: Blend weight towards the isotropic point used by the regularization.
MN_BLEND = 1e-7

#: Interior slack (relative) required for finite-difference Jacobians.
JACOBIAN_SLACK = 1e-8

#: Central finite-difference step scale for closure gradients.
FD_STEP = 1e-6


@dataclass(frozen=True)
class ClosureKind:
    """A closure family ("kershaw", "pn" or "mn") at moment order N >= 1."""

    family: str
    order: int

    def __post_init__(self):
        if self.family not in ("kershaw", "pn", "mn"):
            raise ValueError(f"unknown closure family {self.family!r}")
        if self.order < 1:
            raise ValueError("closure order must be at least 1")


def kershaw(order):
    return ClosureKind("kershaw", order)


def pn(order):
    return ClosureKind("pn", order)


def mn(order):
    return ClosureKind("mn", order)


@dataclass(frozen=True)
class FluxJacobianReport:
    """Flux Jacobian with eigenvalues (ascending) and eigenvector columns."""

    jacobian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


# ---------------------------------------------------------------------------
# Kershaw
# ---------------------------------------------------------------------------

def interpolation_constant(order):
    """Convex-combination weight beta of the K_N closure.

    ``(k+2)/(2k+3)`` for odd N = 2k+1 and 1/2 for even N; chosen so the
    closure interpolates the isotropic point.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if order % 2 == 1:
        k = (order - 1) // 2
        return (k + 2.0) / (2.0 * k + 3.0)
    return 0.5


def kershaw_close(phi, tol=REALIZABILITY_TOL):
    """Normalized closing moment phi_{N+1} of the K_N closure.

    Reference path: evaluates the realizable-extension bounds of the
    normalized vector (1, phi_1, ..., phi_N) and interpolates.
    """
    phi = np.asarray(phi, dtype=float)
    u = np.concatenate(([1.0], phi))
    bounds = moment_bounds(u, tol=tol)
    beta = interpolation_constant(phi.size)
    return beta * bounds.lower + (1.0 - beta) * bounds.upper


def _kershaw_next_batch(U):
    """Closing moments for rows of U: compiled kernels for N <= 4, generic above."""
    U = np.asarray(U, dtype=float)
    order = U.shape[1] - 1
    if order <= 4:
        return kernels.kershaw_next(U)
    return np.array(
        [row[0] * kershaw_close(row[1:] / row[0], tol=1e-3) for row in U]
    )


def _kershaw_gradient(u):
    """Last Jacobian row grad_u u_{N+1} of the K_N closure at ``u``."""
    u = np.asarray(u, dtype=float)
    order = u.size - 1
    phi = u[1:] / u[0]
    if order == 1:
        p1 = phi[0]
        return np.array([(1.0 - 2.0 * p1 * p1) / 3.0, 4.0 * p1 / 3.0])
    if order == 2:
        p1, p2 = phi
        g0 = 2.0 * p1 * (p2 - 1.0) * (p2 - p1 * p1) / (p1 * p1 - 1.0) ** 2
        g1 = (1.0 - (p2 - 1.0) ** 2 / (2.0 * (p1 + 1.0) ** 2)
              - (p2 - 1.0) ** 2 / (2.0 * (p1 - 1.0) ** 2))
        g2 = 2.0 * p1 * (p2 - 1.0) / (p1 * p1 - 1.0)
        return np.array([g0, g1, g2])
    return _fd_gradient_batch(u[None, :], _kershaw_next_batch)[0]


def _fd_gradient_batch(U, closing_batch):
    """Central-difference gradients of a batched closing-moment function."""
    U = np.asarray(U, dtype=float)
    m, n = U.shape
    h = FD_STEP * np.maximum(U[:, 0], 1.0)
    grad = np.empty((m, n))
    for j in range(n):
        up = U.copy()
        dn = U.copy()
        up[:, j] += h
        dn[:, j] -= h
        grad[:, j] = (closing_batch(up) - closing_batch(dn)) / (2.0 * h)
    return grad


# ---------------------------------------------------------------------------
# P_N (Legendre basis, truncation closure)
# ---------------------------------------------------------------------------

def pn_close(u_leg):
    """Truncation closure: the (N+1)th Legendre moment is zero."""
    return 0.0


@lru_cache(maxsize=None)
def pn_flux_matrix(order):
    """Advection matrix of the P_N system from mu P_j recurrence.

    ``F_j = ((j+1) u_{j+1} + j u_{j-1}) / (2j+1)`` with ``u_{N+1} = 0``.
    """
    n = order + 1
    A = np.zeros((n, n))
    for j in range(n):
        if j + 1 < n:
            A[j, j + 1] = (j + 1.0) / (2.0 * j + 1.0)
        if j >= 1:
            A[j, j - 1] = j / (2.0 * j + 1.0)
    return A


# ---------------------------------------------------------------------------
# M_N (Maxwell-Boltzmann minimum entropy)
# ---------------------------------------------------------------------------

def _dual_newton_batch(U, alpha0, quadrature, tol, max_iter):
    """Damped Newton on the strictly convex dual, vectorized over rows.

    Minimizes ``<exp(b^T alpha)> - u^T alpha`` per row with Armijo
    backtracking (c = 1e-4, halving).  Returns (alpha, iterations, traces);
    rows that fail to converge keep iterations == max_iter.
    """
    U = np.asarray(U, dtype=float)
    m, n = U.shape
    P = np.vander(quadrature.nodes, n, increasing=True)  # (Q, n)
    W = quadrature.weights
    alpha = np.array(alpha0, dtype=float, copy=True)

    def obj_grad(a, u):
        with np.errstate(over="ignore"):
            we = np.exp(a @ P.T) * W
        f = we.sum(axis=1) - np.einsum("mi,mi->m", u, a)
        return f, we

    f, we = obj_grad(alpha, U)
    iters = np.zeros(m, dtype=int)
    gnorms = []
    for it in range(max_iter):
        with np.errstate(over="ignore", invalid="ignore"):
            mom = we @ P
        grad = mom - U
        gnorm = np.linalg.norm(grad, axis=1)
        gnorms.append(gnorm)
        # non-finite rows (overflowed warm starts) are unconverged, not done
        active = ~np.isfinite(gnorm) | (gnorm > tol * U[:, 0])
        if not np.any(active):
            break
        iters[active] = it + 1
        with np.errstate(over="ignore", invalid="ignore"):
            hess = np.einsum("mq,qi,qj->mij", we[active], P, P)
            try:
                step = np.linalg.solve(hess, -grad[active][..., None])[..., 0]
            except np.linalg.LinAlgError as exc:
                raise NoConvergence("singular dual Hessian",
                                    trace=gnorms) from exc
            slope = np.einsum("mi,mi->m", grad[active], step)
        t = np.ones(active.sum())
        # inside the quadratic basin the objective decrease falls below
        # eps * |f|, so the line search cannot discriminate; take the full
        # Newton step there instead
        pending = ~np.isfinite(gnorm[active]) \
            | (gnorm[active] > 1e-6 * U[active, 0])
        alpha_act = alpha[active]
        f_act = f[active]
        new_alpha = alpha_act + step
        U_act = U[active]
        for _ in range(60):
            trial = alpha_act[pending] + t[pending, None] * step[pending]
            f_trial, _ = obj_grad(trial, U_act[pending])
            # the round-off allowance keeps near-converged rows from
            # stalling when the predicted decrease is below eps * |f|
            ok = f_trial <= (f_act[pending]
                             + 1e-4 * t[pending] * slope[pending]
                             + 4e-16 * np.abs(f_act[pending]))
            # any finite value beats an overflowed start
            ok |= ~np.isfinite(f_act[pending]) & np.isfinite(f_trial)
            idx = np.flatnonzero(pending)
            new_alpha[idx[ok]] = trial[ok]
            pending[idx[ok]] = False
            t[pending] *= 0.5
            if not np.any(pending):
                break
        else:
            raise NoConvergence("Armijo backtracking stalled", trace=gnorms)
        alpha[active] = new_alpha
        f, we = obj_grad(alpha, U)
    else:
        mom = we @ P
        gnorm = np.linalg.norm(mom - U, axis=1)
        gnorms.append(gnorm)
        if np.any(~np.isfinite(gnorm) | (gnorm > tol * U[:, 0])):
            raise NoConvergence(
                f"dual Newton did not converge within {max_iter} iterations",
                trace=gnorms,
            )
    return alpha, iters, gnorms


def _mn_regularize(U, require_interior):
    """Blend rows too close to the realizability boundary towards isotropic.

    With ``require_interior`` the offending rows raise BoundaryMoment instead.
    """
    U = np.asarray(U, dtype=float)
    slack = realizability_slack(U)
    bad = slack < MN_BOUNDARY_SLACK * U[:, 0]
    if not np.any(bad):
        return U
    if require_interior:
        raise BoundaryMoment(
            f"realizability slack {slack.min():.3e} is within the "
            f"boundary-regularization distance"
        )
    iso = U[:, :1] * isotropic_moments(U.shape[1] - 1, 1.0)
    out = U.copy()
    out[bad] = (1.0 - MN_BLEND) * U[bad] + MN_BLEND * iso[bad]
    return out


def _mn_isotropic_start(U):
    alpha = np.zeros_like(U)
    alpha[:, 0] = np.log(U[:, 0] / 2.0)
    return alpha


def mn_solve_dual(u, tol=1e-9, max_iter=50, alpha0=None, regularize=False):
    """Lagrange multipliers alpha of the Maxwell-Boltzmann dual problem.

    The returned alpha satisfies ``|<b exp(b^T alpha)> - u| <= tol * u_0``.
    Vectors within the boundary-regularization distance raise BoundaryMoment
    unless ``regularize`` is set, in which case they are blended with the
    isotropic point first.
    """
    u = np.asarray(u, dtype=float)
    U = _mn_regularize(u[None, :], require_interior=not regularize)
    quadrature = default_quadrature(u.size - 1)
    if alpha0 is None:
        start = _mn_isotropic_start(U)
    else:
        start = np.asarray(alpha0, dtype=float)[None, :]
    alpha, _, _ = _dual_newton_batch(U, start, quadrature, tol, max_iter)
    return alpha[0]


def mn_close(u, alpha):
    """Closing moment ``<mu^{N+1} exp(b^T alpha)>`` by quadrature."""
    u = np.asarray(u, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    quadrature = default_quadrature(u.size - 1)
    P = np.vander(quadrature.nodes, u.size, increasing=True)
    psi = np.exp(P @ alpha)
    return float(np.sum(quadrature.weights * quadrature.nodes ** u.size * psi))


def mn_closing_batch(U, alpha0=None, tol=1e-9, max_iter=200, quadrature=None):
    """Closing moments and multipliers for many cells at once (regularized).

    The multiplier array doubles as a warm-start cache: pass the previous
    step's result back in.
    """
    U = _mn_regularize(U, require_interior=False)
    m, n = U.shape
    if quadrature is None:
        quadrature = default_quadrature(n - 1)
    if alpha0 is None:
        alpha0 = _mn_isotropic_start(U)
    else:
        # warm starts whose density is orders of magnitude off (e.g. a cell
        # that just left vacuum) make worse Newton starts than isotropic
        alpha0 = np.array(alpha0, dtype=float, copy=True)
        P = np.vander(quadrature.nodes, n, increasing=True)
        with np.errstate(over="ignore"):
            m0 = (np.exp(alpha0 @ P.T) * quadrature.weights).sum(axis=1)
        with np.errstate(invalid="ignore"):
            stale = ~np.isfinite(m0) | (m0 > 50.0 * U[:, 0]) \
                | (m0 < U[:, 0] / 50.0)
        if np.any(stale):
            alpha0[stale] = _mn_isotropic_start(U[stale])
    try:
        alpha, _, _ = _dual_newton_batch(U, alpha0, quadrature, tol, max_iter)
    except NoConvergence:
        # a warm start can pass the density check yet still be a poor
        # start (huge multipliers cached from a sharper state); cold restart
        alpha, _, _ = _dual_newton_batch(
            U, _mn_isotropic_start(U), quadrature, tol, max_iter)
    P = np.vander(quadrature.nodes, n, increasing=True)
    psi = np.exp(alpha @ P.T)
    closing = psi @ (quadrature.weights * quadrature.nodes ** n)
    return closing, alpha


def _mn_gradient(u):
    """FD gradient of the M_N closing moment, warm-started from the center."""
    u = np.asarray(u, dtype=float)
    alpha = mn_solve_dual(u, regularize=True)

    def closing_batch(U):
        vals, _ = mn_closing_batch(U, alpha0=np.tile(alpha, (U.shape[0], 1)))
        return vals

    return _fd_gradient_batch(u[None, :], closing_batch)[0]


# ---------------------------------------------------------------------------
# Flux, Jacobian, characteristic fields
# ---------------------------------------------------------------------------

def flux(kind, u):
    """Kinetic flux F(u) = <mu b psi(u)> of the closed system."""
    u = np.asarray(u, dtype=float)
    if kind.family == "pn":
        return pn_flux_matrix(kind.order) @ u
    if kind.family == "kershaw":
        closing = u[0] * kershaw_close(u[1:] / u[0])
    else:
        alpha = mn_solve_dual(u, regularize=True)
        closing = mn_close(u, alpha)
    return np.concatenate((u[1:], [closing]))


def _check_interior(u, gate=JACOBIAN_SLACK):
    slack = realizability_slack(u)
    scale = 1.0 + np.max(np.abs(u))
    if slack < gate * scale:
        raise DegenerateState(
            f"state within {gate:g} of the realizability boundary "
            f"(slack {slack:.3e}); eigenstructure may be discontinuous"
        )


def _closure_jacobian_matrix(u, grad):
    n = u.size
    jac = np.zeros((n, n))
    jac[np.arange(n - 1), np.arange(1, n)] = 1.0
    jac[-1] = grad
    return jac


def _sorted_real_eigenvalues(jac):
    evals = np.linalg.eigvals(jac)
    if np.any(np.abs(evals.imag) > 1e-9):
        raise DegenerateState(f"complex flux eigenvalues {evals}")
    return np.sort(evals.real)


def _k2_boundary_eigenvalues(u):
    """Analytic K_2 eigenvalues on the realizability boundary, else None.

    On either boundary the Jacobian has an exactly-zero eigenvalue and the
    remaining quadratic's discriminant factors as 4(1-w)(1+w) with
    w = (1-phi_2)/(1-phi_1^2), which evaluates without the sqrt(eps)
    cancellation a generic eigensolver suffers at the double root.
    """
    phi1 = u[1] / u[0]
    phi2 = u[2] / u[0]
    lower_gap = phi2 - phi1 ** 2
    upper_gap = 1.0 - phi2
    # only fire essentially on the boundary: off it the double root truly
    # splits by O(sqrt(gap)) and the generic solver resolves that better
    if min(lower_gap, upper_gap) > 1e-13:
        return None
    w = upper_gap / (1.0 - phi1 ** 2)
    disc = (lower_gap / (1.0 - phi1 ** 2)) * (1.0 + w)
    root = np.sqrt(max(disc, 0.0))
    return np.sort([0.0, phi1 * w - root, phi1 * w + root])


def jacobian(kind, u):
    """Flux Jacobian, eigenvalues and (Vandermonde) eigenvectors at ``u``.

    The last row is analytic for K_1/K_2 and central finite differences for
    K_N with N >= 3 and for M_N.  K_2 raises DegenerateState near the corner
    |phi_1| = 1 where its eigenvalues are discontinuous; finite-difference
    kinds require a strictly interior state.
    """
    u = np.asarray(u, dtype=float)
    if kind.family == "pn":
        jac = pn_flux_matrix(kind.order)
        evals, evecs = np.linalg.eig(jac)
        order = np.argsort(evals.real)
        return FluxJacobianReport(jac, evals.real[order], evecs.real[:, order])
    if kind.family == "kershaw":
        if kind.order == 2 and abs(u[1] / u[0]) >= 1.0 - 1e-8:
            raise DegenerateState(
                "K_2 eigenvalues are discontinuous at |phi_1| = 1"
            )
        if kind.order >= 3:
            _check_interior(u)
        grad = _kershaw_gradient(u)
        if kind.order == 2:
            evals = _k2_boundary_eigenvalues(u)
            if evals is not None:
                jac = _closure_jacobian_matrix(u, grad)
                evecs = np.vander(evals, u.size, increasing=True).T
                return FluxJacobianReport(jac, evals, evecs)
    else:
        _check_interior(u)
        grad = _mn_gradient(u)
    jac = _closure_jacobian_matrix(u, grad)
    evals = _sorted_real_eigenvalues(jac)
    evecs = np.vander(evals, u.size, increasing=True).T
    return FluxJacobianReport(jac, evals, evecs)


def characteristic_field(kind, u, i):
    """Directional derivative v_i . grad_u lambda_i of the i-th eigenvalue.

    Finite differences along the (Vandermonde) eigenvector, with eigenvalues
    matched by proximity to the unperturbed lambda_i.
    """
    u = np.asarray(u, dtype=float)
    report = jacobian(kind, u)
    lam = report.eigenvalues[i]
    v = lam ** np.arange(u.size)
    h = FD_STEP * max(u[0], 1.0)
    lam_pm = []
    for sign in (1.0, -1.0):
        evals = jacobian(kind, u + sign * h * v).eigenvalues
        lam_pm.append(evals[np.argmin(np.abs(evals - lam))])
    return (lam_pm[0] - lam_pm[1]) / (2.0 * h)


def jacobian_eigenvalues_batch(kind, U):
    """Eigenvalues of the flux Jacobian for many monomial states at once.

    Returns (eigenvalues (m, N+1) sorted ascending, max |imaginary part|).
    Kershaw gradients use the closed-form kernels; M_N uses warm-started
    finite differences.
    """
    U = np.asarray(U, dtype=float)
    m, n = U.shape
    if kind.family == "kershaw":
        if kind.order == 1:
            phi1 = U[:, 1] / U[:, 0]
            grads = np.column_stack(
                [(1.0 - 2.0 * phi1 ** 2) / 3.0, 4.0 * phi1 / 3.0]
            )
        elif kind.order == 2:
            grads = np.array([_kershaw_gradient(u) for u in U])
        else:
            grads = _fd_gradient_batch(U, _kershaw_next_batch)
    elif kind.family == "mn":
        _, alpha = mn_closing_batch(U)

        def closing_batch(V):
            vals, _ = mn_closing_batch(V, alpha0=alpha)
            return vals

        grads = _fd_gradient_batch(U, closing_batch)
    else:
        raise ValueError("batched eigenvalues support monomial closures only")
    jacs = np.zeros((m, n, n))
    jacs[:, np.arange(n - 1), np.arange(1, n)] = 1.0
    jacs[:, -1, :] = grads
    evals = np.linalg.eigvals(jacs)
    max_imag = float(np.max(np.abs(evals.imag)))
    return np.sort(evals.real, axis=1), max_imag
