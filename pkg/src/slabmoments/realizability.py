"""Algebra of the truncated Hausdorff moment problem on [-1, 1].

Hankel matrices, realizability predicates, the sharp bounds on the next
moment, and reconstruction of minimal atomic representing measures.  All
functions accept moment vectors against the monomial basis.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotRealizable, OrderTooLow, ReconstructionFailed

__all__ = [
    "HankelSet",
    "AtomicMeasure",
    "MomentBounds",
    "HankelRank",
    "build_hankel",
    "realizability_slack",
    "is_realizable",
    "moment_bounds",
    "hankel_rank",
    "reconstruct_atomic",
]

#: Default relative singularity tolerance for Hankel matrices.
SING_TOL = 1e-10

#: Default relative eigenvalue slack for the realizability test.
REALIZABILITY_TOL = 1e-10


@dataclass(frozen=True)
class HankelSet:
    """Hankel matrices A(k), B(k), C(k) built from a moment vector.

    ``B`` is None when the source vector is too short to populate it.
    """

    A: np.ndarray
    B: np.ndarray | None
    C: np.ndarray
    k: int


@dataclass(frozen=True)
class MomentBounds:
    """Sharp interval [lower, upper] of realizable extensions u_{N+1}."""

    lower: float
    upper: float


@dataclass(frozen=True)
class HankelRank:
    """Hankel rank r; ``interior`` flags vectors with no singular A(r)."""

    rank: int
    interior: bool


class AtomicMeasure:
    """Finite combination of Dirac deltas ``sum_i rho_i delta(mu - mu_i)``.

    Atoms are kept strictly increasing; densities are strictly positive.
    """

    def __init__(self, atoms, densities):
        atoms = np.asarray(atoms, dtype=float)
        densities = np.asarray(densities, dtype=float)
        order = np.argsort(atoms)
        self.atoms = atoms[order]
        self.densities = densities[order]

    def moments(self, order):
        """Exact moments ``u_j = sum_i rho_i mu_i**j`` for j = 0..order."""
        powers = np.vander(self.atoms, order + 1, increasing=True)
        return powers.T @ self.densities

    def __len__(self):
        return self.atoms.size


def _hankel(u, offsets):
    """Stack ``u[..., i+j+off]`` matrices for a grid i, j = 0..m-1."""
    return u[..., offsets]


def _index_grid(m, shift=0):
    i = np.arange(m)
    return i[:, None] + i[None, :] + shift


def build_hankel(u, k):
    """Hankel matrices A(k), B(k), C(k) populated from the entries of ``u``.

    ``B(k)`` needs moments up to order 2k+1 and is set to None when ``u`` is
    one entry short of that; ``A`` and ``C`` require order 2k.
    """
    u = np.asarray(u, dtype=float)
    n_max = u.size - 1
    if 2 * k > n_max:
        raise OrderTooLow(f"A({k}) needs u_{2 * k}, but the vector ends at u_{n_max}")
    A = u[_index_grid(k + 1)]
    B = u[_index_grid(k + 1, shift=1)] if 2 * k + 1 <= n_max else None
    if k >= 1:
        C = u[_index_grid(k, shift=2)]
    else:
        C = np.zeros((0, 0))
    return HankelSet(A=A, B=B, C=C, k=k)


def _condition_matrices(u):
    """PSD condition matrices characterizing realizability of ``u``.

    Vectorized over leading axes of ``u``; returns a list of (..., m, m)
    arrays.  For N = 2k+1 these are A(k) -+ B(k); for N = 2k they are A(k)
    and A(k-1) - C(k).
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[-1] - 1
    if n == 0:
        return [u[..., 0:1, None]]
    if n % 2 == 1:
        k = (n - 1) // 2
        A = u[..., _index_grid(k + 1)]
        B = u[..., _index_grid(k + 1, shift=1)]
        return [A - B, A + B]
    k = n // 2
    mats = [u[..., _index_grid(k + 1)]]
    # A(k-1) - C(k): entries u_{i+j} - u_{i+j+2}, i, j = 0..k-1
    mats.append(u[..., _index_grid(k)] - u[..., _index_grid(k, shift=2)])
    return mats


def realizability_slack(u):
    """Minimal eigenvalue over all realizability condition matrices.

    Non-negative slack means the vector is realizable.  Vectorized over
    leading axes of ``u``.
    """
    mats = _condition_matrices(u)
    slacks = [np.linalg.eigvalsh(m)[..., 0] for m in mats]
    return np.min(slacks, axis=0)


def is_realizable(u, tol=REALIZABILITY_TOL):
    """Whether ``u`` has a non-negative representing density on [-1, 1].

    Positive semidefiniteness is accepted with eigenvalue slack down to
    ``-tol * (1 + largest moment magnitude)``.  Vectorized over leading axes.
    """
    u = np.asarray(u, dtype=float)
    scale = 1.0 + np.max(np.abs(u), axis=-1)
    return realizability_slack(u) >= -tol * scale


def _psd_quadform(mat, vec, sing_tol=SING_TOL):
    """``vec^T mat^+ vec`` via eigendecomposition with a spectral cutoff.

    Implements the pseudoinverse semantics of the bound formulas: solve
    ``mat w = vec`` within the numerically non-null eigenspace and evaluate
    ``w^T mat w`` there.
    """
    if vec.size == 0:
        return 0.0
    evals, evecs = np.linalg.eigh(mat)
    cutoff = sing_tol * max(np.trace(mat), 0.0)
    proj = evecs.T @ vec
    keep = evals > cutoff
    if not np.any(keep):
        return 0.0
    return float(np.sum(proj[keep] ** 2 / evals[keep]))


def moment_bounds(u, tol=REALIZABILITY_TOL, sing_tol=SING_TOL):
    """Sharp bounds [f_low, f_up] on the next moment u_{N+1} extending ``u``.

    The quadratic forms are evaluated by solving the (possibly singular)
    symmetric systems rather than forming explicit pseudoinverses.
    """
    u = np.asarray(u, dtype=float)
    if not is_realizable(u, tol=tol):
        raise NotRealizable(f"moment vector {u} is not realizable within tol {tol}")
    n = u.size - 1
    if n == 0:
        return MomentBounds(lower=-u[0], upper=u[0])
    if n % 2 == 1:
        # N = 2k+1: the extension closes the even-order conditions of N+1.
        k = (n - 1) // 2
        b_plus = u[k + 1 : n + 1]
        f_low = _psd_quadform(u[_index_grid(k + 1)], b_plus, sing_tol)
        if k == 0:
            # Convention: the subtracted quadratic form vanishes for N = 1.
            f_up = u[0]
        else:
            b_minus = u[k : n - 1] - u[k + 2 : n + 1]
            mat = u[_index_grid(k)] - u[_index_grid(k, shift=2)]
            f_up = u[n - 1] - _psd_quadform(mat, b_minus, sing_tol)
    else:
        # N = 2k: the extension closes the odd-order conditions A(k) -+ B(k).
        k = n // 2
        A = u[_index_grid(k)]
        B = u[_index_grid(k, shift=1)]
        b_minus = u[k:n] - u[k + 1 : n + 1]
        b_plus = u[k:n] + u[k + 1 : n + 1]
        f_up = u[n] - _psd_quadform(A - B, b_minus, sing_tol)
        f_low = -u[n] + _psd_quadform(A + B, b_plus, sing_tol)
    return MomentBounds(lower=float(f_low), upper=float(f_up))


def hankel_rank(u, sing_tol=SING_TOL):
    """Smallest r with A(r) numerically singular.

    A matrix counts as singular when its smallest eigenvalue falls below
    ``sing_tol * trace``.  If no A(r) with 2r <= N is singular the vector is
    interior (or determinate) and rank floor(N/2) + 1 is reported with the
    ``interior`` flag set.
    """
    u = np.asarray(u, dtype=float)
    n = u.size - 1
    for r in range(n // 2 + 1):
        A = u[_index_grid(r + 1)]
        if np.linalg.eigvalsh(A)[0] < sing_tol * np.trace(A):
            return HankelRank(rank=r, interior=False)
    return HankelRank(rank=n // 2 + 1, interior=True)


def _atoms_and_densities(u, r):
    """Generating-polynomial roots and Vandermonde densities for rank r."""
    try:
        gamma = np.linalg.solve(u[_index_grid(r)], u[r : 2 * r])
    except np.linalg.LinAlgError as exc:
        raise ReconstructionFailed(f"singular A({r - 1}) below rank {r}") from exc
    # g(mu) = mu^r - sum gamma_i mu^i; np.roots wants descending coefficients.
    coeffs = np.concatenate(([1.0], -gamma[::-1]))
    roots = np.roots(coeffs)
    if np.any(np.abs(roots.imag) > 1e-9):
        raise ReconstructionFailed(f"complex atoms {roots} for rank {r}")
    atoms = roots.real
    if np.any(np.abs(atoms) > 1.0 + 1e-9):
        raise ReconstructionFailed(f"atoms {atoms} leave [-1, 1]")
    atoms = np.clip(atoms, -1.0, 1.0)
    vander = np.vander(atoms, r, increasing=True).T
    try:
        densities = np.linalg.solve(vander, u[:r])
    except np.linalg.LinAlgError as exc:
        raise ReconstructionFailed(f"coincident atoms {atoms}") from exc
    if np.any(densities < -1e-12 * u[0]):
        raise ReconstructionFailed(f"negative densities {densities}")
    keep = densities > 0.0
    return atoms[keep], densities[keep]


def reconstruct_atomic(u, sing_tol=SING_TOL):
    """Minimal atomic representing measure of a boundary or determinate vector.

    Covers three cases: a singular Hankel matrix A(r) (boundary detected by
    the rank test), odd order N = 2r-1 with A(r-1) nonsingular (determinate),
    and even-order vectors whose extension interval [f_low, f_up] collapses
    (upper even-order boundary), which are first extended by the unique next
    moment.
    """
    u = np.asarray(u, dtype=float)
    n = u.size - 1
    rank = hankel_rank(u, sing_tol=sing_tol)
    if not rank.interior:
        r = rank.rank
        if r == 0:
            if np.any(np.abs(u) > sing_tol * max(u[0], 1.0)):
                raise ReconstructionFailed("rank 0 with non-zero moments")
            return AtomicMeasure(np.empty(0), np.empty(0))
        if 2 * r - 1 > n:
            raise ReconstructionFailed(
                f"rank {r} needs u_{2 * r - 1}, but the vector ends at u_{n}"
            )
    elif n % 2 == 1:
        r = (n + 1) // 2
    else:
        bounds = moment_bounds(u, sing_tol=sing_tol)
        gap_tol = sing_tol * (1.0 + np.max(np.abs(u)))
        if bounds.upper - bounds.lower > gap_tol:
            raise ReconstructionFailed(
                "even-order vector is strictly interior; its minimal "
                "representing measure is not unique"
            )
        u = np.append(u, 0.5 * (bounds.lower + bounds.upper))
        r = n // 2 + 1
    atoms, densities = _atoms_and_densities(u, r)
    return AtomicMeasure(atoms, densities)
