"""Pure-numpy Kershaw closure kernels (fallback backend).

Closed-form K_N closing moments for N = 1..4, vectorized over cells.  The
formulas are the pre-derived convex combinations ``beta * f_low + (1 - beta)
* f_up`` of the sharp realizable extension bounds; near-singular 2x2 systems
are stabilized with a tiny Tikhonov shift, matching the pseudoinverse
semantics of the generic bounds path.
"""

import numpy as np

BACKEND = "python"

# Relative Tikhonov shift for (near-)singular boundary systems.
_EPS = 1e-14


def _quadform2(m00, m01, m11, b0, b1):
    """b^T M^{-1} b for symmetric 2x2 M, Tikhonov-shifted by _EPS * trace."""
    shift = _EPS * (np.abs(m00) + np.abs(m11) + 1.0)
    a = m00 + shift
    d = m11 + shift
    det = a * d - m01 * m01
    return (d * b0 * b0 - 2.0 * m01 * b0 * b1 + a * b1 * b1) / det


def _next1(phi):
    p1 = phi[:, 0]
    return (2.0 * p1 * p1 + 1.0) / 3.0


def _next2(phi):
    p1, p2 = phi[:, 0], phi[:, 1]
    den = p1 * p1 - 1.0
    # On |phi_1| = 1 the measure is a single atom at phi_1: phi_3 = phi_1 * phi_2.
    safe = np.abs(den) > _EPS
    out = np.where(safe, p1 * (p1 * p1 + p2 * p2 - 2.0 * p2) / np.where(safe, den, 1.0),
                   p1 * p2)
    return out


def _next3(phi):
    p1, p2, p3 = phi[:, 0], phi[:, 1], phi[:, 2]
    up_den = (1.0 - p2) + _EPS * (1.0 + np.abs(1.0 - p2))
    f_up = p2 - (p1 - p3) ** 2 / up_den
    f_low = _quadform2(np.ones_like(p1), p1, p2, p2, p3)
    return 0.6 * f_low + 0.4 * f_up


def _next4(phi):
    p1, p2, p3, p4 = phi[:, 0], phi[:, 1], phi[:, 2], phi[:, 3]
    f_up = p4 - _quadform2(1.0 - p1, p1 - p2, p2 - p3, p2 - p3, p3 - p4)
    f_low = -p4 + _quadform2(1.0 + p1, p1 + p2, p2 + p3, p2 + p3, p3 + p4)
    return 0.5 * (f_low + f_up)


_DISPATCH = {1: _next1, 2: _next2, 3: _next3, 4: _next4}


def kershaw_next(U):
    """Closing moments u_{N+1} for each row of the (n_cells, N+1) array U."""
    U = np.ascontiguousarray(U, dtype=float)
    order = U.shape[1] - 1
    try:
        fn = _DISPATCH[order]
    except KeyError:
        raise ValueError(f"no closed-form Kershaw kernel for order {order}") from None
    u0 = U[:, 0]
    phi = U[:, 1:] / u0[:, None]
    return u0 * fn(phi)
