import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slabmoments import errors, realizability
from slabmoments.moment_core import default_quadrature, moments_of_density


def random_atomic(rng, order, n_atoms=None):
    """Moments of a random atomic measure on [-1, 1]."""
    if n_atoms is None:
        n_atoms = rng.integers(1, order + 2)
    atoms = rng.uniform(-1.0, 1.0, n_atoms)
    dens = rng.uniform(0.1, 1.0, n_atoms)
    return realizability.AtomicMeasure(atoms, dens).moments(order)


def random_interior(rng, order):
    quad = default_quadrature(order)
    f = rng.uniform(0.05, 1.0, quad.nodes.size)
    return moments_of_density(f, quad, order)


# --- Hankel construction ---------------------------------------------------

def test_build_hankel_shapes():
    u = np.arange(1.0, 6.0)  # N = 4, k = 2
    hs = realizability.build_hankel(u, 2)
    assert hs.A.shape == (3, 3)
    assert hs.C.shape == (2, 2)
    assert hs.A[0, 2] == u[2] and hs.A[2, 2] == u[4]
    assert hs.C[0, 0] == u[2] and hs.C[1, 1] == u[4]


def test_build_hankel_order_too_low():
    with pytest.raises(errors.OrderTooLow):
        realizability.build_hankel(np.array([1.0, 0.0]), 3)


# --- realizability tests ----------------------------------------------------

def test_rejects_known_nonrealizable():
    assert not realizability.is_realizable(np.array([1.0, 0.5, 0.2]))


def test_accepts_isotropic_all_orders():
    for order in range(0, 9):
        u = np.array([1.0 if j % 2 == 0 else 0.0 for j in range(order + 1)])
        u[2::2] = [1.0 / (j + 1) for j in range(2, order + 1, 2)]
        assert realizability.is_realizable(u)


def test_slack_positive_interior_zero_boundary():
    rng = np.random.default_rng(3)
    u_int = random_interior(rng, 3)
    assert realizability.realizability_slack(u_int) > 0
    # single atom: boundary at every order
    u_bdy = realizability.AtomicMeasure([0.3], [1.0]).moments(3)
    assert abs(realizability.realizability_slack(u_bdy)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6))
def test_atomic_measures_always_realizable(seed, order):
    rng = np.random.default_rng(seed)
    u = random_atomic(rng, order)
    assert realizability.is_realizable(u)


# --- moment bounds -----------------------------------------------------------

def test_bounds_n1_closed_form():
    b = realizability.moment_bounds(np.array([1.0, 0.3]))
    assert b.lower == pytest.approx(0.09, abs=1e-14)
    assert b.upper == pytest.approx(1.0, abs=1e-14)


def test_bounds_n2_closed_form():
    # f_low/f_up for N = 2 have the printed closed form
    u0, u1, u2 = 1.0, 0.3, 0.5
    b = realizability.moment_bounds(np.array([u0, u1, u2]))
    low = -u2 + (u1 + u2) ** 2 / (u0 + u1)
    up = u2 - (u1 - u2) ** 2 / (u0 - u1)
    assert b.lower == pytest.approx(low, abs=1e-13)
    assert b.upper == pytest.approx(up, abs=1e-13)


def test_bounds_order_zero():
    b = realizability.moment_bounds(np.array([2.0]))
    assert (b.lower, b.upper) == (-2.0, 2.0)


def test_bounds_raise_on_nonrealizable():
    with pytest.raises(errors.NotRealizable):
        realizability.moment_bounds(np.array([1.0, 0.5, 0.2]))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 5))
def test_bounds_extension_stays_realizable(seed, order):
    rng = np.random.default_rng(seed)
    u = random_interior(rng, order)
    b = realizability.moment_bounds(u)
    assert b.lower < b.upper
    mid = 0.5 * (b.lower + b.upper)
    assert realizability.is_realizable(np.append(u, mid))
    assert not realizability.is_realizable(
        np.append(u, b.upper + 1e-5 * u[0]))
    assert not realizability.is_realizable(
        np.append(u, b.lower - 1e-5 * u[0]))


# --- atomic reconstruction ---------------------------------------------------

def test_reconstruct_spec_example():
    # upper boundary of N = 2: (1, 0.2, 1) -> atoms +-1
    m = realizability.reconstruct_atomic(np.array([1.0, 0.2, 1.0]))
    assert np.allclose(np.sort(m.atoms), [-1.0, 1.0], atol=1e-9)
    assert np.allclose(np.sort(m.densities), [0.4, 0.6], atol=1e-9)


def test_reconstruct_single_atom():
    u = realizability.AtomicMeasure([0.25], [2.0]).moments(3)
    m = realizability.reconstruct_atomic(u)
    assert np.allclose(m.atoms, [0.25], atol=1e-10)
    assert np.allclose(m.densities, [2.0], atol=1e-10)


def test_reconstruct_round_trip_random_boundary():
    rng = np.random.default_rng(11)
    for _ in range(50):
        order = int(rng.integers(1, 6))
        n_atoms = max(1, (order + 1) // 2)
        u = random_atomic(rng, order, n_atoms)
        m = realizability.reconstruct_atomic(u)
        err = np.max(np.abs(m.moments(order) - u)) / u[0]
        assert err <= 1e-9


def test_reconstruct_interior_fails():
    rng = np.random.default_rng(5)
    u = random_interior(rng, 4)
    with pytest.raises(errors.ReconstructionFailed):
        realizability.reconstruct_atomic(u)


def test_hankel_rank_interior_vs_boundary():
    rng = np.random.default_rng(6)
    hr = realizability.hankel_rank(random_interior(rng, 4))
    assert hr.interior
    hr = realizability.hankel_rank(
        realizability.AtomicMeasure([0.1, -0.6], [1.0, 1.0]).moments(4))
    assert not hr.interior
    assert hr.rank == 2
