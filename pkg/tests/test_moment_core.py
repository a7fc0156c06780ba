import numpy as np
import pytest

from slabmoments import errors, moment_core


def test_gauss_legendre_integrates_polynomials_exactly():
    quad = moment_core.gauss_legendre(8)
    # exact for degree <= 15
    for j in range(16):
        exact = 2.0 / (j + 1) if j % 2 == 0 else 0.0
        assert quad.integrate(quad.nodes ** j) == pytest.approx(exact, abs=1e-14)


def test_gauss_legendre_weights_positive_and_sum_to_two():
    quad = moment_core.gauss_legendre(40)
    assert np.all(quad.weights > 0)
    assert quad.weights.sum() == pytest.approx(2.0, abs=1e-13)


def test_default_quadrature_node_count():
    assert moment_core.default_quadrature(1).nodes.size == 30
    assert moment_core.default_quadrature(15).nodes.size == 40


def test_normalize_rejects_nonpositive_density():
    with pytest.raises(errors.NonPositiveDensity):
        moment_core.normalize(np.array([0.0, 0.0]))
    with pytest.raises(errors.NonPositiveDensity):
        moment_core.normalize(np.array([-1.0, 0.0]))


def test_normalize_scales_to_unit_density():
    u = np.array([4.0, 1.0, 2.0])
    assert np.allclose(moment_core.normalize(u), [0.25, 0.5])


def test_isotropic_moments():
    u = moment_core.isotropic_moments(4, 3.0)
    assert np.allclose(u, [3.0, 0.0, 1.0, 0.0, 0.6])


def test_moments_of_density_matches_isotropic():
    quad = moment_core.default_quadrature(5)
    f = np.full(quad.nodes.size, 0.5)
    u = moment_core.moments_of_density(f, quad, 5)
    assert np.allclose(u, moment_core.isotropic_moments(5, 1.0), atol=1e-14)


def test_basis_round_trip_low_order():
    rng = np.random.default_rng(0)
    u = rng.uniform(-1, 1, 6)
    uL = moment_core.monomial_to_legendre(u)
    back = moment_core.legendre_to_monomial(uL)
    assert np.allclose(back, u, atol=1e-12)


def test_basis_round_trip_high_order_realizable():
    # realizable vectors stay accurate even at order 100
    quad = moment_core.gauss_legendre(220)
    rng = np.random.default_rng(1)
    f = rng.uniform(0.1, 1.0, quad.nodes.size)
    u = moment_core.moments_of_density(f, quad, 100)
    uL = moment_core.monomial_to_legendre(u)
    back = moment_core.legendre_to_monomial(uL)
    assert np.max(np.abs(back - u)) <= 1e-12


def test_transform_matrix_columns_are_legendre_expansions():
    C = moment_core.monomial_in_legendre_matrix(3)
    # mu^2 = (2 P_2 + 1 P_0)/3, mu^3 = (2 P_3 + 3 P_1)/5
    assert np.allclose(C[2], [1 / 3, 0.0, 2 / 3, 0.0])
    assert np.allclose(C[3], [0.0, 3 / 5, 0.0, 2 / 5])
