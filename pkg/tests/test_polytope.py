import itertools

import numpy as np
import pytest

from geneo.action import SignedMeasure, all_functions
from geneo.errors import NotPermutant, ShapeMismatch, WrongSetting
from geneo.groups import (
    cyclic_group,
    grid_setting,
    identity_homomorphism,
    trivial_group,
    trivial_homomorphism,
)
from geneo.polytope import (
    OrbitBasis,
    check_redundancy_identity,
    is_linear_geneo_hull,
    measure_coefficients,
    orbit_basis,
    weighted_l1,
)
from geneo.representation import GeoProblem, is_geneo, matrix_of_measure, operator_norm_inf

from conftest import R1

BIJECTIONS = list(itertools.permutations(range(3)))
I3, J3 = np.eye(3), np.ones((3, 3))


@pytest.fixture(scope="module")
def bij(s3):
    return orbit_basis(s3, functions=BIJECTIONS)


@pytest.fixture(scope="module")
def full(s3):
    return orbit_basis(s3)


def index_of(basis, h):
    return next(i for i, o in enumerate(basis.orbits) if h in o)


def test_bijection_basis_matrices(bij):
    assert len(bij) == 3
    by_content = sorted(bij.basis_matrices, key=lambda M: M.sum())
    assert np.array_equal(by_content[0], I3)
    assert np.array_equal(by_content[1], J3 - I3)
    assert np.array_equal(by_content[2], J3)
    assert sorted(bij.orbit_sizes) == [1, 2, 3]


def test_basis_order_is_lexicographic(full):
    reps = [o.representative for o in full.orbits]
    assert reps == sorted(reps)
    assert list(full.orbit_sizes) == [3, 6, 6, 1, 3, 6, 2]


def test_basis_matrix_norm_bound(full):
    for o, M in zip(full.orbits, full.basis_matrices):
        assert operator_norm_inf(M) <= len(o)


def test_trivial_group_basis():
    T = trivial_homomorphism(trivial_group(3), trivial_group(2))
    basis = orbit_basis(T)
    assert len(basis) == 3**2
    for o, M in zip(basis.orbits, basis.basis_matrices):
        assert len(o) == 1 and M.sum() == 2 and np.all(M.sum(axis=1) == 1)


def test_single_point_domain():
    T = trivial_homomorphism(trivial_group(1), cyclic_group(4))
    basis = orbit_basis(T)
    assert len(basis) == 1
    assert np.array_equal(basis.basis_matrices[0], np.ones((4, 1)))


def test_measure_coefficients_of_basis_vector(full):
    a = measure_coefficients(full.nu[1], full)
    assert np.array_equal(a, np.eye(len(full))[1])


def test_measure_coefficients_of_averaging_measure(full, rotation_mu):
    a = measure_coefficients(rotation_mu, full)
    expected = np.zeros(len(full))
    expected[index_of(full, (0, 1, 2))] = 1 / 3
    expected[index_of(full, (1, 2, 0))] = 1 / 3
    assert np.allclose(a, expected, atol=0)
    assert np.array_equal(matrix_of_measure(full.combination(a)), matrix_of_measure(rotation_mu))


def test_measure_coefficients_zero(s3, full):
    assert np.array_equal(measure_coefficients(SignedMeasure(s3, {}), full), np.zeros(len(full)))


def test_measure_coefficients_rejects(s3, full, bij):
    with pytest.raises(NotPermutant):
        measure_coefficients(SignedMeasure(s3, {R1: 1.0, (1, 2, 0): 0.5}), full)
    with pytest.raises(ValueError):
        measure_coefficients(SignedMeasure(s3, {(0, 0, 0): 1.0, (1, 1, 1): 1.0, (2, 2, 2): 1.0}), bij)


def test_weighted_l1_examples(full, rotation_mu, reflection_nu):
    assert weighted_l1(np.zeros(len(full)), full) == 0
    assert weighted_l1(measure_coefficients(rotation_mu, full), full) == pytest.approx(1.0)
    assert weighted_l1(measure_coefficients(reflection_nu, full), full) == pytest.approx(1.0)
    with pytest.raises(ShapeMismatch):
        weighted_l1([1.0, 2.0], full)


def test_weighted_l1_is_total_variation(full, rng):
    for _ in range(20):
        a = rng.normal(size=len(full))
        assert weighted_l1(a, full) == pytest.approx(full.combination(a).total_variation())


def test_hull_membership(bij):
    e = np.eye(3)
    sizes = bij.orbit_sizes
    assert is_linear_geneo_hull(e[0] / sizes[0], bij)
    assert not is_linear_geneo_hull(2 * e[0] / sizes[0], bij)
    a = np.zeros(3)
    a[index_of(bij, (0, 1, 2))] = 1 / 3
    a[index_of(bij, (1, 2, 0))] = 1 / 3
    assert weighted_l1(a, bij) == pytest.approx(1.0)
    assert is_linear_geneo_hull(a, bij)


def test_redundancy_identity(bij, full):
    assert check_redundancy_identity(bij)
    assert check_redundancy_identity(full)


def test_redundancy_identity_detects_perturbation(bij):
    mats = [M.copy() for M in bij.basis_matrices]
    mats[index_of(bij, (1, 0, 2))][0, 0] += 1e-6
    perturbed = OrbitBasis(bij.hom, bij.orbits, bij.nu, mats)
    assert not check_redundancy_identity(perturbed)


def test_redundancy_identity_wrong_setting(s3):
    only_identity = orbit_basis(s3, functions=[(0, 1, 2)])
    with pytest.raises(WrongSetting):
        check_redundancy_identity(only_identity)
    with pytest.raises(WrongSetting):
        check_redundancy_identity(orbit_basis(identity_homomorphism(cyclic_group(3))))


@pytest.mark.parametrize(
    "hom",
    [
        identity_homomorphism(cyclic_group(4)),
        grid_setting(2, 2),
        trivial_homomorphism(cyclic_group(3), trivial_group(2)),
    ],
    ids=["C4", "grid2x2", "collapse"],
)
def test_indicators_linearly_independent(hom):
    basis = orbit_basis(hom)
    H = all_functions(hom.source.degree, hom.target.degree)
    assert len(H) <= 1000
    values = np.array([[nu[tuple(h)] for h in H] for nu in basis.nu])
    assert np.linalg.matrix_rank(values) == len(basis)


def test_linearity_of_matrices(full, rng):
    a = rng.normal(size=len(full))
    assert np.allclose(matrix_of_measure(full.combination(a)), full.combination_matrix(a), atol=1e-12)


def test_inside_ball_is_geneo(s3, full, rng):
    for _ in range(30):
        a = rng.normal(size=len(full))
        a *= rng.uniform(0.05, 1.0) / weighted_l1(a, full)
        ok, _ = is_geneo(GeoProblem(s3, full.combination_matrix(a)))
        assert ok


def test_outside_ball_fails_norm_bound_for_nonnegative_coefficients(s3, full, rng):
    # each basis matrix has row sums |O_i|, so for a >= 0 the norm is the weighted l1 value
    for _ in range(30):
        a = rng.uniform(size=len(full))
        a *= (1 + 1e-6 + rng.uniform(0, 1)) / weighted_l1(a, full)
        M = full.combination_matrix(a)
        assert operator_norm_inf(M) == pytest.approx(weighted_l1(a, full))
        ok, _ = is_geneo(GeoProblem(s3, M))
        assert not ok


def test_signed_coefficients_can_cancel(bij):
    # J = I + (J - I): the coefficient ball overstates the norm once signs mix
    a = np.zeros(3)
    a[index_of(bij, (0, 1, 2))] = 1.0
    a[index_of(bij, (1, 2, 0))] = 1.0
    a[index_of(bij, (1, 0, 2))] = -1.0
    assert weighted_l1(a, bij) == 6.0
    assert operator_norm_inf(bij.combination_matrix(a)) == 0.0
