import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geneo.errors import NotStochastic, ShapeMismatch
from geneo.stochastic import (
    ConvexCombo,
    decompose_stochastic,
    is_row_stochastic,
    reconstruct,
    rect_perm_matrix,
)

MIXED_B = np.array([[1 / 2, 0, 1 / 2], [1 / 3, 1 / 3, 1 / 3]])


def brute_reconstruct(combo, m, n):
    out = np.zeros((m, n))
    for w, rows in combo.terms:
        for i in range(m):
            for j in range(n):
                if rows[i] == j:
                    out[i, j] += w
    return out


@pytest.mark.parametrize(
    "A, expected",
    [
        (np.eye(3), True),
        (MIXED_B, True),
        (np.array([[1, 0], [0.5, 0.6]]), False),
        (np.array([[1.5, -0.5]]), False),
    ],
)
def test_is_row_stochastic(A, expected):
    assert is_row_stochastic(A) is expected


def test_identity_single_term():
    assert decompose_stochastic(np.eye(3)).terms == [(1.0, (0, 1, 2))]


def test_mixed_matrix_round_trip():
    combo = decompose_stochastic(MIXED_B)
    assert abs(combo.weights.sum() - 1) <= 1e-12
    assert np.max(np.abs(reconstruct(combo, 2, 3) - MIXED_B)) <= 1e-12
    assert len(combo) <= 6


def test_mixed_matrix_has_two_combinations():
    # two different combinations reconstruct the same matrix; uniqueness is not expected
    R = lambda j1, j2: rect_perm_matrix((j1 - 1, j2 - 1), 3)  # noqa: E731
    first = (R(1, 1) / 12 + 5 * R(1, 2) / 24 + 5 * R(1, 3) / 24
             + R(3, 1) / 4 + R(3, 2) / 8 + R(3, 3) / 8)
    second = (5 * R(1, 1) / 24 + R(1, 2) / 12 + 5 * R(1, 3) / 24
              + R(3, 1) / 8 + R(3, 2) / 4 + R(3, 3) / 8)
    assert np.allclose(first, MIXED_B, atol=1e-15)
    assert np.allclose(second, MIXED_B, atol=1e-15)


def test_uniform_matrix():
    A = np.full((3, 3), 1 / 3)
    combo = decompose_stochastic(A)
    assert abs(combo.weights.sum() - 1) <= 1e-12
    assert np.allclose(brute_reconstruct(combo, 3, 3), A, atol=1e-12)
    # largest entry first, ties to the smallest column: constant choices
    assert [r for _, r in combo.terms] == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]


def test_rejects_non_stochastic():
    with pytest.raises(NotStochastic):
        decompose_stochastic([[1, 0], [0.5, 0.6]])


def test_tiny_negative_entries_clamped():
    A = np.array([[1.0 + 1e-12, -1e-12], [0.5, 0.5]])
    combo = decompose_stochastic(A)
    assert all(w > 0 for w in combo.weights)
    assert np.allclose(reconstruct(combo, 2, 2), np.clip(A, 0, None), atol=1e-9)


def test_reconstruct_trivial_cases():
    assert np.array_equal(reconstruct(ConvexCombo(), 2, 3), np.zeros((2, 3)))
    assert np.array_equal(reconstruct(ConvexCombo([(1.0, (2, 0))]), 2, 3), rect_perm_matrix((2, 0), 3))
    with pytest.raises(ShapeMismatch):
        reconstruct(ConvexCombo([(1.0, (0, 3))]), 2, 3)


def test_determinism():
    A = np.random.default_rng(1).dirichlet(np.ones(5), size=4)
    assert decompose_stochastic(A.copy()).terms == decompose_stochastic(A.copy()).terms


def test_random_round_trip_200():
    rng = np.random.default_rng(7)
    for _ in range(200):
        m, n = rng.integers(1, 9, size=2)
        A = rng.dirichlet(np.ones(n), size=m)
        combo = decompose_stochastic(A)
        assert np.max(np.abs(reconstruct(combo, m, n) - A)) <= 1e-9
        assert len(combo) <= m * n
        assert np.all(combo.weights > 0)
        assert abs(combo.weights.sum() - 1) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 5), min_size=n, max_size=n).filter(lambda r: sum(r) > 0),
            min_size=1,
            max_size=6,
        )
    )
)
def test_sparse_integer_rows(rows):
    # rows with exact zeros exercise the tie-breaking and early zeroing
    A = np.array(rows, dtype=float)
    A /= A.sum(axis=1, keepdims=True)
    combo = decompose_stochastic(A)
    assert np.max(np.abs(reconstruct(combo, *A.shape) - A)) <= 1e-9
    assert len(combo) <= A.size
