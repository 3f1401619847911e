import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relstab import linalg as la

PRIMES = st.sampled_from([2, 3, 5, 7, 97])


@st.composite
def matrices(draw, max_side=6):
    p = draw(PRIMES)
    r = draw(st.integers(1, max_side))
    c = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    return p, la.random_matrix(np.random.default_rng(seed), r, c, p)


def test_field_rejects_non_primes():
    for bad in (1, 4, 9, 101):
        with pytest.raises(la.LinalgError):
            la.Field(bad)
    assert la.Field(97).matrix([[98]])[0, 0] == 1


def test_mul_agrees_with_integer_product():
    rng = np.random.default_rng(0)
    a = la.random_matrix(rng, 40, 300, 97)
    b = la.random_matrix(rng, 300, 30, 97)
    assert np.array_equal(la.mul(a, b, 97), (a @ b) % 97)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(pm):
    p, a = pm
    ker = la.kernel_basis(a, p)
    assert la.rank(a, p) + ker.shape[1] == a.shape[1]
    assert not la.mul(a, ker, p).any()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_solve_finds_preimages(pm):
    p, a = pm
    x0 = la.random_matrix(np.random.default_rng(a.sum()), a.shape[1], 2, p)
    b = la.mul(a, x0, p)
    x = la.solve(a, b, p)
    assert x is not None and np.array_equal(la.mul(a, x, p), b)


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_inverse_round_trip(p, n, seed):
    a = la.random_invertible(np.random.default_rng(seed), n, p)
    assert np.array_equal(la.mul(a, la.inverse(a, p), p), la.identity(n))


def test_singular_inverse_raises():
    with pytest.raises(la.LinalgError):
        la.inverse(np.array([[1, 1], [1, 1]]), 2)


def test_inconsistent_system():
    assert la.solve(np.array([[1, 0], [0, 0]]), np.array([[0], [1]]), 5) is None


def test_rref_pivots_are_unit_columns():
    a = np.array([[2, 4, 1], [1, 2, 4]])
    r, rk, piv = la.rref(a, 5)
    assert rk == 2 and piv == [0, 2]
    assert np.array_equal(r[:, piv], la.identity(2))


def test_echelon_tracks_span():
    ech = la.Echelon(3, 3)
    assert ech.add(np.array([1, 2, 0]))
    assert not ech.add(np.array([2, 1, 0]))
    assert ech.contains(np.array([2, 1, 0]))
    assert not ech.contains(np.array([0, 0, 1]))
    assert len(ech) == 1


def test_complement_columns_fill_the_space():
    basis = np.array([[1], [1], [0]])
    comp = la.complement_columns(basis, 3, 2)
    assert la.rank(np.concatenate([basis, comp], axis=1), 2) == 3


def test_kron_shape_and_entries():
    a = np.array([[1, 2], [0, 1]])
    assert np.array_equal(la.kron(a, a, 3), np.kron(a, a) % 3)


def test_dimension_cap():
    with pytest.raises(la.LinalgError):
        la.as_matrix(np.zeros((1, la.MAX_DIM + 1)), 2)
