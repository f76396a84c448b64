import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strengthlab import linalg
from strengthlab.field import GF
from strengthlab.linalg import (BudgetExceeded, Subspace, complete_basis, enumerate_subspaces,
                                gaussian_binomial, kernel, rref)

F5 = GF(5)


def row_space(field, m):
    """All vectors in the row space of m, by enumerating every combination."""
    m = np.asarray(m, dtype=np.int64)
    out = set()
    for coeffs in itertools.product(range(field.q), repeat=m.shape[0]):
        v = field.matmul(np.array([coeffs], dtype=np.int64), m)[0] if m.shape[0] else np.zeros(m.shape[1])
        out.add(tuple(int(x) for x in v))
    return out


matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_examples():
    red, piv = rref(F5, [[2, 4], [1, 2]])
    assert red.tolist() == [[1, 2], [0, 0]] and piv == (0,)
    red, _ = rref(F5, np.eye(3, dtype=int))
    assert np.array_equal(red, np.eye(3))
    red, piv = rref(F5, np.zeros((2, 3), dtype=int))
    assert not red.any() and piv == ()


@given(matrices)
def test_rref_preserves_row_space(m):
    red, piv = rref(F5, m)
    assert row_space(F5, red) == row_space(F5, m)
    assert len(row_space(F5, m)) == 5 ** len(piv)
    # reduced: pivot columns are unit vectors
    for i, c in enumerate(piv):
        assert red[i, c] == 1 and np.count_nonzero(red[:, c]) == 1


@given(matrices)
def test_kernel_by_brute_force(m):
    m = np.array(m, dtype=np.int64)
    k = kernel(F5, m)
    brute = {v for v in itertools.product(range(5), repeat=m.shape[1])
             if not F5.matmul(m, np.array(v).reshape(-1, 1)).any()}
    assert row_space(F5, k.matrix) == brute
    assert k.dim == m.shape[1] - linalg.rank(F5, m)


def test_kernel_examples():
    assert kernel(F5, np.eye(3, dtype=int)).dim == 0
    k = kernel(F5, [[1, 0, 0]])
    assert k.basis == ((0, 1, 0), (0, 0, 1))
    k = kernel(F5, [[1, 1, 1], [0, 1, 2]])
    assert k.dim == 1
    v = np.array(k.basis[0])
    assert not F5.matmul(np.array([[1, 1, 1], [0, 1, 2]]), v.reshape(-1, 1)).any()


def test_gaussian_binomial_examples():
    assert gaussian_binomial(7, 0, 5) == 1
    assert gaussian_binomial(3, 1, 5) == 31
    assert gaussian_binomial(4, 2, 2) == 35


@pytest.mark.parametrize("n", range(0, 6))
@pytest.mark.parametrize("q", [2, 5])
def test_enumeration_count_matches_gaussian_binomial(n, q):
    for r in range(n + 1):
        if gaussian_binomial(n, n - r, q) > 20000:
            continue
        count = sum(1 for _ in enumerate_subspaces(F5, n, r, q=q))
        assert count == gaussian_binomial(n, n - r, q)


def test_enumeration_examples():
    assert [w.basis for w in enumerate_subspaces(F5, 2, 0)] == [((1, 0), (0, 1))]
    assert sum(1 for _ in enumerate_subspaces(F5, 3, 1)) == 31
    assert sum(1 for _ in enumerate_subspaces(F5, 4, 2, q=2)) == 35


def test_enumeration_canonical_and_distinct_and_complete():
    seen = set()
    for w in enumerate_subspaces(F5, 3, 1):
        assert w.is_canonical()
        seen.add(w)
    assert len(seen) == 31
    # every 2-dim subspace arises: span of random pairs lands in the set
    rng = np.random.default_rng(1)
    for _ in range(100):
        m = rng.integers(0, 5, (2, 3))
        if linalg.rank(F5, m) == 2:
            assert Subspace.span(F5, 3, m) in seen


def test_enumeration_order_is_pivot_lexicographic():
    pivots = [w.pivots for w in enumerate_subspaces(F5, 3, 1)]
    assert pivots == sorted(pivots)
    first = next(iter(enumerate_subspaces(F5, 3, 1)))
    assert first.basis == ((1, 0, 0), (0, 1, 0))


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        enumerate_subspaces(F5, 6, 3, budget=100)


def test_complete_basis_examples():
    whole = Subspace.whole(F5, 3)
    assert np.array_equal(complete_basis(whole), np.eye(3))
    w = Subspace.span(F5, 3, [[0, 1, 0], [0, 0, 1]])
    assert complete_basis(w)[0].tolist() == [1, 0, 0]
    w = Subspace.span(F5, 3, [[1, 2, 0]])
    c = complete_basis(w)
    assert c.tolist() == [[0, 1, 0], [0, 0, 1], [1, 2, 0]]
    assert linalg.is_invertible(F5, c)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_complete_basis_property(seed, n):
    rng = np.random.default_rng(seed)
    w = linalg.random_subspace(F5, n, int(rng.integers(0, n + 1)), rng)
    c = complete_basis(w)
    assert linalg.is_invertible(F5, c)
    assert Subspace.span(F5, n, c[w.codim:]) == w


def test_inverse_and_solve():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = linalg.random_invertible(F5, 4, rng)
        inv = linalg.inverse(F5, m)
        assert np.array_equal(F5.matmul(m, inv), np.eye(4))
        b = rng.integers(0, 5, 4)
        x = linalg.solve(F5, m, b)
        assert np.array_equal(F5.matmul(m, x.reshape(-1, 1))[:, 0], b)
    with pytest.raises(linalg.SingularMatrix):
        linalg.inverse(F5, [[1, 2], [2, 4]])
    assert linalg.solve(F5, [[1, 2], [2, 4]], [1, 0]) is None


def test_subspace_ops():
    a = Subspace.span(F5, 3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace.span(F5, 3, [[0, 1, 0], [0, 0, 1]])
    assert a.intersect(b) == Subspace.span(F5, 3, [[0, 1, 0]])
    assert a.contains([1, 1, 0]) and not a.contains([0, 0, 1])
    assert Subspace.whole(F5, 3).contains_subspace(a)
    assert Subspace.from_json(F5, 3, a.to_json()) == a


def test_extension_field_linear_algebra():
    F = GF(5, 2)
    rng = np.random.default_rng(5)
    m = linalg.random_invertible(F, 3, rng)
    assert np.array_equal(F.matmul(m, linalg.inverse(F, m)), np.eye(3))
