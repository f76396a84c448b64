import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from strengthlab import linalg
from strengthlab.field import GF
from strengthlab.forms import CubicForm, LinearForm, LQDecomposition, QuadraticForm, assemble
from strengthlab.linalg import BudgetExceeded
from strengthlab.quadspace import (ConstructionFailed, PreconditionError, QuadricSubspace,
                                   bounded_rank_combination, extract_high_minrank, growth_sequence,
                                   lex_minimal_rank_basis, maxrank, minmax_rank, minrank,
                                   projective_points, quadratic_rank, verify_maxrank_inequality)
from strengthlab.sampling import random_quadric

F5 = GF(5)
seeds = st.integers(0, 2**32 - 1)


def q(d, n):
    return QuadraticForm.from_coeffs(F5, n, d)


def rank_by_radical(g: QuadraticForm) -> int:
    """n minus log_p of the number of vectors in the radical, counted by brute force."""
    n = g.n
    m = np.array(g.gram, dtype=np.int64)
    count = sum(1 for v in itertools.product(range(5), repeat=n) if not (m @ np.array(v) % 5).any())
    return n - round(np.log(count) / np.log(5))


def brute_minmax(space: QuadricSubspace):
    ranks = [rank_by_radical(space.element(c)) for c in itertools.product(range(5), repeat=space.dim)
             if any(c)]
    return min(ranks), max(ranks)


def random_space(rng, n, dim, rank=None):
    return QuadricSubspace.span(F5, n, [random_quadric(F5, n, rng, rank=rank) for _ in range(dim)])


def test_rank_examples():
    assert quadratic_rank(q({(0, 1): 1}, 2)) == 2
    assert quadratic_rank(q({(0, 0): 1, (0, 1): 2, (1, 1): 1}, 2)) == 1   # (x+y)^2
    assert quadratic_rank(QuadraticForm.zero(F5, 3)) == 0


def test_minmax_examples():
    assert minmax_rank(QuadricSubspace.span(F5, 2, [q({(0, 0): 1}, 2), q({(1, 1): 1}, 2)])) == (1, 2)
    assert minmax_rank(QuadricSubspace(F5, 3, ())) == (0, 0)
    hyper = QuadricSubspace.span(F5, 4, [q({(0, 1): 1}, 4), q({(2, 3): 1}, 4)])
    assert minrank(hyper) == 2 and maxrank(hyper) == 4


@settings(max_examples=30)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_minmax_matches_brute_force(seed, n, dim):
    space = random_space(np.random.default_rng(seed), n, dim)
    assume(space.dim > 0)
    assert minmax_rank(space) == brute_minmax(space)


def test_span_is_greedy_and_skips_dependents():
    a, b = q({(0, 0): 1}, 2), q({(1, 1): 1}, 2)
    s = QuadricSubspace.span(F5, 2, [a, QuadraticForm.zero(F5, 2), a, b, a + b])
    assert s.dim == 2 and s.contains(a + b) and not s.contains(q({(0, 1): 1}, 2))
    with pytest.raises(ValueError):
        QuadricSubspace(F5, 2, (a, a))


def test_projective_points():
    pts = list(projective_points(F5, 2))
    assert pts == [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (0, 1)]
    assert list(projective_points(F5, 0)) == []
    with pytest.raises(BudgetExceeded):
        list(projective_points(F5, 4, budget=10))


def test_lex_profile_examples():
    two = QuadricSubspace.span(F5, 4, [q({(0, 1): 1}, 4), q({(2, 3): 1}, 4)])
    assert [g.rank() for g in lex_minimal_rank_basis(two)] == [2, 2]
    # x1^2 + x2^2 and x1^2 span the same space as x1^2 and x2^2
    same = QuadricSubspace.span(F5, 2, [q({(0, 0): 1, (1, 1): 1}, 2), q({(0, 0): 1}, 2)])
    assert [g.rank() for g in lex_minimal_rank_basis(same)] == [1, 1]


@settings(max_examples=30)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_lex_profile_is_minimal(seed, n, dim):
    """Greedy choice is optimal for the matroid: compare against every basis."""
    space = random_space(np.random.default_rng(seed), n, dim)
    assume(space.dim > 0)
    got = [g.rank() for g in lex_minimal_rank_basis(space)]
    elems = [c for c in projective_points(F5, space.dim)]
    best = None
    for combo in itertools.combinations(elems, space.dim):
        if linalg.rank(F5, np.array(combo)) < space.dim:
            continue
        prof = sorted(space.element(c).rank() for c in combo)
        best = prof if best is None or prof < best else best
    assert got == best


def test_bounded_rank_combination_examples():
    qs = [q({(0, 0): 1, (1, 1): 1}, 4), q({(2, 2): 1, (3, 3): 1}, 4), q({(1, 1): 1}, 4)]
    # single forms reach rank 2 at most, so the first hit is x1^2+x2^2 + x3^2+x4^2
    assert bounded_rank_combination(qs, 3, 3).rank() == 4
    assert bounded_rank_combination(qs, 2, 3).rank() == 2
    with pytest.raises(PreconditionError):
        bounded_rank_combination(qs, 5, 3)
    with pytest.raises(PreconditionError):
        bounded_rank_combination(qs, 1, 2)


@settings(max_examples=40)
@given(seeds, st.integers(2, 5), st.integers(1, 4), st.integers(2, 3))
def test_bounded_rank_combination_window(seed, n, count, s):
    rng = np.random.default_rng(seed)
    qs = [random_quadric(F5, n, rng, rank=int(rng.integers(0, s))) for _ in range(count)]
    qs = [g for g in qs if g.rank() < s]
    assume(qs)
    space = QuadricSubspace.span(F5, n, qs)
    top = maxrank(space) if space.dim else 0
    t = int(rng.integers(1, n + 1))
    if t > top:
        with pytest.raises(PreconditionError):
            bounded_rank_combination(qs, t, s)
        return
    got = bounded_rank_combination(qs, t, s)
    assert t <= got.rank() <= t + s - 2
    assert space.contains(got)


def test_growth_sequence():
    assert growth_sequence(3, 3) == [3, 7, 15]
    assert growth_sequence(1, 2) == [1, 1]


def test_extract_examples():
    diag = QuadricSubspace.span(F5, 3, [q({(0, 0): 1}, 3), q({(1, 1): 1}, 3), q({(2, 2): 1}, 3)])
    out = extract_high_minrank(diag, 1, 2, 3)
    assert out.dim == 1 and minrank(out) >= 2 and diag.contains_subspace(out)
    with pytest.raises(PreconditionError):
        extract_high_minrank(diag, 2, 2, 4)
    with pytest.raises(ConstructionFailed) as err:
        extract_high_minrank(QuadricSubspace.span(F5, 3, [q({(0, 0): 1}, 3)]), 2, 1, 3)
    assert err.value.codim == 1


@settings(max_examples=30)
@given(seeds, st.integers(2, 5), st.integers(1, 4))
def test_extract_postcondition_or_refutation(seed, n, dim):
    rng = np.random.default_rng(seed)
    space = random_space(rng, n, dim, rank=int(rng.integers(1, n + 1)))
    k, s = int(rng.integers(1, 3)), int(rng.integers(1, 4))
    r = (2**k - 1) * (s - 1) + k + int(rng.integers(0, 2))
    try:
        out = extract_high_minrank(space, k, s, r)
    except ConstructionFailed as exc:
        ref = exc.refuting
        assert space.contains_subspace(ref)
        assert space.dim - ref.dim + maxrank(ref) < r
        return
    assert out.dim == k and minrank(out) >= s and space.contains_subspace(out)


@settings(max_examples=25)
@given(seeds, st.integers(1, 4), st.integers(1, 3))
def test_maxrank_inequality_always_holds(seed, n, length):
    rng = np.random.default_rng(seed)
    pairs = tuple((LinearForm.of(F5, F5.random(rng, n)), random_quadric(F5, n, rng)) for _ in range(length))
    d = LQDecomposition(F5, n, pairs)
    f = assemble(d)
    full = QuadricSubspace.span(F5, n, d.quadrics)
    keep = [full.element(c) for c in itertools.islice(projective_points(F5, full.dim), int(rng.integers(0, 3)))]
    sub = QuadricSubspace.span(F5, n, keep)
    assert verify_maxrank_inequality(f, d, sub)


def test_verify_maxrank_preconditions():
    d = LQDecomposition(F5, 2, ((LinearForm.variable(F5, 2, 0), q({(1, 1): 1}, 2)),))
    f = assemble(d)
    with pytest.raises(PreconditionError):
        verify_maxrank_inequality(f + CubicForm.from_dict(F5, 2, {(1, 1, 1): 1}), d,
                                  QuadricSubspace(F5, 2, ()))
    with pytest.raises(PreconditionError):
        verify_maxrank_inequality(f, d, QuadricSubspace.span(F5, 2, [q({(0, 0): 1}, 2)]))
    assert verify_maxrank_inequality(f, d, QuadricSubspace(F5, 2, ()), r=1)
