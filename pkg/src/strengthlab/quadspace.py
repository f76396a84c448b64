"""Ranks in linear spaces of quadratic forms.

minrank / maxrank are computed by walking the projective points of the space
(coefficient vectors whose first non-zero entry is 1), so they are exact but
exponential in the dimension; every walk is budget-capped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .field import Field
from .forms import CubicForm, LQDecomposition, QuadraticForm, assemble, combine_quadrics
from .linalg import DEFAULT_BUDGET, BudgetExceeded


class ConstructionFailed(RuntimeError):
    """The high-minrank construction hit a subspace Q' with codim(Q:Q') + maxrank(Q') < r."""

    def __init__(self, message: str, refuting: "QuadricSubspace", codim: int, maxrank: int, r: int):
        super().__init__(f"{message}: codim {codim} + maxrank {maxrank} < {r}")
        self.refuting = refuting
        self.codim = codim
        self.maxrank = maxrank
        self.r = r


class PreconditionError(ValueError):
    pass


def quadratic_rank(q: QuadraticForm) -> int:
    return q.rank()


@dataclass(frozen=True)
class QuadricSubspace:
    field: Field
    n: int
    basis: tuple[QuadraticForm, ...]

    def __post_init__(self) -> None:
        for q in self.basis:
            if q.n != self.n or q.field != self.field:
                raise ValueError("basis forms must share field and variable count")
        if self.basis and linalg.rank(self.field, self._flat()) != len(self.basis):
            raise ValueError("basis is linearly dependent")

    @classmethod
    def span(cls, field: Field, n: int, forms: Sequence[QuadraticForm]) -> "QuadricSubspace":
        """Keep, in order, each form not already in the span of the kept ones."""
        kept: list[QuadraticForm] = []
        for q in forms:
            if q.is_zero():
                continue
            cand = kept + [q]
            if linalg.rank(field, np.stack([x.flat() for x in cand])) == len(cand):
                kept.append(q)
        return cls(field, n, tuple(kept))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _flat(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.n * (self.n + 1) // 2), dtype=np.int64)
        return np.stack([q.flat() for q in self.basis])

    def element(self, coeffs: Sequence[int]) -> QuadraticForm:
        return combine_quadrics(self.field, self.n, coeffs, self.basis)

    def contains(self, q: QuadraticForm) -> bool:
        if q.is_zero():
            return True
        return linalg.rank(self.field, np.concatenate([self._flat(), q.flat()[None]])) == self.dim

    def contains_subspace(self, other: "QuadricSubspace") -> bool:
        return all(self.contains(q) for q in other.basis)

    def to_json(self) -> list:
        return [[[self.field.to_json(x) for x in row] for row in q.gram] for q in self.basis]

    @classmethod
    def from_json(cls, field: Field, grams) -> "QuadricSubspace":
        forms = [QuadraticForm.from_matrix(field, [[field.from_json(x) for x in row] for row in g])
                 for g in grams]
        n = forms[0].n if forms else 0
        return cls.span(field, n, forms)


def projective_points(field: Field, k: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[int, ...]]:
    """Coefficient vectors of length k with first non-zero entry 1.

    Ordered by the position of that leading 1, then the tail lexicographically.
    """
    total = (field.q**k - 1) // (field.q - 1) if k else 0
    if total > budget:
        raise BudgetExceeded(total, budget, "projective points")
    for lead in range(k):
        for tail in itertools.product(range(field.q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


def _ranked_elements(space: QuadricSubspace, budget: int) -> list[tuple[tuple[int, ...], int]]:
    return [(c, space.element(c).rank()) for c in projective_points(space.field, space.dim, budget)]


def minmax_rank(space: QuadricSubspace, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """(min rank over non-zero elements, max rank over all elements); (0, 0) for Q = 0."""
    if space.dim == 0:
        return 0, 0
    ranks = [r for _, r in _ranked_elements(space, budget)]
    return min(ranks), max(ranks)


def minrank(space: QuadricSubspace, budget: int = DEFAULT_BUDGET) -> int:
    return minmax_rank(space, budget)[0]


def maxrank(space: QuadricSubspace, budget: int = DEFAULT_BUDGET) -> int:
    return minmax_rank(space, budget)[1]


def bounded_rank_combination(qs: Sequence[QuadraticForm], t: int, s: int,
                             budget: int = DEFAULT_BUDGET) -> QuadraticForm:
    """A combination q' of the qs with t <= rank(q') <= t + s - 2.

    Combinations are tried by support size, then support, then coefficients
    (lexicographic, first coefficient normalised to 1).  The first one reaching
    rank t has minimal support, which forces rank <= t + s - 2 when every
    input has rank < s.
    """
    if not qs:
        raise PreconditionError("no forms given")
    fld, n = qs[0].field, qs[0].n
    for q in qs:
        if q.rank() >= s:
            raise PreconditionError(f"input form of rank {q.rank()} >= s = {s}")
    nonzero = range(1, fld.q)
    spent = 0
    for size in range(1, len(qs) + 1):
        for support in itertools.combinations(range(len(qs)), size):
            for tail in itertools.product(nonzero, repeat=size - 1):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(spent, budget, "combinations")
                coeffs = [0] * len(qs)
                for idx, c in zip(support, (1,) + tail):
                    coeffs[idx] = c
                cand = combine_quadrics(fld, n, coeffs, qs)
                rk = cand.rank()
                if rk >= t:
                    if rk > t + s - 2:
                        raise AssertionError(f"minimal-support combination has rank {rk} > {t + s - 2}")
                    return cand
    raise PreconditionError(f"no combination reaches rank {t}")


def lex_minimal_rank_basis(space: QuadricSubspace, budget: int = DEFAULT_BUDGET) -> list[QuadraticForm]:
    """Basis with lexicographically minimal rank profile (greedy by rank, then enumeration order)."""
    if space.dim == 0:
        return []
    ranked = _ranked_elements(space, budget)
    order = sorted(range(len(ranked)), key=lambda i: (ranked[i][1], i))
    chosen: list[tuple[int, ...]] = []
    for i in order:
        c = ranked[i][0]
        cand = chosen + [c]
        if linalg.rank(space.field, np.array(cand, dtype=np.int64)) == len(cand):
            chosen.append(c)
            if len(chosen) == space.dim:
                break
    return [space.element(c) for c in chosen]


def growth_sequence(s: int, k: int) -> list[int]:
    """m_i = (2^i - 1)(s - 1) + 1 for i = 1..k."""
    return [(2**i - 1) * (s - 1) + 1 for i in range(1, k + 1)]


def extract_high_minrank(space: QuadricSubspace, k: int, s: int, r: int,
                         budget: int = DEFAULT_BUDGET) -> QuadricSubspace:
    """A k-dimensional subspace of ``space`` with minrank >= s.

    Requires (2^k - 1)(s - 1) + k <= r.  Assumes codim(Q:Q') + maxrank(Q') >= r
    for every Q' ⊆ Q without checking it; if the construction runs into a
    subspace violating that, :class:`ConstructionFailed` carries it.
    """
    if k < 1 or s < 1:
        raise ValueError("k and s must be positive")
    if (2**k - 1) * (s - 1) + k > r:
        raise PreconditionError(f"(2^{k}-1)({s}-1)+{k} > {r}")
    fld, n, dim = space.field, space.n, space.dim
    if dim < k:
        zero = QuadricSubspace(fld, n, ())
        raise ConstructionFailed("space too small", zero, dim, 0, r)
    basis = lex_minimal_rank_basis(space, budget)
    ranks = [q.rank() for q in basis]
    if ranks[dim - k] >= s:
        result = QuadricSubspace(fld, n, tuple(basis[dim - k:]))
    else:
        ms = growth_sequence(s, k)
        ps: list[QuadraticForm] = []
        for ell, m in enumerate(ms, start=1):
            if sum(mi + s - 2 for mi in ms[:ell - 1]) != m - s:
                raise AssertionError("growth sequence bookkeeping is off")
            width = dim - r + m
            prefix = basis[:max(width, 0)]
            pref_space = QuadricSubspace(fld, n, tuple(prefix))
            try:
                p = bounded_rank_combination(prefix, m, s, budget) if prefix else None
            except PreconditionError:
                p = None
            if p is None:
                mr = maxrank(pref_space, budget)
                raise ConstructionFailed(f"step {ell}: no element of rank >= {m}", pref_space,
                                         dim - pref_space.dim, mr, r)
            ps.append(p)
        result = QuadricSubspace.span(fld, n, ps)
    lo, _ = minmax_rank(result, budget)
    if result.dim != k or lo < s or not space.contains_subspace(result):
        raise AssertionError(f"extraction postcondition failed: dim {result.dim}, minrank {lo}")
    return result


def verify_maxrank_inequality(f: CubicForm, d: LQDecomposition, sub: QuadricSubspace,
                              r: int | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    """codim(Q:Q') + maxrank(Q') >= qrank(f), Q the span of d's quadrics.

    This always holds; False means a bug somewhere upstream.
    """
    if assemble(d) != f:
        raise PreconditionError("decomposition does not assemble to f")
    span = QuadricSubspace.span(f.field, f.n, d.quadrics)
    if not span.contains_subspace(sub):
        raise PreconditionError("Q' is not contained in the span of the quadrics")
    if r is None:
        from .qrank import qrank_oracle
        r = qrank_oracle(f, budget=budget).r
    return span.dim - sub.dim + maxrank(sub, budget) >= r
