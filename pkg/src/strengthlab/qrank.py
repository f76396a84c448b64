"""The q-rank of a cubic form over the working finite field.

Two independent routes:

* :func:`qrank_oracle` searches for the lowest codimension r admitting a
  subspace W with f|_W = 0 (vanishing-subspace characterisation).
* :func:`qrank_linear_solve_oracle` searches for the smallest r such that
  f = Σ ℓ_i q_i is solvable for quadrics q_i given a span of r linear forms.

Both report q-rank over GF(q) itself, never over its algebraic closure.

Vanishing-subspace search
-------------------------
Subspaces of dimension k = n - r are visited as RREF bases: pivot sets in
lexicographic order, then free entries row-major (first entry most
significant).  The scan is a depth-first search over rows: with S the
symmetric trilinear form of f, f vanishes on span(u_1..u_j) iff
S(u_a, u_b, u_c) = 0 for all a ≤ b ≤ c, so a new row v must satisfy the
linear conditions S(u_a, u_b, v) = 0, the quadratic S(u_a, v, v) = 0 and the
cubic f(v) = 0.  Any prefix of an RREF basis with a fixed pivot set is itself
such a basis, so pruning on prefixes is exact and the first leaf reached is
the first vanishing subspace in enumeration order.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .field import Field
from .forms import CubicForm, LinearForm, LQDecomposition, QuadraticForm, monomials
from .linalg import DEFAULT_BUDGET, BudgetExceeded, Subspace

CHUNK = 1 << 15


@dataclass
class QRankResult:
    """Outcome of a q-rank search.

    ``exact`` is False when the search stopped at ``max_r``; then ``r`` is the
    lower bound max_r + 1 and there is no witness.
    """

    r: int
    field: Field
    witness: Subspace | None = None
    decomposition: LQDecomposition | None = None
    exact: bool = True
    enumeration_count: int = 0
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        return str(self.r) if self.exact else f">={self.r}"


class _PivotSearch:
    """Depth-first search for a vanishing subspace with one fixed pivot set."""

    def __init__(self, f: CubicForm, tensor: np.ndarray, pivots: Sequence[int], budget: int):
        self.f = f
        self.field = f.field
        self.n = f.n
        self.tensor = tensor
        self.pivots = tuple(pivots)
        self.frees = linalg.free_columns(pivots, f.n)
        self.budget = budget
        self.count = 0

    def _contract(self, u: np.ndarray) -> np.ndarray:
        # S(u, ., .) as an n×n matrix
        n = self.n
        return self.field.matmul(u.reshape(1, n), self.tensor.reshape(n, n * n)).reshape(n, n)

    def _candidates(self, depth: int, start: int, stop: int) -> np.ndarray:
        q = self.field.q
        cols = self.frees[depth]
        idx = np.arange(start, stop, dtype=np.int64)
        v = np.zeros((stop - start, self.n), dtype=np.int64)
        v[:, self.pivots[depth]] = 1
        for pos, c in enumerate(cols):
            v[:, c] = (idx // q ** (len(cols) - 1 - pos)) % q
        return v

    def _filter(self, v: np.ndarray, lin: list[np.ndarray], quad: list[np.ndarray]) -> np.ndarray:
        fld = self.field
        if lin:
            vals = fld.matmul(v, np.stack(lin, axis=1))
            v = v[~vals.any(axis=1)]
        for m in quad:
            if not len(v):
                return v
            vals = fld.sum(fld.mul(fld.matmul(v, m), v), axis=1)
            v = v[vals == 0]
        if len(v):
            v = v[self.f.evaluate_many(v) == 0]
        return v

    def run(self) -> list[np.ndarray] | None:
        return self._dfs(0, [], [], [])

    def _dfs(self, depth, rows, lin, quad):
        if depth == len(self.pivots):
            return rows
        total = self.field.q ** len(self.frees[depth])
        for start in range(0, total, CHUNK):
            stop = min(total, start + CHUNK)
            self.count += stop - start
            if self.count > self.budget:
                raise BudgetExceeded(self.count, self.budget, "search candidates")
            for v in self._filter(self._candidates(depth, start, stop), lin, quad):
                mv = self._contract(v)
                new_lin = lin + [self.field.matmul(mv, u.reshape(-1, 1))[:, 0] for u in rows] + [
                    self.field.matmul(mv, v.reshape(-1, 1))[:, 0]]
                found = self._dfs(depth + 1, rows + [v], new_lin, quad + [mv])
                if found is not None:
                    return found
        return None


def find_vanishing_subspace(f: CubicForm, codim: int, budget: int = DEFAULT_BUDGET,
                            threads: int = 1) -> tuple[Subspace | None, int]:
    """First codim-``codim`` subspace W (enumeration order) with f|_W = 0, and the work count.

    With ``threads > 1`` pivot sets are scanned concurrently; the answer and
    the count are reconciled to exactly what the sequential scan reports.
    """
    n = f.n
    fld = f.field
    if not 0 <= codim <= n:
        raise ValueError(f"codimension {codim} out of range for n={n}")
    k = n - codim
    if k == 0:
        return Subspace.zero(fld, n), 0
    if codim == 0:
        return (Subspace.whole(fld, n) if f.is_zero() else None), 1
    tensor = f.polar_tensor()
    piv_list = list(linalg.pivot_sets(n, k))

    def task(piv):
        s = _PivotSearch(f, tensor, piv, budget)
        try:
            rows = s.run()
        except BudgetExceeded:
            return None, s.count, True
        return rows, s.count, False

    spent = 0
    if threads <= 1:
        for piv in piv_list:
            s = _PivotSearch(f, tensor, piv, budget - spent)
            try:
                rows = s.run()
            except BudgetExceeded:
                raise BudgetExceeded(spent + s.count, budget, "search candidates") from None
            spent += s.count
            if rows is not None:
                return Subspace(fld, n, tuple(tuple(int(x) for x in r) for r in rows)), spent
        return None, spent

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(task, piv_list))
    for rows, count, over in results:
        spent += count
        if over or spent > budget:
            raise BudgetExceeded(spent, budget, "search candidates")
        if rows is not None:
            return Subspace(fld, n, tuple(tuple(int(x) for x in r) for r in rows)), spent
    return None, spent


def qrank_oracle(f: CubicForm, max_r: int | None = None, budget: int = DEFAULT_BUDGET,
                 threads: int = 1) -> QRankResult:
    """Smallest r with a codim-r subspace on which f vanishes, plus the first such subspace."""
    t0 = time.perf_counter()
    spent = 0
    for r in range(f.n + 1):
        if max_r is not None and r > max_r:
            return QRankResult(max_r + 1, f.field, exact=False, enumeration_count=spent,
                               elapsed=time.perf_counter() - t0)
        try:
            w, count = find_vanishing_subspace(f, r, budget - spent, threads)
        except BudgetExceeded as exc:
            raise BudgetExceeded(spent + exc.needed, budget, "search candidates") from None
        spent += count
        if w is not None:
            return QRankResult(r, f.field, witness=w, enumeration_count=spent,
                               elapsed=time.perf_counter() - t0)
    raise AssertionError("the zero subspace always works")  # pragma: no cover


def qrank(f: CubicForm, **kw) -> int:
    res = qrank_oracle(f, **kw)
    return res.r


# ----------------------------------------------------------------------
# Linear-solve oracle
# ----------------------------------------------------------------------

def _product_system(field: Field, n: int, linears: np.ndarray) -> np.ndarray:
    """Matrix of (q_1..q_r) ↦ Σ ℓ_i q_i in monomial coordinates."""
    cubic_index = {m: i for i, m in enumerate(monomials(n, 3))}
    quad = monomials(n, 2)
    r = linears.shape[0]
    a = np.zeros((len(cubic_index), r * len(quad)), dtype=np.int64)
    for i in range(r):
        for c in range(n):
            coef = int(linears[i, c])
            if not coef:
                continue
            for t, (x, y) in enumerate(quad):
                a[cubic_index[tuple(sorted((c, x, y)))], i * len(quad) + t] = coef
    return a


def qrank_linear_solve_oracle(f: CubicForm, max_r: int | None = None,
                              budget: int = DEFAULT_BUDGET) -> QRankResult:
    """Smallest r such that some r-dimensional span of linear forms divides f.

    Spans are enumerated as RREF bases (this identifies tuples up to scalars
    and change of basis); each is tested by exact linear solvability of
    f = Σ ℓ_i q_i in the quadric coefficients.
    """
    t0 = time.perf_counter()
    fld, n = f.field, f.n
    if f.is_zero():
        return QRankResult(0, fld, witness=Subspace.whole(fld, n),
                           decomposition=LQDecomposition(fld, n, ()), enumeration_count=1)
    cubics = monomials(n, 3)
    quad = monomials(n, 2)
    rhs = np.array([f.coeffs.get(m, 0) for m in cubics], dtype=np.int64)
    spent = 1
    for r in range(1, n + 1):
        if max_r is not None and r > max_r:
            return QRankResult(max_r + 1, fld, exact=False, enumeration_count=spent,
                               elapsed=time.perf_counter() - t0)
        needed = linalg.gaussian_binomial(n, r, fld.q)
        if spent + needed > budget:
            raise BudgetExceeded(spent + needed, budget, "linear-form spans")
        for span in linalg.enumerate_subspaces(fld, n, n - r, budget=budget):
            spent += 1
            ls = span.matrix
            sol = linalg.solve(fld, _product_system(fld, n, ls), rhs)
            if sol is None:
                continue
            pairs = []
            for i in range(r):
                chunk = sol[i * len(quad):(i + 1) * len(quad)]
                q = QuadraticForm.from_coeffs(fld, n, {m: int(c) for m, c in zip(quad, chunk) if c})
                pairs.append((LinearForm.of(fld, ls[i]), q))
            w = linalg.kernel(fld, ls)
            return QRankResult(r, fld, witness=w, decomposition=LQDecomposition(fld, n, tuple(pairs)),
                               enumeration_count=spent, elapsed=time.perf_counter() - t0)
    raise AssertionError("r = n always succeeds")  # pragma: no cover


# ----------------------------------------------------------------------
# Decomposition from a vanishing subspace
# ----------------------------------------------------------------------

class PreconditionError(ValueError):
    pass


def decompose_via_subspace(f: CubicForm, w: Subspace) -> LQDecomposition:
    """f = Σ_{i<codim w} ℓ_i q_i with the ℓ_i cutting out w.

    Coordinates y = D x are chosen so that w = {y_0 = ... = y_{r-1} = 0}; every
    monomial of f in the y's then contains one of y_0..y_{r-1}, and each
    monomial is charged to its smallest such variable.
    """
    fld, n = f.field, f.n
    if w.ambient_dim != n:
        raise ValueError("subspace and form live in different spaces")
    r = w.codim
    c = linalg.complete_basis(w)
    g = f.pullback(c.T.copy())            # g(y) = f(Cᵀ y)
    d = linalg.inverse(fld, c.T.copy())   # y = D x
    buckets: list[dict[tuple[int, int], int]] = [dict() for _ in range(r)]
    for mono, coef in g.terms:
        i = mono[0]
        if i >= r:
            raise PreconditionError("f does not vanish on the given subspace")
        buckets[i][(mono[1], mono[2])] = coef
    pairs = []
    for i in range(r):
        qy = QuadraticForm.from_coeffs(fld, n, buckets[i])
        pairs.append((LinearForm.of(fld, d[i]), qy.pullback(d)))
    return LQDecomposition(fld, n, tuple(pairs))
