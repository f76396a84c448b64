"""Dense linear algebra over a :class:`~strengthlab.field.Field` and Grassmannian enumeration.

Matrices are 2-D ``int64`` numpy arrays of encoded field elements; the field is
passed alongside.  Subspaces are canonicalised by the reduced row echelon form
of a spanning set, so two :class:`Subspace` values are equal iff their basis
matrices are identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .field import Field

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its resource cap.  Distinct from "no witness"."""

    def __init__(self, needed: int, budget: int, what: str = "candidate subspaces"):
        super().__init__(f"{what}: {needed} exceeds budget {budget}")
        self.needed = needed
        self.budget = budget


class SingularMatrix(ValueError):
    pass


def rref(field: Field, m) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.  Zero rows are kept at the bottom."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = field.mul(a[r], field.inv(lead))
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = field.sub(a[i], field.mul(a[r], int(a[i, c])))
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


def rank(field: Field, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(rref(field, m)[1])


def is_invertible(field: Field, m) -> bool:
    m = np.asarray(m, dtype=np.int64)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and rank(field, m) == m.shape[0]


def inverse(field: Field, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise SingularMatrix("inverse of a non-square matrix")
    aug = np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1)
    red, piv = rref(field, aug)
    if piv[:n] != tuple(range(n)):
        raise SingularMatrix("matrix is singular")
    return red[:, n:].copy()


def matmul(field: Field, a, b) -> np.ndarray:
    return field.matmul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))


def solve(field: Field, a, b) -> np.ndarray | None:
    """One solution x of a·x = b, or None if the system is inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    rows, cols = a.shape
    red, piv = rref(field, np.concatenate([a, b], axis=1))
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, cols]
    return x


@dataclass(frozen=True)
class Subspace:
    """Subspace of field^ambient_dim spanned by the rows of ``basis`` (RREF, no zero rows)."""

    field: Field
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, field: Field, n: int, rows) -> "Subspace":
        m = np.asarray(rows, dtype=np.int64).reshape(-1, n) if len(rows) else np.zeros((0, n), np.int64)
        if m.shape[0] == 0:
            return cls(field, n, ())
        red, piv = rref(field, m)
        return cls(field, n, tuple(tuple(int(x) for x in red[i]) for i in range(len(piv))))

    @classmethod
    def whole(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def matrix(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.basis, dtype=np.int64)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def is_canonical(self) -> bool:
        if not self.basis:
            return True
        red, piv = rref(self.field, self.matrix)
        return len(piv) == self.dim and np.array_equal(red, self.matrix)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return rank(self.field, np.concatenate([self.matrix, v])) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return rank(self.field, np.concatenate([self.matrix, other.matrix])) == self.dim

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via kernels of the annihilators."""
        return kernel(self.field, np.concatenate([annihilator(self), annihilator(other)]))

    def to_json(self) -> list:
        return [[self.field.to_json(x) for x in row] for row in self.basis]

    @classmethod
    def from_json(cls, field: Field, n: int, rows) -> "Subspace":
        return cls.span(field, n, [[field.from_json(x) for x in row] for row in rows])


def kernel(field: Field, m) -> Subspace:
    """{v : m·v = 0} in canonical form."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if rows == 0:
        return Subspace.whole(field, cols)
    red, piv = rref(field, m)
    free = [c for c in range(cols) if c not in piv]
    vecs = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = field.neg(int(red[i, f]))
        vecs.append(v)
    return Subspace.span(field, cols, vecs)


def annihilator(w: Subspace) -> np.ndarray:
    """Rows spanning the linear forms vanishing on w (a matrix whose kernel is w)."""
    return kernel(w.field, w.matrix).matrix if w.dim else np.eye(w.ambient_dim, dtype=np.int64)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if q < 2:
        raise ValueError("q must be >= 2")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def pivot_sets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of range(n) in lexicographic order."""
    return itertools.combinations(range(n), k)


def free_columns(pivots: Sequence[int], n: int) -> list[list[int]]:
    """For each RREF row, the columns that may hold arbitrary entries."""
    ps = set(pivots)
    return [[c for c in range(p + 1, n) if c not in ps] for p in pivots]


def enumerate_subspaces(field: Field, n: int, r: int, budget: int = DEFAULT_BUDGET,
                        q: int | None = None) -> Iterator[Subspace]:
    """Every codimension-r subspace of field^n exactly once.

    Order: pivot sets lexicographically, then free entries read row-major as a
    base-q numeral (first free entry most significant).  ``q`` overrides the
    alphabet size for counting-only use with q = 2 (entries are then 0/1 and
    no arithmetic is performed on them).
    """
    if not 0 <= r <= n:
        raise ValueError(f"codimension {r} out of range for n={n}")
    k = n - r
    alphabet = field.q if q is None else q
    total = gaussian_binomial(n, k, alphabet)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return _enumerate(field, n, k, alphabet)


def _enumerate(field: Field, n: int, k: int, alphabet: int) -> Iterator[Subspace]:
    for piv in pivot_sets(n, k):
        frees = free_columns(piv, n)
        slots = [(i, c) for i, cols in enumerate(frees) for c in cols]
        for values in itertools.product(range(alphabet), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(piv):
                rows[i][p] = 1
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            yield Subspace(field, n, tuple(tuple(r) for r in rows))


def complete_basis(w: Subspace) -> np.ndarray:
    """Invertible n×n matrix: codim(w) completion rows, then w's basis rows.

    Completion rows are the standard basis vectors on w's non-pivot columns,
    in index order.
    """
    n = w.ambient_dim
    piv = set(w.pivots)
    comp = [[int(i == c) for i in range(n)] for c in range(n) if c not in piv]
    rows = comp + [list(r) for r in w.basis]
    return np.array(rows, dtype=np.int64).reshape(n, n)


def random_matrix(field: Field, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return field.random(rng, (rows, cols))


def random_invertible(field: Field, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        m = random_matrix(field, n, n, rng)
        if is_invertible(field, m):
            return m


def random_subspace(field: Field, n: int, dim: int, rng: np.random.Generator) -> Subspace:
    """Uniform on the Grassmannian: row space of a uniform full-rank dim×n matrix."""
    if dim == 0:
        return Subspace.zero(field, n)
    while True:
        m = random_matrix(field, dim, n, rng)
        if rank(field, m) == dim:
            return Subspace.span(field, n, m)
