"""The diagonal cubic Σ x_i y_i z_i and a basis-selection certificate of its non-vanishing.

Given linear forms (x_i, y_i, z_i) spanning the dual of an m-dimensional
space, a greedy three-phase selection across the columns of the n×3 matrix
of forms yields a basis X_1..X_r, Y_1..Y_s, Z_1..Z_t in which the coefficient
of X_1·Y_1·Z_1 in Σ x_i y_i z_i is exactly 1 whenever t ≥ 1, which is
guaranteed when m > 2n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .field import Field
from .forms import CubicForm, restrict
from .linalg import Subspace


class NotSpanning(ValueError):
    pass


def diagonal_cubic(field: Field, n: int) -> CubicForm:
    """x1·y1·z1 + ... + xn·yn·zn in 3n variables ordered x1, y1, z1, x2, ..."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return CubicForm.from_dict(field, 3 * n, {(3 * i, 3 * i + 1, 3 * i + 2): 1 for i in range(n)})


@dataclass(frozen=True)
class TripleMatrix:
    """n rows of three linear forms on an m-dimensional space (coefficient vectors)."""

    field: Field
    m: int
    entries: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def of(cls, field: Field, arr) -> "TripleMatrix":
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim != 3 or a.shape[1] != 3:
            raise ValueError("expected an n×3×m array")
        return cls(field, a.shape[2], tuple(tuple(tuple(int(x) for x in e) for e in row) for row in a))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, 3, self.m)

    def cubic(self) -> CubicForm:
        """Σ_i x_i y_i z_i as a cubic in the m coordinates."""
        fld, a = self.field, self.array
        acc: dict[tuple[int, int, int], int] = {}
        for row in a:
            for i, j, k in itertools.product(range(self.m), repeat=3):
                c = fld.mul(fld.mul(int(row[0, i]), int(row[1, j])), int(row[2, k]))
                if c:
                    key = tuple(sorted((i, j, k)))
                    acc[key] = fld.add(acc.get(key, 0), c)
        return CubicForm(fld, self.m, tuple(sorted((k, v) for k, v in acc.items() if v)))


Swap = tuple  # ("row", i, j) or ("within", row, c1, c2)


def apply_swaps(a: np.ndarray, trace) -> np.ndarray:
    a = a.copy()
    for move in trace:
        if move[0] == "row":
            _, i, j = move
            a[[i, j]] = a[[j, i]]
        elif move[0] == "within":
            _, row, c1, c2 = move
            a[row, [c1, c2]] = a[row, [c2, c1]]
        else:
            raise ValueError(f"unknown move {move!r}")
    return a


@dataclass(frozen=True)
class PhaseCertificate:
    field: Field
    original: TripleMatrix
    trace: tuple[Swap, ...]
    r: int
    s: int
    t: int
    basis: tuple[tuple[int, ...], ...]
    coefficient: int | None

    def replay(self) -> np.ndarray:
        return apply_swaps(self.original.array, self.trace)

    def pivot_monomial(self) -> tuple[int, int, int]:
        return (0, self.r, self.r + self.s)

    def verify(self) -> bool:
        """Independent check: swaps preserve the cubic, the basis is read off the
        replayed matrix and spans, and re-expanding the cubic in that basis gives
        the recorded X1·Y1·Z1 coefficient."""
        fld, m = self.field, self.original.m
        if not (self.original.n >= self.r >= self.s >= self.t >= 0 and self.r + self.s + self.t == m):
            return False
        try:
            a = self.replay()
        except (IndexError, ValueError):
            return False
        expect = [a[i, 0] for i in range(self.r)] + [a[i, 1] for i in range(self.s)] + \
                 [a[i, 2] for i in range(self.t)]
        b = np.array(self.basis, dtype=np.int64).reshape(m, m)
        if not np.array_equal(np.array(expect, dtype=np.int64).reshape(m, m), b):
            return False
        if not linalg.is_invertible(fld, b):
            return False
        permuted = TripleMatrix.of(fld, a)
        f = self.original.cubic()
        if permuted.cubic() != f:
            return False
        if self.t == 0:
            return self.coefficient is None
        # new coordinates w = B v, so f in the new basis is v ↦ f(B⁻¹ w)
        g = f.pullback(linalg.inverse(fld, b))
        return g.coeffs.get(self.pivot_monomial(), 0) == self.coefficient


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise AssertionError(message)


def _in_span(field: Field, chosen: list[np.ndarray], v: np.ndarray) -> bool:
    if not chosen:
        return not v.any()
    base = np.stack(chosen)
    return linalg.rank(field, np.concatenate([base, v[None]])) == len(chosen)


def _all_in_span(field: Field, chosen: list[np.ndarray], vs) -> bool:
    return all(_in_span(field, chosen, v) for v in vs)


def _pivot_coefficient(field: Field, a: np.ndarray, b: np.ndarray, mono) -> int:
    """Coefficient of a square-free monomial in Σ x_i y_i z_i written in basis b."""
    binv = linalg.inverse(field, b)
    acc = 0
    for row in a:
        # coordinates of each entry in the new basis: entry = c · b, so c = entry · b⁻¹
        c = field.matmul(row, binv)
        for perm in itertools.permutations(mono):
            term = field.mul(field.mul(int(c[0, perm[0]]), int(c[1, perm[1]])), int(c[2, perm[2]]))
            acc = field.add(acc, term)
    return acc


def three_phase_basis(tm: TripleMatrix) -> PhaseCertificate:
    """Greedy basis selection; rows are scanned lowest first and columns in order x, y, z."""
    fld, n, m = tm.field, tm.n, tm.m
    a = tm.array
    if linalg.rank(fld, a.reshape(3 * n, m)) != m:
        raise NotSpanning(f"the {3 * n} forms do not span the {m}-dimensional dual")
    trace: list[Swap] = []

    def move(src_row: int, src_col: int, dst_row: int, dst_col: int) -> None:
        nonlocal a
        if src_row != dst_row:
            trace.append(("row", dst_row, src_row))
            a = apply_swaps(a, [trace[-1]])
        if src_col != dst_col:
            trace.append(("within", dst_row, dst_col, src_col))
            a = apply_swaps(a, [trace[-1]])

    def find(rows, cols, chosen):
        for i in rows:
            for c in cols:
                if not _in_span(fld, chosen, a[i, c]):
                    return i, c
        return None

    xs: list[np.ndarray] = []
    while (hit := find(range(len(xs), n), (0, 1, 2), xs)) is not None:
        move(*hit, len(xs), 0)
        xs.append(a[len(xs), 0].copy())
    r = len(xs)
    _check(_all_in_span(fld, xs, a[r:].reshape(-1, m)), "rows below r escape span(X)")

    ys: list[np.ndarray] = []
    while (hit := find(range(len(ys), r), (1, 2), xs + ys)) is not None:
        move(*hit, len(ys), 1)
        ys.append(a[len(ys), 1].copy())
    s = len(ys)
    _check(_all_in_span(fld, xs + ys, a[s:r, 1:].reshape(-1, m)), "rows s..r escape span(X, Y)")
    _check(_all_in_span(fld, xs, a[r:].reshape(-1, m)), "phase 2 disturbed rows below r")

    zs: list[np.ndarray] = []
    while (hit := find(range(len(zs), s), (2,), xs + ys + zs)) is not None:
        move(*hit, len(zs), 2)
        zs.append(a[len(zs), 2].copy())
    t = len(zs)

    # later phases permute earlier rows, so read the basis off the final matrix
    picked = [a[i, 0] for i in range(r)] + [a[i, 1] for i in range(s)] + [a[i, 2] for i in range(t)]
    basis = np.stack(picked) if m else np.zeros((0, 0), dtype=np.int64)
    if linalg.rank(fld, basis) != m:
        raise AssertionError("selected forms do not form a basis")
    coef = _pivot_coefficient(fld, a, basis, (0, r, r + s)) if t else None
    if t and coef != 1:
        raise AssertionError(f"X1·Y1·Z1 coefficient is {coef}, expected 1")
    return PhaseCertificate(fld, tm, tuple(trace), r, s, t,
                            tuple(tuple(int(x) for x in row) for row in basis), coef)


@dataclass(frozen=True)
class DiagonalCertificate:
    n: int
    subspace: Subspace
    phases: PhaseCertificate

    def verify(self) -> bool:
        """The phase certificate checks out, has a non-zero pivot coefficient,
        and was built from the coordinate functionals restricted to the subspace."""
        w = self.subspace
        if w.codim != self.n - 1 or self.phases.t < 1 or not self.phases.coefficient:
            return False
        if not np.array_equal(self.phases.original.array, _restricted_functionals(w, self.n)):
            return False
        return self.phases.verify()


def _restricted_functionals(w: Subspace, n: int) -> np.ndarray:
    # coordinate functional j on w, in w's basis, is column j of the basis matrix
    cols = w.matrix.T
    return cols.reshape(n, 3, w.dim)


def certify_diagonal_qrank(field: Field, n: int, w: Subspace) -> DiagonalCertificate:
    """Certificate that the diagonal cubic does not vanish on w (codim n-1).

    Over every such w this shows there is no vanishing subspace of codimension
    n - 1, hence q-rank >= n.
    """
    if w.ambient_dim != 3 * n:
        raise ValueError(f"subspace of a {w.ambient_dim}-space, expected {3 * n}")
    if w.codim != n - 1:
        raise ValueError(f"codimension {w.codim}, expected {n - 1}")
    tm = TripleMatrix.of(field, _restricted_functionals(w, n))
    return DiagonalCertificate(n, w, three_phase_basis(tm))


def restriction_nonzero(field: Field, n: int, w: Subspace) -> bool:
    """Direct cross-check: the diagonal cubic restricted to w is non-zero."""
    return not restrict(diagonal_cubic(field, n), w).is_zero()
