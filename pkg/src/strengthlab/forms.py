"""Linear, quadratic and cubic forms over a finite field.

Conventions
-----------
* Quadratic forms are symmetric Gram matrices: ``q(v) = vᵀ G v``, so the
  coefficient c of x_i x_j (i < j) is stored as c/2 in G[i, j] and G[j, i].
* Cubic forms are maps from sorted index triples to non-zero coefficients.
* ``pullback(f, M)`` is the form ``u ↦ f(M u)``; for ``M`` of shape (n, m) the
  result lives in m variables.  This is substitution ``x_i ↦ Σ_j M[i, j] x_j``.
* The group action is ``change_of_variables(f, g) = f ∘ g⁻¹``, so that
  ``(gh)·f = g·(h·f)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .field import Field, FieldError
from .linalg import Subspace

Monomial = tuple[int, int, int]


def _multiplicity(m: Sequence[int]) -> int:
    """Number of distinct orderings of an index triple."""
    distinct = len(set(m))
    return {1: 1, 2: 3, 3: 6}[distinct]


def monomials(n: int, degree: int = 3) -> list[tuple[int, ...]]:
    """Sorted index tuples of the given degree in n variables, lexicographic."""
    return list(itertools.combinations_with_replacement(range(n), degree))


def _check_field(a, b) -> None:
    if a.field != b.field:
        raise FieldError(f"forms over {a.field!r} and {b.field!r}")
    if a.n != b.n:
        raise ValueError(f"forms in {a.n} and {b.n} variables")


# ----------------------------------------------------------------------
# Linear forms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    field: Field
    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, field: Field, coeffs: Iterable) -> "LinearForm":
        return cls(field, tuple(int(c) for c in coeffs))

    @classmethod
    def variable(cls, field: Field, n: int, i: int) -> "LinearForm":
        return cls(field, tuple(int(j == i) for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {v.shape} for a form in {self.n} variables")
        return int(self.field.sum(self.field.mul(self.vector, v)))

    def evaluate_many(self, vs: np.ndarray) -> np.ndarray:
        return self.field.matmul(vs, self.vector.reshape(-1, 1))[:, 0]

    def pullback(self, m) -> "LinearForm":
        m = np.asarray(m, dtype=np.int64)
        if m.shape[0] != self.n:
            raise ValueError("substitution matrix has the wrong number of rows")
        return LinearForm.of(self.field, self.field.matmul(self.vector.reshape(1, -1), m)[0])

    def __add__(self, other: "LinearForm") -> "LinearForm":
        _check_field(self, other)
        return LinearForm.of(self.field, self.field.add(self.vector, other.vector))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        _check_field(self, other)
        return LinearForm.of(self.field, self.field.sub(self.vector, other.vector))

    def scale(self, c: int) -> "LinearForm":
        return LinearForm.of(self.field, self.field.mul(self.vector, c))

    def __mul__(self, other):
        if isinstance(other, QuadraticForm):
            return product(self, other)
        return NotImplemented


# ----------------------------------------------------------------------
# Quadratic forms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    field: Field
    gram: tuple[tuple[int, ...], ...]

    @classmethod
    def from_matrix(cls, field: Field, g) -> "QuadraticForm":
        g = np.asarray(g, dtype=np.int64)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.array_equal(g, g.T):
            raise ValueError("Gram matrix must be symmetric")
        return cls(field, tuple(tuple(int(x) for x in row) for row in g))

    @classmethod
    def from_coeffs(cls, field: Field, n: int, coeffs: Mapping[tuple[int, int], int]) -> "QuadraticForm":
        """From monomial coefficients {(i, j): c} meaning Σ c·x_i·x_j."""
        g = np.zeros((n, n), dtype=np.int64)
        for (i, j), c in coeffs.items():
            i, j = sorted((i, j))
            c = int(c)
            if i == j:
                g[i, i] = field.add(int(g[i, i]), c)
            else:
                h = field.mul(c, field.half)
                g[i, j] = field.add(int(g[i, j]), h)
                g[j, i] = g[i, j]
        return cls.from_matrix(field, g)

    @classmethod
    def zero(cls, field: Field, n: int) -> "QuadraticForm":
        return cls.from_matrix(field, np.zeros((n, n), dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.n, self.n)

    def coeffs(self) -> dict[tuple[int, int], int]:
        g = self.matrix
        out = {}
        for i in range(self.n):
            for j in range(i, self.n):
                c = int(g[i, j]) if i == j else self.field.add(int(g[i, j]), int(g[j, i]))
                if c:
                    out[(i, j)] = c
        return out

    def flat(self) -> np.ndarray:
        """Upper-triangular Gram entries: a coordinate vector on the space of quadrics."""
        iu = np.triu_indices(self.n)
        return self.matrix[iu]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.gram)

    def rank(self) -> int:
        return linalg.rank(self.field, self.matrix)

    def evaluate(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {v.shape} for a form in {self.n} variables")
        return int(self.evaluate_many(v.reshape(1, -1))[0])

    def evaluate_many(self, vs: np.ndarray) -> np.ndarray:
        f = self.field
        gv = f.matmul(vs, self.matrix)
        return f.sum(f.mul(gv, vs), axis=1)

    def pullback(self, m) -> "QuadraticForm":
        m = np.asarray(m, dtype=np.int64)
        if m.shape[0] != self.n:
            raise ValueError("substitution matrix has the wrong number of rows")
        f = self.field
        return QuadraticForm.from_matrix(f, f.matmul(f.matmul(m.T.copy(), self.matrix), m))

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        _check_field(self, other)
        return QuadraticForm.from_matrix(self.field, self.field.add(self.matrix, other.matrix))

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        _check_field(self, other)
        return QuadraticForm.from_matrix(self.field, self.field.sub(self.matrix, other.matrix))

    def scale(self, c: int) -> "QuadraticForm":
        return QuadraticForm.from_matrix(self.field, self.field.mul(self.matrix, c))


def combine_quadrics(field: Field, n: int, coeffs: Sequence[int], forms: Sequence[QuadraticForm]) -> QuadraticForm:
    """Σ coeffs[i]·forms[i]."""
    acc = np.zeros((n, n), dtype=np.int64)
    for c, q in zip(coeffs, forms):
        if c:
            acc = field.add(acc, field.mul(q.matrix, int(c)))
    return QuadraticForm.from_matrix(field, acc)


# ----------------------------------------------------------------------
# Cubic forms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CubicForm:
    field: Field
    n: int
    terms: tuple[tuple[Monomial, int], ...]

    @classmethod
    def from_dict(cls, field: Field, n: int, coeffs: Mapping[Sequence[int], int]) -> "CubicForm":
        acc: dict[Monomial, int] = {}
        for mono, c in coeffs.items():
            key = tuple(sorted(int(i) for i in mono))
            if len(key) != 3 or not all(0 <= i < n for i in key):
                raise ValueError(f"bad monomial {mono} for {n} variables")
            acc[key] = field.add(acc.get(key, 0), int(c) % field.q if field.e == 1 else int(c))
        return cls(field, n, tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def zero(cls, field: Field, n: int) -> "CubicForm":
        return cls(field, n, ())

    @property
    def coeffs(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[int]:
        return {i for mono, _ in self.terms for i in mono}

    def _arrays(self):
        if not self.terms:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty, empty
        idx = np.array([m for m, _ in self.terms], dtype=np.int64)
        c = np.array([v for _, v in self.terms], dtype=np.int64)
        return idx[:, 0], idx[:, 1], idx[:, 2], c

    def evaluate(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {v.shape} for a form in {self.n} variables")
        return int(self.evaluate_many(v.reshape(1, -1))[0])

    def evaluate_many(self, vs: np.ndarray) -> np.ndarray:
        f = self.field
        vs = np.asarray(vs, dtype=np.int64)
        if not self.terms:
            return np.zeros(vs.shape[0], dtype=np.int64)
        i, j, k, c = self._arrays()
        prod = f.mul(f.mul(vs[:, i], vs[:, j]), f.mul(vs[:, k], c))
        return f.sum(prod, axis=1)

    def polar_tensor(self) -> np.ndarray:
        """Symmetric S with S(v, v, v) = f(v); uses 1/3 and 1/6 (char ≠ 2, 3)."""
        f = self.field
        s = np.zeros((self.n,) * 3, dtype=np.int64)
        for mono, c in self.terms:
            share = f.div(c, f.from_int(_multiplicity(mono)))
            for perm in set(itertools.permutations(mono)):
                s[perm] = share
        return s

    def pullback(self, m) -> "CubicForm":
        """u ↦ f(M u)."""
        m = np.asarray(m, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != self.n:
            raise ValueError("substitution matrix has the wrong number of rows")
        f = self.field
        k = m.shape[1]
        if not self.terms or k == 0:
            return CubicForm.zero(f, k)
        i, j, l, c = self._arrays()
        a = f.mul(m[i], c[:, None])
        ab = f.mul(a[:, :, None], m[j][:, None, :])
        abc = f.mul(ab[:, :, :, None], m[l][:, None, None, :])
        dense = f.sum(abc, axis=0)
        out = {}
        for mono in itertools.combinations_with_replacement(range(k), 3):
            acc = 0
            for perm in set(itertools.permutations(mono)):
                acc = f.add(acc, int(dense[perm]))
            if acc:
                out[mono] = acc
        return CubicForm(f, k, tuple(sorted(out.items())))

    def map_coefficients(self, field: Field, fn) -> "CubicForm":
        """Same monomials, coefficients sent through ``fn`` into ``field``."""
        return CubicForm.from_dict(field, self.n, {m: fn(c) for m, c in self.terms})

    def __add__(self, other: "CubicForm") -> "CubicForm":
        _check_field(self, other)
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = self.field.add(acc.get(m, 0), c)
        return CubicForm(self.field, self.n, tuple(sorted((m, c) for m, c in acc.items() if c)))

    def __neg__(self) -> "CubicForm":
        return self.scale(self.field.neg(1))

    def __sub__(self, other: "CubicForm") -> "CubicForm":
        return self + (-other)

    def scale(self, c: int) -> "CubicForm":
        f = self.field
        return CubicForm(f, self.n, tuple((m, f.mul(v, c)) for m, v in self.terms if f.mul(v, c)))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*" + "*".join(f"x{i}" for i in m) for m, c in self.terms) or "0"
        return f"CubicForm({body} over {self.field!r}, n={self.n})"


def product(l: LinearForm, q: QuadraticForm) -> CubicForm:
    """The cubic ℓ·q."""
    _check_field(l, q)
    f = l.field
    acc: dict[Monomial, int] = {}
    qc = q.coeffs()
    for a, la in enumerate(l.coeffs):
        if not la:
            continue
        for (b, c), qv in qc.items():
            key = tuple(sorted((a, b, c)))
            acc[key] = f.add(acc.get(key, 0), f.mul(la, qv))
    return CubicForm(f, l.n, tuple(sorted((m, c) for m, c in acc.items() if c)))


# ----------------------------------------------------------------------
# Generic operations
# ----------------------------------------------------------------------

Form = LinearForm | QuadraticForm | CubicForm


def evaluate(form: Form, v) -> int:
    return form.evaluate(v)


def pullback(form: Form, m):
    return form.pullback(m)


def change_of_variables(form: Form, g):
    """g·f = f ∘ g⁻¹ for invertible g."""
    g = np.asarray(g, dtype=np.int64)
    try:
        ginv = linalg.inverse(form.field, g)
    except linalg.SingularMatrix:
        raise linalg.SingularMatrix("change of variables by a singular matrix") from None
    return form.pullback(ginv)


def restrict(form: Form, w: Subspace):
    """Pullback along w's basis: a form in dim(w) coordinates."""
    if w.ambient_dim != form.n:
        raise ValueError(f"subspace of {w.ambient_dim}-space for a form in {form.n} variables")
    return form.pullback(w.matrix.T.copy())


# ----------------------------------------------------------------------
# Cocharacters
# ----------------------------------------------------------------------

class NegativeWeight(ValueError):
    """The one-parameter limit does not exist."""

    def __init__(self, monomial: Monomial, weight: int):
        super().__init__(f"monomial {monomial} has negative weight {weight}")
        self.monomial = monomial
        self.weight = weight


@dataclass(frozen=True)
class Cocharacter:
    """t acts by x_i ↦ t^{weights[i]} x_i."""

    weights: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def weight(self, mono: Sequence[int]) -> int:
        return sum(self.weights[i] for i in mono)

    @classmethod
    def blocks(cls, n: int, assignment: Mapping[int, int], default: int = 0) -> "Cocharacter":
        return cls(tuple(assignment.get(i, default) for i in range(n)))


def grade_by_weight(f: CubicForm, c: Cocharacter) -> dict[int, CubicForm]:
    if c.n != f.n:
        raise ValueError("cocharacter and form disagree on the number of variables")
    parts: dict[int, list] = {}
    for mono, v in f.terms:
        parts.setdefault(c.weight(mono), []).append((mono, v))
    return {w: CubicForm(f.field, f.n, tuple(terms)) for w, terms in sorted(parts.items())}


def act_cocharacter(f: CubicForm, c: Cocharacter, t: int) -> CubicForm:
    """Substitute x_i ↦ t^{w_i} x_i for a non-zero field element t."""
    fld = f.field
    if t == 0:
        raise ZeroDivisionError("t must be non-zero")
    terms = [(m, fld.mul(v, fld.power(t, c.weight(m)))) for m, v in f.terms]
    return CubicForm(fld, f.n, tuple(terms))


def cocharacter_limit(f: CubicForm, c: Cocharacter) -> CubicForm:
    """lim_{t→0} of the substitution x_i ↦ t^{w_i} x_i: the weight-0 part."""
    if c.n != f.n:
        raise ValueError("cocharacter and form disagree on the number of variables")
    keep = []
    for mono, v in f.terms:
        w = c.weight(mono)
        if w < 0:
            raise NegativeWeight(mono, w)
        if w == 0:
            keep.append((mono, v))
    return CubicForm(f.field, f.n, tuple(keep))


# ----------------------------------------------------------------------
# Decompositions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LQDecomposition:
    """f = Σ ℓ_i q_i."""

    field: Field
    n: int
    pairs: tuple[tuple[LinearForm, QuadraticForm], ...] = ()

    def __post_init__(self) -> None:
        for l, q in self.pairs:
            if l.n != self.n or q.n != self.n:
                raise ValueError("decomposition pairs must share the variable count")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def quadrics(self) -> list[QuadraticForm]:
        return [q for _, q in self.pairs]

    @property
    def linears(self) -> list[LinearForm]:
        return [l for l, _ in self.pairs]


def assemble(d: LQDecomposition) -> CubicForm:
    out = CubicForm.zero(d.field, d.n)
    for l, q in d.pairs:
        out = out + product(l, q)
    return out


def is_separable_witness(f: CubicForm, split: tuple[Iterable[int], Iterable[int]]) -> bool:
    """True iff every monomial has exactly one variable in the first block, two in the second."""
    first, second = set(split[0]), set(split[1])
    if first & second or first | second != set(range(f.n)):
        raise ValueError("split must partition the variables")
    return all(sum(i in first for i in mono) == 1 for mono, _ in f.terms)
