"""Orbit-closure degenerations with replayable certificates.

A certificate is a chain of steps applied to a starting cubic:

* ``CoordinateChange(M)`` replaces f by u ↦ f(M u), i.e. the action of the
  group element M⁻¹.
* ``CocharacterLimit(w)`` replaces f by lim_{t→0} of x_i ↦ t^{w_i} x_i, which
  exists iff no monomial has negative weight.

Both keep the form in the orbit closure of the start, so a certificate that
replays is a proof of orbit-closure membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Sequence, Union

import numpy as np

from . import linalg
from .bounds import required_minrank
from .forms import (Cocharacter, CubicForm, LinearForm, NegativeWeight, QuadraticForm,
                    cocharacter_limit, grade_by_weight)
from .linalg import DEFAULT_BUDGET, Subspace
from .qrank import qrank_oracle
from .quadspace import (ConstructionFailed, QuadricSubspace, extract_high_minrank,
                        lex_minimal_rank_basis, minrank)


@dataclass(frozen=True)
class CoordinateChange:
    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, m) -> "CoordinateChange":
        return cls(tuple(tuple(int(x) for x in row) for row in np.asarray(m)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(len(self.matrix), -1)

    def apply(self, f: CubicForm) -> CubicForm:
        m = self.array
        if m.shape != (f.n, f.n):
            raise ValueError(f"{m.shape} substitution for a form in {f.n} variables")
        if not linalg.is_invertible(f.field, m):
            raise linalg.SingularMatrix("coordinate change is singular")
        return f.pullback(m)


@dataclass(frozen=True)
class CocharacterLimit:
    weights: tuple[int, ...]

    def apply(self, f: CubicForm) -> CubicForm:
        return cocharacter_limit(f, Cocharacter(self.weights))


DegenerationStep = Union[CoordinateChange, CocharacterLimit]


@dataclass(frozen=True)
class DegenerationCertificate:
    start: CubicForm
    steps: tuple[DegenerationStep, ...]
    end: CubicForm

    def then(self, other: "DegenerationCertificate") -> "DegenerationCertificate":
        if other.start != self.end:
            raise ValueError("certificates do not chain")
        return DegenerationCertificate(self.start, self.steps + other.steps, other.end)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def replay(start: CubicForm, steps: Sequence[DegenerationStep]) -> CubicForm:
    f = start
    for step in steps:
        f = step.apply(f)
    return f


def verify_certificate(cert: DegenerationCertificate) -> Verdict:
    """Replay every step; a failure names the offending step index (or len(steps) for the end check)."""
    f = cert.start
    for i, step in enumerate(cert.steps):
        try:
            f = step.apply(f)
        except NegativeWeight as exc:
            return Verdict(False, i, str(exc))
        except (ValueError, linalg.SingularMatrix) as exc:
            return Verdict(False, i, str(exc))
    if f != cert.end:
        return Verdict(False, len(cert.steps), "replay does not reach the stated end form")
    return Verdict(True)


# ----------------------------------------------------------------------
# Separable degeneration
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SeparableDegeneration:
    """Output of :func:`separable_degenerate`.

    ``split`` is (linear block, quadratic block): g has exactly one variable
    from the first block in every monomial.
    """

    g: CubicForm
    certificate: DegenerationCertificate
    bound: int
    split: tuple[tuple[int, ...], tuple[int, ...]]
    r: int
    k_prime: int
    candidate_qranks: tuple[int, int]
    chosen: str

    def __iter__(self):
        return iter((self.g, self.certificate, self.bound))


def _embed_block(n: int, block: np.ndarray) -> np.ndarray:
    m = np.eye(n, dtype=np.int64)
    k = block.shape[0]
    m[:k, :k] = block
    return m


def separable_degenerate(f: CubicForm, budget: int = DEFAULT_BUDGET,
                         threads: int = 1) -> SeparableDegeneration:
    """Degenerate f to a separable cubic g with qrank(g) >= ceil(k'/2).

    k' = r - qrank(f_3), where after a coordinate change f = Σ_{i<r} x_i q_i
    and f_3 is the part of f cubic in x_0..x_{r-1}.
    """
    if f.is_zero():
        raise ValueError("the zero form has no separable degeneration of interest")
    fld, n = f.field, f.n
    res = qrank_oracle(f, budget=budget, threads=threads)
    r, w = res.r, res.witness
    # after this change the witness is {x_0 = ... = x_{r-1} = 0}
    to_x = CoordinateChange.of(linalg.complete_basis(w).T)
    f1 = to_x.apply(f)

    x_block = Cocharacter(tuple(int(i < r) for i in range(n)))
    f3 = grade_by_weight(f1, x_block).get(3, CubicForm.zero(fld, n))
    take_x = np.eye(n, r, dtype=np.int64)
    res3 = qrank_oracle(f3.pullback(take_x), budget=budget, threads=threads)
    k_prime = r - res3.r
    # new x-coordinates whose first k' directions span the vanishing subspace of f_3
    w3 = res3.witness
    c3 = linalg.complete_basis(w3)
    frame = np.concatenate([c3[r - k_prime:], c3[:r - k_prime]])
    inner = CoordinateChange.of(_embed_block(n, frame.T))
    f2 = inner.apply(f1)
    kill = CocharacterLimit(tuple(int(k_prime <= i < r) for i in range(n)))
    fp = kill.apply(f2)

    to_lin = CocharacterLimit(tuple(2 if i < r else -1 for i in range(n)))
    to_quad = CocharacterLimit(tuple(-1 if i < r else 2 for i in range(n)))
    cand1, cand2 = to_lin.apply(fp), to_quad.apply(fp)
    q1 = qrank_oracle(cand1, budget=budget, threads=threads).r
    q2 = qrank_oracle(cand2, budget=budget, threads=threads).r
    xs, rest = tuple(range(r)), tuple(range(r, n))
    if q1 >= q2:
        g, last, split, chosen = cand1, to_lin, (xs, rest), "linear-in-block"
    else:
        g, last, split, chosen = cand2, to_quad, (rest, xs), "quadratic-in-block"
    cert = DegenerationCertificate(f, (to_x, inner, kill, last), g)
    return SeparableDegeneration(g, cert, ceil(k_prime / 2), split, r, k_prime, (q1, q2), chosen)


# ----------------------------------------------------------------------
# Reduction towards a surjection
# ----------------------------------------------------------------------

class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException | str):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class ReductionReport:
    g: CubicForm
    split: tuple[tuple[int, ...], tuple[int, ...]]
    linears: tuple[LinearForm, ...]
    quadrics: tuple[QuadraticForm, ...]
    minrank_achieved: int
    required_minrank: int
    deg2_hypothesis_met: bool
    bound: int
    extraction: str
    g_prime: CubicForm
    certificate: DegenerationCertificate


def separable_pairs(g: CubicForm, split) -> tuple[list[int], list[QuadraticForm]]:
    """g = Σ_{v in block 1} x_v · q_v; returns the block-1 variables and their q_v."""
    first = sorted(split[0])
    fld, n = g.field, g.n
    buckets: dict[int, dict] = {v: {} for v in first}
    fs = set(first)
    for mono, c in g.terms:
        lin = [i for i in mono if i in fs]
        if len(lin) != 1:
            raise ValueError("form is not separable for this split")
        rest = list(mono)
        rest.remove(lin[0])
        key = (rest[0], rest[1])
        buckets[lin[0]][key] = fld.add(buckets[lin[0]].get(key, 0), c)
    return first, [QuadraticForm.from_coeffs(fld, n, buckets[v]) for v in first]


def _coordinates(space: QuadricSubspace, q: QuadraticForm) -> np.ndarray:
    fld = space.field
    a = np.stack([b.flat() for b in space.basis], axis=1)
    x = linalg.solve(fld, a, q.flat())
    if x is None:
        raise AssertionError("form outside the span")
    return x


def surjection_pipeline(f: CubicForm, d: int, budget: int = DEFAULT_BUDGET,
                        threads: int = 1) -> ReductionReport:
    """Reduce f to Σ_{i<d} ℓ_i q_i (independent ℓ's, separate variables) and check the rank hypothesis.

    The extraction of a high-minrank d-dimensional quadric subspace is run only
    when its numerical precondition holds; otherwise the d highest-rank
    elements of a lexicographically minimal rank basis are used and the
    report says so.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    try:
        sep = separable_degenerate(f, budget, threads)
    except Exception as exc:
        raise PipelineError("separable_degenerate", exc) from exc
    g, fld, n = sep.g, f.field, f.n
    need = required_minrank(d)
    try:
        lin_vars, qv = separable_pairs(g, sep.split)
        space = QuadricSubspace.span(fld, n, qv)
        m = space.dim
        # g = Σ_j (Σ_v a[v, j] x_v) Q_j over the basis Q_j of span{q_v}
        a = np.array([_coordinates(space, q) if m else [] for q in qv], dtype=np.int64).reshape(len(qv), m)
    except Exception as exc:
        raise PipelineError("separable_pairs", exc) from exc

    try:
        if m >= d and (2**d - 1) * (need - 1) + d <= sep.bound:
            chosen = extract_high_minrank(space, d, need, sep.bound, budget)
            how = "extracted"
        else:
            lex = lex_minimal_rank_basis(space, budget)
            chosen = QuadricSubspace(fld, n, tuple(lex[max(m - d, 0):]))
            how = (f"fallback: (2^{d}-1)({need}-1)+{d} > bound {sep.bound}" if m >= d
                   else f"fallback: only {m} independent quadrics")
    except ConstructionFailed as exc:
        raise PipelineError("extract_high_minrank", exc) from exc

    try:
        # new quadric basis: chosen first, then completed from the Q_j
        new_basis = QuadricSubspace.span(fld, n, list(chosen.basis) + list(space.basis))
        kk = chosen.dim
        # Q_j = Σ_i b[j, i] P_i, so g = Σ_i (Σ_j b[j, i] ℓ'_j) P_i
        b = np.array([_coordinates(new_basis, q) for q in space.basis], dtype=np.int64).reshape(m, m)
        coeff = fld.matmul(a, b) if m else np.zeros((len(lin_vars), 0), dtype=np.int64)
        lin_rows = coeff.T.copy()                      # ℓ''_i in block-1 coordinates
        nb = len(lin_vars)
        sub = np.eye(n, dtype=np.int64)
        if nb:
            comp = linalg.complete_basis(Subspace.span(fld, nb, lin_rows))
            frame = np.concatenate([lin_rows, comp[:nb - m]])
            idx = np.array(lin_vars, dtype=np.int64)
            sub[np.ix_(idx, idx)] = linalg.inverse(fld, frame)
        change = CoordinateChange.of(sub)
        g_lin = change.apply(g)
        kill = CocharacterLimit(tuple(int(v in lin_vars[kk:]) for v in range(n)))
        g_prime = kill.apply(g_lin)
        tail = DegenerationCertificate(g, (change, kill), g_prime)
        cert = sep.certificate.then(tail)
    except Exception as exc:
        raise PipelineError("restrict_pairs", exc) from exc
    verdict = verify_certificate(cert)
    if not verdict:
        raise PipelineError("verify", verdict.reason)

    linears = tuple(LinearForm.variable(fld, n, v) for v in lin_vars[:kk])
    quadrics = tuple(chosen.basis)
    achieved = minrank(chosen, budget)
    independent = linalg.rank(fld, np.array([l.coeffs for l in linears], dtype=np.int64)) == kk if kk else True
    met = kk == d and independent and achieved >= need
    return ReductionReport(g, sep.split, linears, quadrics, achieved, need, met, sep.bound, how,
                           g_prime, cert)

