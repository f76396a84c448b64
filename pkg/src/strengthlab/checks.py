"""Seeded property suites.

Each suite draws independent samples (see :mod:`strengthlab.sampling`) and
checks one structural statement per sample.  A violation is either the
statement failing or an unexpected exception; running out of budget is
tallied separately.  Results carry no timings so that the JSON report is a
pure function of (suite, samples, seed, field, budget).
"""

from __future__ import annotations

import time
import traceback
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .degeneration import separable_degenerate, verify_certificate
from .field import DEFAULT_FIELD_SPEC, Field, FieldSpec, embedding, field_extend, get_field
from .forms import assemble, change_of_variables, is_separable_witness, restrict
from .linalg import DEFAULT_BUDGET, BudgetExceeded, random_invertible, random_subspace
from .qrank import decompose_via_subspace, qrank_linear_solve_oracle, qrank_oracle
from .quadspace import (ConstructionFailed, QuadricSubspace, bounded_rank_combination,
                        extract_high_minrank, maxrank, minmax_rank, verify_maxrank_inequality)
from .sampling import block_separable_cubic, mixed_cubic, random_cubic, random_lq_cubic, random_quadric, sample_rng
from .witness import certify_diagonal_qrank, restriction_nonzero


@dataclass
class Context:
    field: Field
    budget: int = DEFAULT_BUDGET
    threads: int = 1

    def qrank(self, f, max_r=None):
        return qrank_oracle(f, max_r=max_r, budget=self.budget, threads=self.threads)


@dataclass
class Outcome:
    ok: bool
    detail: dict = dc_field(default_factory=dict)
    tag: str | None = None      # aggregated into the suite's stats


@dataclass(frozen=True)
class Suite:
    name: str
    statement: str
    default_samples: int
    run: Callable[[Context, np.random.Generator, int], Outcome]


@dataclass
class SuiteResult:
    name: str
    statement: str
    samples: int
    violations: int
    budget_exceeded: int
    failures: list
    stats: dict
    runtime: float = 0.0

    def to_json(self) -> dict:
        return {"suite": self.name, "statement": self.statement, "samples": self.samples,
                "violations": self.violations, "budget_exceeded": self.budget_exceeded,
                "failures": self.failures, "stats": self.stats}


def _n(rng, lo, hi) -> int:
    return int(rng.integers(lo, hi + 1))


# ----------------------------------------------------------------------
# suites
# ----------------------------------------------------------------------

def _subadd(ctx: Context, rng, i) -> Outcome:
    n = _n(rng, 1, 4)
    f, g = mixed_cubic(ctx.field, n, rng), mixed_cubic(ctx.field, n, rng)
    a, b, c = ctx.qrank(f).r, ctx.qrank(g).r, ctx.qrank(f + g).r
    return Outcome(c <= a + b, {"n": n, "f": a, "g": b, "sum": c}, f"slack={a + b - c}")


def _qsubsp(ctx: Context, rng, i) -> Outcome:
    n = _n(rng, 1, 4)
    f = mixed_cubic(ctx.field, n, rng)
    d = _n(rng, 0, n)
    w = random_subspace(ctx.field, n, n - d, rng)
    rf, rw = ctx.qrank(f).r, ctx.qrank(restrict(f, w)).r
    return Outcome(rf - d <= rw <= rf, {"n": n, "codim": d, "f": rf, "restricted": rw}, f"drop={rf - rw}")


def _gl(ctx: Context, rng, i) -> Outcome:
    n = _n(rng, 1, 4)
    f = mixed_cubic(ctx.field, n, rng)
    g = random_invertible(ctx.field, n, rng)
    a, b = ctx.qrank(f).r, ctx.qrank(change_of_variables(f, g)).r
    return Outcome(a == b, {"n": n, "before": a, "after": b}, f"r={a}")


def _geom(ctx: Context, rng, i) -> Outcome:
    n = _n(rng, 1, 3)
    f = mixed_cubic(ctx.field, n, rng)
    a = qrank_oracle(f, max_r=2, budget=ctx.budget, threads=ctx.threads)
    b = qrank_linear_solve_oracle(f, max_r=2, budget=ctx.budget)
    ok = a.verdict == b.verdict
    if b.exact:
        ok &= assemble(b.decomposition) == f and len(b.decomposition) == b.r
    if a.exact:
        d = decompose_via_subspace(f, a.witness)
        ok &= assemble(d) == f and len(d) == a.witness.codim
    return Outcome(ok, {"n": n, "vanishing": a.verdict, "linear_solve": b.verdict}, f"r={a.verdict}")


def _random_subquadrics(space: QuadricSubspace, rng) -> QuadricSubspace:
    k = _n(rng, 0, space.dim)
    if k == 0 or space.dim == 0:
        return QuadricSubspace(space.field, space.n, ())
    coeffs = random_subspace(space.field, space.dim, k, rng).matrix
    return QuadricSubspace.span(space.field, space.n, [space.element(c) for c in coeffs])


def _maxrank(ctx: Context, rng, i) -> Outcome:
    n = _n(rng, 1, 4)
    f = mixed_cubic(ctx.field, n, rng)
    res = ctx.qrank(f)
    d = decompose_via_subspace(f, res.witness)
    space = QuadricSubspace.span(ctx.field, n, d.quadrics)
    sub = _random_subquadrics(space, rng)
    ok = verify_maxrank_inequality(f, d, sub, r=res.r, budget=ctx.budget)
    return Outcome(ok, {"n": n, "r": res.r, "dimQ": space.dim, "dimQ'": sub.dim}, f"dimQ'={sub.dim}")


def _bounded_combination(ctx: Context, rng, i) -> Outcome:
    fld = ctx.field
    while True:
        n = _n(rng, 2, 4)
        qs = [random_quadric(fld, n, rng, rank=_n(rng, 0, n - 1)) for _ in range(_n(rng, 1, 4))]
        s = max(q.rank() for q in qs) + 1
        top = maxrank(QuadricSubspace.span(fld, n, qs), ctx.budget)
        if top >= 1:
            break
    t = _n(rng, 1, top)
    q = bounded_rank_combination(qs, t, s, ctx.budget)
    rk = q.rank()
    inside = QuadricSubspace.span(fld, n, qs).contains(q)
    return Outcome(t <= rk <= t + s - 2 and inside, {"n": n, "forms": len(qs), "t": t, "s": s, "rank": rk},
                   f"excess={rk - t}")


def _minrank_extract(ctx: Context, rng, i) -> Outcome:
    fld = ctx.field
    while True:
        n = _n(rng, 2, 5)
        f = random_lq_cubic(fld, n, _n(rng, 1, n), rng)
        res = ctx.qrank(f)
        if res.r >= 1:
            break
    r = res.r
    d = decompose_via_subspace(f, res.witness)
    space = QuadricSubspace.span(fld, n, d.quadrics)
    pairs = [(k, s) for k in range(1, r + 1) for s in range(1, r + 1) if (2**k - 1) * (s - 1) + k <= r]
    k, s = pairs[int(rng.integers(len(pairs)))]
    detail = {"n": n, "r": r, "k": k, "s": s}
    try:
        sub = extract_high_minrank(space, k, s, r, ctx.budget)
    except ConstructionFailed as exc:
        return Outcome(False, {**detail, "error": str(exc)})
    lo, _ = minmax_rank(sub, ctx.budget)
    ok = sub.dim == k and lo >= s and space.contains_subspace(sub)
    return Outcome(ok, {**detail, "minrank": lo}, f"k={k},s={s}")


def _srk(ctx: Context, rng, i) -> Outcome:
    fld = ctx.field
    while True:
        n = _n(rng, 1, 6)
        length = _n(rng, 1, min(3, n))
        if i % 3 == 2 and n > length:
            # x_1 q_1 + ... with the q's free of the x's: the cubic-in-x part vanishes
            f = block_separable_cubic(fld, n, length, rng)
        else:
            f = random_lq_cubic(fld, n, length, rng)
        if not f.is_zero():
            break
    sep = separable_degenerate(f, ctx.budget, ctx.threads)
    rg = ctx.qrank(sep.g).r
    ok = (is_separable_witness(sep.g, sep.split) and bool(verify_certificate(sep.certificate))
          and rg >= sep.bound and sep.r <= 3)
    return Outcome(ok, {"n": n, "r": sep.r, "k_prime": sep.k_prime, "bound": sep.bound, "qrank_g": rg},
                   f"r={sep.r},k'={sep.k_prime}")


MAX_EXTENSION = 6


def _qbd_ext(ctx: Context, rng, i) -> Outcome:
    base = ctx.field
    binary = i % 2 == 0
    n = 2 if binary else 3
    while True:
        f = random_cubic(base, n, rng)
        if not f.is_zero():
            break
    target = n - 1          # d - xi(d) for d = 2, 3
    degrees = [MAX_EXTENSION] if binary else range(1, MAX_EXTENSION + 1)
    for k in degrees:
        ext = field_extend(base, k)
        emb = embedding(base, ext)
        res = qrank_oracle(f.map_coefficients(ext, emb), max_r=target, budget=ctx.budget,
                           threads=ctx.threads)
        if res.exact:
            return Outcome(True, {"n": n, "degree": k, "r": res.r}, f"n={n},k={k}")
    return Outcome(False, {"n": n, "degree": MAX_EXTENSION, "verdict": res.verdict})


def _witness(ctx: Context, rng, i) -> Outcome:
    n = 3
    w = random_subspace(ctx.field, 3 * n, 2 * n + 1, rng)
    cert = certify_diagonal_qrank(ctx.field, n, w)
    direct = restriction_nonzero(ctx.field, n, w)
    ok = cert.verify() and direct
    return Outcome(ok, {"r": cert.phases.r, "s": cert.phases.s, "t": cert.phases.t},
                   f"phases={cert.phases.r}/{cert.phases.s}/{cert.phases.t}")


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("subadd", "qrank(f+g) <= qrank(f) + qrank(g)", 500, _subadd),
    Suite("qsubsp", "qrank(f) - codim W <= qrank(f|W) <= qrank(f)", 500, _qsubsp),
    Suite("gl-invariance", "qrank is invariant under coordinate changes", 200, _gl),
    Suite("geom-equiv", "vanishing-subspace and linear-solve oracles agree (r <= 2)", 200, _geom),
    Suite("maxrank", "codim(Q:Q') + maxrank(Q') >= qrank(f)", 300, _maxrank),
    Suite("minrank-lemma", "minimal-support combination has t <= rank <= t+s-2", 100, _bounded_combination),
    Suite("minrank-extract", "k-dim subspace with minrank >= s when (2^k-1)(s-1)+k <= r", 100,
          _minrank_extract),
    Suite("srk", "separable degeneration: separable, replays, qrank(g) >= ceil(k'/2)", 100, _srk),
    Suite("qbd-ext", "binary/ternary cubics reach qrank <= d - xi(d) over GF(p^k), k <= 6", 100,
          _qbd_ext),
    Suite("witness", "diagonal cubic n=3 never vanishes on a codim-2 subspace", 200, _witness),
]}

SUITE_IDS = {name: i for i, name in enumerate(SUITES)}


def run_suite(name: str, samples: int | None = None, seed: int = 0,
              field: FieldSpec = DEFAULT_FIELD_SPEC, budget: int = DEFAULT_BUDGET,
              threads: int = 1, max_failures: int = 5) -> SuiteResult:
    suite = SUITES[name]
    count = suite.default_samples if samples is None else samples
    ctx = Context(get_field(field), budget, threads)
    stream = SUITE_IDS[name]
    violations = over = 0
    failures: list = []
    tags: Counter = Counter()
    t0 = time.perf_counter()
    for i in range(count):
        rng = sample_rng(seed, stream, i)
        try:
            out = suite.run(ctx, rng, i)
        except BudgetExceeded:
            over += 1
            tags["budget-exceeded"] += 1
            continue
        except Exception as exc:  # any crash inside a property check is a violation
            out = Outcome(False, {"error": f"{type(exc).__name__}: {exc}",
                                  "where": traceback.format_exc(limit=-1).strip().splitlines()[-1]})
        if out.tag:
            tags[out.tag] += 1
        if not out.ok:
            violations += 1
            if len(failures) < max_failures:
                failures.append({"sample": i, **out.detail})
    return SuiteResult(name, suite.statement, count, violations, over, failures,
                       dict(sorted(tags.items())), time.perf_counter() - t0)


def run_all(seed: int = 0, field: FieldSpec = DEFAULT_FIELD_SPEC, budget: int = DEFAULT_BUDGET,
            threads: int = 1, samples: int | None = None) -> list[SuiteResult]:
    return [run_suite(name, samples, seed, field, budget, threads) for name in SUITES]


def report_json(results: list[SuiteResult], seed: int, field: FieldSpec) -> dict:
    return {"seed": seed, "field": str(field), "qrank_over": f"GF({field.q})",
            "suites": [r.to_json() for r in results],
            "total_violations": sum(r.violations for r in results),
            "total_budget_exceeded": sum(r.budget_exceeded for r in results)}


def format_table(results: list[SuiteResult]) -> str:
    head = f"{'suite':<16} {'samples':>7} {'violations':>10} {'budget':>6} {'runtime':>9}  statement"
    lines = [head, "-" * len(head)]
    for r in results:
        lines.append(f"{r.name:<16} {r.samples:>7} {r.violations:>10} {r.budget_exceeded:>6} "
                     f"{r.runtime:>8.2f}s  {r.statement}")
    return "\n".join(lines)
