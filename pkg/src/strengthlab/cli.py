"""``strengthlab`` command line.

Exit codes: 0 ok, 1 usage or parse error, 2 budget exhausted, 3 a property
violation or failed certificate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds, checks, serialize
from .degeneration import PipelineError, separable_degenerate, surjection_pipeline, verify_certificate
from .field import DEFAULT_FIELD_SPEC, FieldError, FieldSpec, get_field
from .linalg import DEFAULT_BUDGET, BudgetExceeded, Subspace, random_subspace
from .qrank import decompose_via_subspace, qrank_linear_solve_oracle, qrank_oracle
from .quadspace import (ConstructionFailed, PreconditionError, QuadricSubspace, extract_high_minrank,
                        minmax_rank)
from .textformat import ParseError, parse_polynomial
from .witness import certify_diagonal_qrank

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: FieldSpec = DEFAULT_FIELD_SPEC
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    output: Path | None = None

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise UsageError("budget must be >= 1")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")


def _default_budget() -> int:
    raw = os.environ.get("STRENGTHLAB_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"STRENGTHLAB_BUDGET={raw!r} is not an integer") from None


def _config(args) -> RunConfig:
    try:
        spec = FieldSpec.parse(args.field) if args.field else DEFAULT_FIELD_SPEC
    except (FieldError, ValueError) as exc:
        raise UsageError(f"bad --field: {exc}") from None
    budget = args.budget if args.budget is not None else _default_budget()
    return RunConfig(spec, args.seed, budget, args.threads, Path(args.out) if args.out else None)


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = serialize.dumps(payload)
    if cfg.output:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)


def _load_form(args, cfg: RunConfig):
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    parsed = parse_polynomial(text, cfg.field)
    if parsed.spec is not None and args.field and parsed.spec != cfg.field:
        raise UsageError(f"--field {cfg.field} conflicts with the file's field {parsed.spec}")
    return parsed


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_qrank(args, cfg: RunConfig) -> int:
    parsed = _load_form(args, cfg)
    f = parsed.form
    if args.oracle == "linear-solve":
        res = qrank_linear_solve_oracle(f, max_r=args.max_r, budget=cfg.budget)
        decomp = res.decomposition
    else:
        res = qrank_oracle(f, max_r=args.max_r, budget=cfg.budget, threads=cfg.threads)
        decomp = decompose_via_subspace(f, res.witness) if res.exact else None
    payload = {
        "r": res.r if res.exact else None,
        "verdict": res.verdict,
        "exact": res.exact,
        "qrank_over": f"GF({f.field.q})",
        "field": f.field.spec.to_json(),
        "vars": list(parsed.names),
        "witness_basis": res.witness.to_json() if res.witness is not None else None,
        "decomposition": serialize.decomposition_to_json(decomp) if decomp is not None else None,
        "enumeration_count": res.enumeration_count,
        "elapsed": round(res.elapsed, 6),
    }
    _emit(cfg, payload)
    return EXIT_OK


def cmd_degenerate(args, cfg: RunConfig) -> int:
    f = _load_form(args, cfg).form
    if args.pipeline:
        try:
            rep = surjection_pipeline(f, args.pipeline, cfg.budget, cfg.threads)
        except PipelineError as exc:
            if isinstance(exc.cause, BudgetExceeded):
                raise exc.cause from None
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VIOLATION
        payload = serialize.report_to_json(rep)
        cert_json = payload["certificate"]
    else:
        if f.is_zero():
            print("error: [separable_degenerate] the zero form", file=sys.stderr)
            return EXIT_USAGE
        sep = separable_degenerate(f, cfg.budget, cfg.threads)
        payload = serialize.separable_to_json(sep)
        cert_json = payload["certificate"]
    # re-verify the serialized form, not just the in-memory one
    verdict = verify_certificate(serialize.certificate_from_json(json.loads(json.dumps(cert_json))))
    if not verdict:
        print(f"error: certificate fails at step {verdict.failed_step}: {verdict.reason}", file=sys.stderr)
        return EXIT_VIOLATION
    payload["verified"] = True
    _emit(cfg, payload)
    return EXIT_OK


def _load_quadrics(args, cfg: RunConfig) -> tuple[QuadricSubspace, int | None]:
    path = Path(args.input)
    if path.suffix == ".json":
        obj = json.loads(path.read_text())
        fld = serialize.field_from_json(obj["field"]) if "field" in obj else get_field(cfg.field)
        return serialize.quadric_space_from_json(fld, obj), None
    f = _load_form(args, cfg).form
    res = qrank_oracle(f, budget=cfg.budget, threads=cfg.threads)
    d = decompose_via_subspace(f, res.witness)
    return QuadricSubspace.span(f.field, f.n, d.quadrics), res.r


def cmd_minrank_extract(args, cfg: RunConfig) -> int:
    space, r_found = _load_quadrics(args, cfg)
    r = args.r if args.r is not None else r_found
    if r is None:
        raise UsageError("--r is required for quadric-list input")
    try:
        sub = extract_high_minrank(space, args.k, args.s, r, cfg.budget)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    except ConstructionFailed as exc:
        _emit(cfg, {"ok": False, "error": str(exc),
                    "refuting_subspace": serialize.quadric_space_to_json(exc.refuting),
                    "codim": exc.codim, "maxrank": exc.maxrank, "r": exc.r})
        return EXIT_VIOLATION
    lo, hi = minmax_rank(sub, cfg.budget)
    if sub.dim != args.k or lo < args.s or not space.contains_subspace(sub):
        print("error: extracted subspace fails its postcondition", file=sys.stderr)
        return EXIT_VIOLATION
    _emit(cfg, {"ok": True, "k": args.k, "s": args.s, "r": r, "dim": sub.dim, "minrank": lo,
                "maxrank": hi, "subspace": serialize.quadric_space_to_json(sub),
                "field": space.field.spec.to_json()})
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    fld = get_field(cfg.field)
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if args.subspace:
        obj = json.loads(Path(args.subspace).read_text())
        rows = obj["basis"] if isinstance(obj, dict) else obj
        try:
            w = Subspace.from_json(fld, 3 * n, rows)
        except ValueError as exc:
            raise UsageError(f"bad subspace file: {exc}") from None
    else:
        w = random_subspace(fld, 3 * n, 2 * n + 1, np.random.default_rng([cfg.seed]))
    try:
        cert = certify_diagonal_qrank(fld, n, w)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = serialize.diagonal_to_json(cert)
    if not serialize.diagonal_from_json(json.loads(json.dumps(payload))).verify():
        print("error: certificate does not verify", file=sys.stderr)
        return EXIT_VIOLATION
    payload["verified"] = True
    _emit(cfg, payload)
    return EXIT_OK


def cmd_paper_check(args, cfg: RunConfig) -> int:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    results = [checks.run_suite(name, args.samples, cfg.seed, cfg.field, cfg.budget, cfg.threads)
               for name in names]
    print(checks.format_table(results))
    report = checks.report_json(results, cfg.seed, cfg.field)
    if cfg.output:
        cfg.output.write_text(serialize.dumps(report))
    if report["total_violations"]:
        return EXIT_VIOLATION
    if report["total_budget_exceeded"]:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_bounds(args, cfg: RunConfig) -> int:
    d = args.d
    payload = {"d": d, "xi": bounds.xi(d), "surjection_lhs": bounds.surjection_lhs(d) if d >= 1 else None,
               "surjection_min_qrank": bounds.surjection_min_qrank(d) if d >= 1 else None,
               "required_minrank": bounds.required_minrank(d),
               "smallest_admissible_qrank": bounds.smallest_admissible_qrank(d),
               "exp_regime_implies_surjection": bounds.exp_regime_implies_surjection(d) if d >= 1 else None}
    if args.r is not None:
        payload["r"] = args.r
        payload["exp_threshold_check"] = bounds.exp_threshold_check(args.r, d)
    _emit(cfg, payload)
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default=None, help="p=<p>[,e=<e>] (default p=5)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration cap (default $STRENGTHLAB_BUDGET or 10^8)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-r", dest="max_r", type=int, default=None)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = _Parser(prog="strengthlab", description="q-rank of cubic forms over finite fields")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("qrank", parents=[common], help="q-rank with witness and decomposition")
    q.add_argument("--input", required=True)
    q.add_argument("--oracle", choices=["vanishing", "linear-solve"], default="vanishing")
    q.set_defaults(func=cmd_qrank)

    d = sub.add_parser("degenerate", parents=[common], help="separable degeneration certificate")
    d.add_argument("--input", required=True)
    d.add_argument("--pipeline", type=int, default=None, metavar="D",
                   help="also run the reduction towards a surjection onto cubics in D variables")
    d.set_defaults(func=cmd_degenerate)

    m = sub.add_parser("minrank-extract", parents=[common], help="high-minrank quadric subspace")
    m.add_argument("--input", required=True, help="polynomial file, or .json list of Gram matrices")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--s", type=int, required=True)
    m.add_argument("--r", type=int, default=None)
    m.set_defaults(func=cmd_minrank_extract)

    w = sub.add_parser("witness", parents=[common], help="diagonal-cubic non-vanishing certificate")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--subspace", default=None, help="JSON basis rows of a codim n-1 subspace")
    w.set_defaults(func=cmd_witness)

    c = sub.add_parser("paper-check", parents=[common], help="run the property suites")
    c.add_argument("--suite", required=True, choices=[*checks.SUITES, "all"])
    c.add_argument("--samples", type=int, default=None)
    c.set_defaults(func=cmd_paper_check)

    b = sub.add_parser("bounds", parents=[common], help="bound arithmetic for a target dimension")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--r", type=int, default=None)
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        return args.func(args, cfg)
    except (UsageError, ParseError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: bad input file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
