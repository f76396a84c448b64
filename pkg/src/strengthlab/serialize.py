"""JSON encoding of forms, subspaces and certificates.

Scalars are integers in a prime field and low-degree-first coefficient lists
in an extension.  :func:`dumps` sorts keys so equal objects give equal bytes.
"""

from __future__ import annotations

import json

from .degeneration import (CocharacterLimit, CoordinateChange, DegenerationCertificate,
                           ReductionReport, SeparableDegeneration)
from .field import Field, FieldSpec, get_field
from .forms import CubicForm, LinearForm, LQDecomposition, QuadraticForm
from .linalg import Subspace
from .quadspace import QuadricSubspace
from .witness import DiagonalCertificate, PhaseCertificate, TripleMatrix


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def field_to_json(fld: Field) -> dict:
    return fld.spec.to_json()


def field_from_json(obj: dict) -> Field:
    mod = obj.get("modulus")
    return get_field(FieldSpec(obj["p"], obj.get("e", 1), tuple(mod) if mod else None))


def _scalars(fld: Field, rows):
    return [[fld.to_json(int(x)) for x in row] for row in rows]


def _unscalars(fld: Field, rows):
    return [[fld.from_json(x) for x in row] for row in rows]


def cubic_to_json(f: CubicForm) -> dict:
    return {"n": f.n, "terms": [[list(m), f.field.to_json(c)] for m, c in f.terms]}


def cubic_from_json(fld: Field, obj: dict) -> CubicForm:
    return CubicForm.from_dict(fld, obj["n"], {tuple(m): fld.from_json(c) for m, c in obj["terms"]})


def linear_to_json(l: LinearForm) -> list:
    return [l.field.to_json(c) for c in l.coeffs]


def quadric_to_json(q: QuadraticForm) -> list:
    return _scalars(q.field, q.gram)


def quadric_from_json(fld: Field, gram) -> QuadraticForm:
    return QuadraticForm.from_matrix(fld, _unscalars(fld, gram))


def subspace_to_json(w: Subspace) -> dict:
    return {"ambient_dim": w.ambient_dim, "basis": w.to_json()}


def subspace_from_json(fld: Field, obj: dict) -> Subspace:
    return Subspace.from_json(fld, obj["ambient_dim"], obj["basis"])


def decomposition_to_json(d: LQDecomposition) -> list:
    return [{"linear": linear_to_json(l), "quadric": quadric_to_json(q)} for l, q in d.pairs]


def quadric_space_to_json(space: QuadricSubspace) -> dict:
    return {"n": space.n, "basis": space.to_json()}


def quadric_space_from_json(fld: Field, obj: dict) -> QuadricSubspace:
    return QuadricSubspace.span(fld, obj["n"], [quadric_from_json(fld, g) for g in obj["basis"]])


def certificate_to_json(cert: DegenerationCertificate) -> dict:
    fld = cert.start.field
    steps = []
    for step in cert.steps:
        if isinstance(step, CoordinateChange):
            steps.append({"kind": "change", "matrix": _scalars(fld, step.matrix)})
        else:
            steps.append({"kind": "limit", "weights": list(step.weights)})
    return {"field": field_to_json(fld), "start": cubic_to_json(cert.start),
            "steps": steps, "end": cubic_to_json(cert.end)}


def certificate_from_json(obj: dict) -> DegenerationCertificate:
    fld = field_from_json(obj["field"])
    steps = []
    for s in obj["steps"]:
        if s["kind"] == "change":
            steps.append(CoordinateChange.of(_unscalars(fld, s["matrix"])))
        elif s["kind"] == "limit":
            steps.append(CocharacterLimit(tuple(s["weights"])))
        else:
            raise ValueError(f"unknown step kind {s['kind']!r}")
    return DegenerationCertificate(cubic_from_json(fld, obj["start"]), tuple(steps),
                                   cubic_from_json(fld, obj["end"]))


def separable_to_json(sep: SeparableDegeneration) -> dict:
    return {"g": cubic_to_json(sep.g), "bound": sep.bound, "split": [list(b) for b in sep.split],
            "r": sep.r, "k_prime": sep.k_prime, "candidate_qranks": list(sep.candidate_qranks),
            "chosen": sep.chosen, "certificate": certificate_to_json(sep.certificate)}


def report_to_json(rep: ReductionReport) -> dict:
    return {"g": cubic_to_json(rep.g), "split": [list(b) for b in rep.split],
            "linears": [linear_to_json(l) for l in rep.linears],
            "quadrics": [quadric_to_json(q) for q in rep.quadrics],
            "minrank_achieved": rep.minrank_achieved, "required_minrank": rep.required_minrank,
            "deg2_hypothesis_met": rep.deg2_hypothesis_met, "bound": rep.bound,
            "extraction": rep.extraction, "g_prime": cubic_to_json(rep.g_prime),
            "certificate": certificate_to_json(rep.certificate)}


def phase_to_json(c: PhaseCertificate) -> dict:
    fld = c.field
    return {"field": field_to_json(fld), "m": c.original.m,
            "matrix": [_scalars(fld, row) for row in c.original.entries],
            "trace": [list(t) for t in c.trace], "r": c.r, "s": c.s, "t": c.t,
            "basis": _scalars(fld, c.basis),
            "pivot_coefficient": None if c.coefficient is None else fld.to_json(c.coefficient)}


def phase_from_json(obj: dict) -> PhaseCertificate:
    fld = field_from_json(obj["field"])
    m = obj["m"]
    entries = [_unscalars(fld, row) for row in obj["matrix"]]
    tm = TripleMatrix.of(fld, entries) if entries else TripleMatrix(fld, m, ())
    coef = obj["pivot_coefficient"]
    return PhaseCertificate(fld, tm, tuple(tuple(t) for t in obj["trace"]), obj["r"], obj["s"],
                            obj["t"], tuple(tuple(r) for r in _unscalars(fld, obj["basis"])),
                            None if coef is None else fld.from_json(coef))


def diagonal_to_json(c: DiagonalCertificate) -> dict:
    return {"n": c.n, "subspace": subspace_to_json(c.subspace), "phases": phase_to_json(c.phases)}


def diagonal_from_json(obj: dict) -> DiagonalCertificate:
    phases = phase_from_json(obj["phases"])
    return DiagonalCertificate(obj["n"], subspace_from_json(phases.field, obj["subspace"]), phases)
