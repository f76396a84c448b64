"""Hand-writable polynomial files.

::

    field p=5,e=2
    vars x y z
    f = 1*x*x*x + 1*y*y*y - 2*x*y*z

Whitespace is insignificant and ``#`` starts a comment.  ``field`` and
``vars`` lines are optional; without ``vars`` the variables are numbered in
order of first appearance.  Coefficients are integers and land in the prime
subfield.  ``f = 0`` or an empty right-hand side gives the zero form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .field import FieldSpec, get_field
from .forms import CubicForm


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class PolynomialFile:
    spec: FieldSpec | None
    names: tuple[str, ...]
    form: CubicForm


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _split_terms(expr: str) -> list[tuple[int, str]]:
    expr = expr.replace(" ", "").replace("\t", "")
    if not expr:
        return []
    if expr[0] not in "+-":
        expr = "+" + expr
    parts = re.findall(r"([+-])([^+-]*)", expr)
    if "".join(s + b for s, b in parts) != expr:
        raise ParseError(f"cannot split {expr!r} into terms")
    out = []
    for sign, body in parts:
        if not body:
            raise ParseError("empty term")
        out.append((-1 if sign == "-" else 1, body))
    return out


def parse_polynomial(text: str, default: FieldSpec | None = None) -> PolynomialFile:
    """Parse the text format; the field line, if present, overrides ``default``."""
    spec: FieldSpec | None = None
    names: list[str] | None = None
    expr: list[str] = []
    in_expr = False
    for raw in text.splitlines():
        line = _strip(raw)
        if not line:
            continue
        head = line.split(None, 1)
        if head[0] == "field" and not in_expr:
            if spec is not None:
                raise ParseError("duplicate field line")
            try:
                spec = FieldSpec.parse(head[1] if len(head) > 1 else "")
            except ValueError as exc:
                raise ParseError(f"bad field line: {exc}") from None
        elif head[0] == "vars" and not in_expr:
            if names is not None:
                raise ParseError("duplicate vars line")
            names = line.split()[1:]
            for v in names:
                if not _NAME.match(v):
                    raise ParseError(f"bad variable name {v!r}")
            if len(set(names)) != len(names):
                raise ParseError("repeated variable name")
        elif not in_expr:
            m = re.match(r"f\s*=(.*)$", line)
            if not m:
                raise ParseError(f"unexpected line {line!r}")
            in_expr = True
            expr.append(m.group(1))
        else:
            expr.append(line)
    use = spec or default
    if use is None:
        raise ParseError("no field given")
    fld = get_field(use)
    declared = names is not None
    names = list(names or [])
    index = {v: i for i, v in enumerate(names)}
    coeffs: dict[tuple[int, ...], int] = {}
    for sign, body in _split_terms("".join(expr)):
        factors = body.split("*")
        coef = 1
        variables = []
        for tok in factors:
            if re.fullmatch(r"\d+", tok):
                if variables:
                    raise ParseError(f"coefficient after a variable in {body!r}")
                coef *= int(tok)
            elif _NAME.match(tok):
                variables.append(tok)
            else:
                raise ParseError(f"bad factor {tok!r} in {body!r}")
        if not variables and coef == 0:
            continue
        if len(variables) != 3:
            raise ParseError(f"term {body!r} has degree {len(variables)}, expected 3")
        idx = []
        for v in variables:
            if v not in index:
                if declared:
                    raise ParseError(f"undeclared variable {v!r}")
                index[v] = len(names)
                names.append(v)
            idx.append(index[v])
        key = tuple(sorted(idx))
        coeffs[key] = coeffs.get(key, 0) + sign * coef
    n = len(names)
    form = CubicForm.from_dict(fld, n, {k: fld.from_int(c % use.p) for k, c in coeffs.items()})
    return PolynomialFile(spec, tuple(names), form)


def format_polynomial(f: CubicForm, names: tuple[str, ...] | None = None) -> str:
    """Inverse of :func:`parse_polynomial` for prime fields."""
    if f.field.spec.e != 1:
        raise ValueError("the text format only carries prime-field coefficients")
    names = names or tuple(f"x{i + 1}" for i in range(f.n))
    if len(names) != f.n:
        raise ValueError("wrong number of variable names")
    body = " + ".join(f"{c}*" + "*".join(names[i] for i in m) for m, c in f.terms) or "0"
    return f"field {f.field.spec}\nvars {' '.join(names)}\nf = {body}\n"
