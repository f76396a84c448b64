import numpy as np
import pytest
from hypothesis import given, strategies as st

from strengthlab.field import GF, FieldSpec
from strengthlab.forms import CubicForm
from strengthlab.sampling import random_cubic
from strengthlab.textformat import ParseError, format_polynomial, parse_polynomial

P5 = FieldSpec(5)


def test_basic_file():
    pf = parse_polynomial("field p=5\nvars x y\nf = 1*x*x*x + 1*y*y*y\n")
    assert pf.names == ("x", "y")
    assert pf.form == CubicForm.from_dict(GF(5), 2, {(0, 0, 0): 1, (1, 1, 1): 1})
    assert pf.spec == P5


def test_defaults_and_ordering():
    pf = parse_polynomial("f = y*x*x - 2*z*z*z", P5)
    assert pf.names == ("y", "x", "z") and pf.spec is None
    assert pf.form.coeffs == {(0, 1, 1): 1, (2, 2, 2): 3}


def test_comments_multiline_and_signs():
    text = """
    # header
    vars a b   # two of them
    f = 3*a*a*b
        - a*a*b     # cancels partly
        + 7*b*b*b
    """
    pf = parse_polynomial(text, P5)
    assert pf.form.coeffs == {(0, 0, 1): 2, (1, 1, 1): 2}


@pytest.mark.parametrize("text", ["f =", "f = 0", "vars x\nf = 0*x*x*x", "vars x y\nf = x*x*y - x*x*y"])
def test_zero_forms(text):
    assert parse_polynomial(text, P5).form.is_zero()


@pytest.mark.parametrize("text", [
    "f = x*y",                     # degree 2
    "f = x*x*x*x",                 # degree 4
    "vars x\nf = x*x*y",           # undeclared
    "vars x x\nf = x*x*x",         # repeated
    "f = x**3",                    # bad factor
    "g = x*x*x",                   # not an f line
    "f = x*2*x*x",                 # coefficient after variable
    "field p=4\nf = x*x*x",        # not a prime
    "field p=5\nfield p=7\nf = x*x*x",
    "f = x*x*x +",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_polynomial(text, P5)


def test_missing_field():
    with pytest.raises(ParseError):
        parse_polynomial("f = x*x*x")


def test_field_line_overrides_default():
    pf = parse_polynomial("field p=7\nf = 6*x*x*x", P5)
    assert pf.form.field == GF(7) and pf.form.coeffs == {(0, 0, 0): 6}


def test_extension_field_coefficients_land_in_prime_subfield():
    pf = parse_polynomial("field p=5,e=2\nf = 7*x*y*z")
    assert pf.form.coeffs == {(0, 1, 2): 2}


@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_round_trip(seed, n):
    f = random_cubic(GF(7), n, np.random.default_rng(seed), density=0.5)
    back = parse_polynomial(format_polynomial(f))
    assert back.form == f or (f.is_zero() and back.form.is_zero())


def test_format_rejects_extensions():
    with pytest.raises(ValueError):
        format_polynomial(CubicForm.zero(GF(5, 2), 1))
