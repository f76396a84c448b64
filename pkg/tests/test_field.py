import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from strengthlab.field import (GF, FieldError, FieldSpec, embedding, field_extend,
                               first_irreducible, is_irreducible, is_prime)


def sympy_irreducible(coeffs, p):
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(coeffs)), t, modulus=p)
    return poly.is_irreducible


def test_prime_field_examples():
    F = GF(5)
    assert F.div(2, 2) == 1
    assert F.inv(2) == 3
    assert F.mul(2, 3) == 1


def test_gf25_generator_squared():
    F = GF(5, 2)
    assert F.spec.modulus == (2, 0, 1)          # t^2 + 2
    t = F.from_coeffs([0, 1])
    assert F.coeffs(F.mul(t, t)) == [3, 0]      # t^2 = -2 = 3


@pytest.mark.parametrize("p,e", [(5, 2), (5, 3), (5, 6), (7, 2), (7, 3), (11, 2)])
def test_moduli_are_irreducible_per_sympy(p, e):
    mod = first_irreducible(p, e)
    assert sympy_irreducible(mod, p)


def test_first_irreducible_is_smallest():
    # every lexicographically smaller monic candidate must be reducible
    p, e = 5, 3
    mod = first_irreducible(p, e)
    for tail in itertools.product(range(p), repeat=e):
        cand = tuple(reversed(tail)) + (1,)
        if cand == mod:
            break
        assert not sympy_irreducible(cand, p)


@given(st.lists(st.integers(0, 4), min_size=3, max_size=5).filter(lambda c: c[-1] == 1))
def test_irreducibility_agrees_with_sympy(coeffs):
    assert is_irreducible(coeffs, 5) == sympy_irreducible(coeffs, 5)


def test_bad_specs():
    for p in (2, 3, 4, 9):
        with pytest.raises(FieldError):
            FieldSpec(p)
    with pytest.raises(FieldError):
        FieldSpec(5, 2, (1, 0, 1))   # t^2 + 1 = (t-2)(t+2) over GF(5)
    with pytest.raises(FieldError):
        FieldSpec.parse("q=5")


def test_spec_parse_and_str():
    assert FieldSpec.parse("p=5") == FieldSpec(5)
    assert str(FieldSpec.parse(" p=5 , e=2 ")) == "p=5,e=2"


@pytest.mark.parametrize("e", [1, 2, 3])
def test_field_axioms_exhaustive_small(e):
    F = GF(5, e)
    xs = np.arange(F.q)
    a, b = np.meshgrid(xs, xs)
    # commutativity and inverses over the whole field
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.add(a, b), F.add(b, a))
    nz = xs[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(xs, F.neg(xs)) == 0)


def test_extension_multiplication_matches_polynomial_product():
    F = GF(5, 3)
    t = sympy.Symbol("t")
    mod = sympy.Poly(list(reversed(F.spec.modulus)), t, modulus=5)
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = (int(x) for x in rng.integers(0, F.q, 2))
        pa = sympy.Poly(list(reversed(F.coeffs(a))), t, modulus=5)
        pb = sympy.Poly(list(reversed(F.coeffs(b))), t, modulus=5)
        prod = (pa * pb).rem(mod)
        want = [int(c) % 5 for c in reversed(prod.all_coeffs())]
        want += [0] * (3 - len(want))
        assert F.coeffs(F.mul(a, b)) == want


@given(st.integers(0, 124), st.integers(0, 124), st.integers(0, 124))
def test_ring_laws_gf125(a, b, c):
    F = GF(5, 3)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_power_and_division():
    F = GF(5, 2)
    for a in range(1, F.q):
        assert F.power(a, F.q - 1) == 1
        assert F.div(a, a) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_field_extend_and_embedding():
    base = GF(5)
    assert field_extend(base, 1) is base
    ext = field_extend(base, 2)
    assert ext.q == 25
    emb = embedding(base, ext)
    assert emb(3) == ext.from_int(3)
    assert ext.coeffs(emb(3)) == [3, 0]


@pytest.mark.parametrize("base_e,k", [(1, 2), (1, 6), (2, 2), (2, 3)])
def test_embedding_is_homomorphism(base_e, k):
    base = GF(5, base_e)
    ext = field_extend(base, k)
    emb = embedding(base, ext)
    rng = np.random.default_rng(base_e * 10 + k)
    for a, b in rng.integers(0, base.q, size=(1000, 2)):
        a, b = int(a), int(b)
        assert emb(base.add(a, b)) == ext.add(emb(a), emb(b))
        assert emb(base.mul(a, b)) == ext.mul(emb(a), emb(b))
    assert emb(1) == 1


def test_scalar_wrapper():
    F = GF(5)
    a, b = F(2), F(3)
    assert (a * b).value == 1
    assert (a / a).value == 1
    assert (a - b).value == 4
    with pytest.raises(FieldError):
        _ = a + GF(7)(1)
    with pytest.raises(ZeroDivisionError):
        _ = a / F(0)


def test_json_round_trip():
    F = GF(5, 2)
    for a in range(F.q):
        assert F.from_json(F.to_json(a)) == a
    assert GF(5).to_json(4) == 4


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
