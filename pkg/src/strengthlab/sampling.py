"""Seeded random objects.

Every sample draws from ``numpy.random.default_rng([seed, stream, index])``
(PCG64 seeded through SeedSequence), so any single sample can be regenerated
without replaying the ones before it.
"""

from __future__ import annotations

import itertools

import numpy as np

from .field import Field
from .forms import CubicForm, LinearForm, LQDecomposition, QuadraticForm, assemble, product


def sample_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, index])


def random_cubic(field: Field, n: int, rng: np.random.Generator, density: float = 1.0) -> CubicForm:
    """Each monomial gets a uniform coefficient with probability ``density``."""
    coeffs = {}
    for m in itertools.combinations_with_replacement(range(n), 3):
        if density >= 1.0 or rng.random() < density:
            coeffs[m] = int(field.random(rng))
    return CubicForm.from_dict(field, n, coeffs)


def random_linear(field: Field, n: int, rng: np.random.Generator) -> LinearForm:
    return LinearForm.of(field, field.random(rng, n))


def random_quadric(field: Field, n: int, rng: np.random.Generator, rank: int | None = None) -> QuadraticForm:
    """Uniform symmetric Gram matrix, or Σ_{i<rank} c_i·ℓ_i² for a rank cap."""
    if rank is None:
        g = field.random(rng, (n, n))
        upper = np.triu(g)
        return QuadraticForm.from_matrix(field, field.add(upper, np.triu(g, 1).T))
    acc = QuadraticForm.zero(field, n)
    for _ in range(rank):
        v = field.random(rng, n).reshape(-1, 1)
        c = int(field.random_nonzero(rng))
        acc = acc + QuadraticForm.from_matrix(field, field.mul(field.matmul(v, v.T), c))
    return acc


def random_lq_cubic(field: Field, n: int, length: int, rng: np.random.Generator) -> CubicForm:
    """Σ_{i<length} ℓ_i q_i with uniform ℓ's and q's: q-rank at most ``length``."""
    pairs = tuple((random_linear(field, n, rng), random_quadric(field, n, rng)) for _ in range(length))
    return assemble(LQDecomposition(field, n, pairs))


def block_separable_cubic(field: Field, n: int, length: int, rng: np.random.Generator) -> CubicForm:
    """Σ_{i<length} x_i q_i with each q_i a uniform quadric in x_length..x_{n-1}."""
    if not 0 < length < n:
        raise ValueError("need 0 < length < n")
    acc = CubicForm.zero(field, n)
    for i in range(length):
        g = random_quadric(field, n - length, rng).matrix
        full = np.zeros((n, n), dtype=np.int64)
        full[length:, length:] = g
        acc = acc + product(LinearForm.variable(field, n, i), QuadraticForm.from_matrix(field, full))
    return acc


def mixed_cubic(field: Field, n: int, rng: np.random.Generator) -> CubicForm:
    """Dense, sparse or short-decomposition cubic, chosen at random, to spread q-ranks out."""
    kind = int(rng.integers(3))
    if kind == 0:
        return random_cubic(field, n, rng)
    if kind == 1:
        return random_cubic(field, n, rng, density=0.5)
    return random_lq_cubic(field, n, int(rng.integers(1, n + 1)), rng)
