"""Integer bound arithmetic: the ξ function, the surjection threshold, and exp comparisons.

Everything here is exact integer / rational arithmetic; no floating point.
"""

from __future__ import annotations

import functools
from math import comb, isqrt

import numpy as np


def xi(d: int) -> int:
    """floor((sqrt(8d + 17) - 3) / 2), via the integer square root."""
    if d < 0:
        raise ValueError("d must be non-negative")
    # floor((s - 3)/2) only depends on floor(s) = isqrt(8d + 17)
    return (isqrt(8 * d + 17) - 3) // 2


def _xi_cost(k: int) -> int:
    return comb(k + 1, 2) + k - 1


def xi_combinatorial(d: int) -> int:
    """Largest k >= 0 with C(k+1, 2) + k - 1 <= d, by direct search."""
    if d < 0:
        raise ValueError("d must be non-negative")
    k = 0
    while _xi_cost(k + 1) <= d:
        k += 1
    return k


def xi_combinatorial_table(dmax: int) -> np.ndarray:
    """xi_combinatorial(d) for d = 0..dmax in one sweep (k only ever increases)."""
    out = np.zeros(dmax + 1, dtype=np.int64)
    k = 0
    nxt = _xi_cost(1)
    for d in range(dmax + 1):
        while nxt <= d:
            k += 1
            nxt = _xi_cost(k + 1)
        out[d] = k
    return out


def min_r_with_xi_at_least(a: int) -> int:
    """Smallest r with xi(r) >= a; xi(r) >= a iff C(a+1, 2) + a - 1 <= r."""
    if a <= 0:
        return 0
    return _xi_cost(a)


def surjection_lhs(d: int) -> int:
    """(2^d - 1)(d^2 2^d + 2(d+1)d - 1) + d."""
    return (2**d - 1) * (d * d * 2**d + 2 * (d + 1) * d - 1) + d


def required_minrank(d: int, m: int | None = None) -> int:
    """d·n·2^n + 2(n+1)·m with n = d quadrics and m linear forms (m defaults to d)."""
    m = d if m is None else m
    return d * d * 2**d + 2 * (d + 1) * m


def surjection_min_qrank(d: int) -> int:
    """Smallest q-rank r with surjection_lhs(d) <= xi(r) / 2."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return min_r_with_xi_at_least(2 * surjection_lhs(d))


# ----------------------------------------------------------------------
# exp comparisons
# ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def floor_exp(n: int) -> int:
    """floor(e^n) for an integer n >= 0, from a rigorous Taylor enclosure.

    Terms are carried as integer intervals scaled by 2^bits (floor for the
    lower end, ceiling for the upper).  e^n is irrational for n >= 1, so with
    enough bits the enclosure avoids every integer; bits double until it does.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    bits = 64
    while True:
        one = 1 << bits
        lo_term = hi_term = one
        lo = hi = 0
        k = 0
        while True:
            lo += lo_term
            hi += hi_term
            k += 1
            lo_term = lo_term * n // k
            hi_term = -(-hi_term * n // k)
            # once k + 1 > 2n the tail Σ_{j>=k} is at most twice the current term
            if k + 1 > 2 * n and hi_term <= 1:
                hi += 2 * hi_term
                break
        if lo >> bits == hi >> bits:
            return lo >> bits
        bits *= 2


def log_at_least(r: int, x: int) -> bool:
    """log(r) >= x for integers r >= 1, x >= 0 (natural log), exactly."""
    if r < 1:
        raise ValueError("r must be positive")
    if x <= 0:
        return True
    # e^x is not an integer, so e^x <= r iff floor(e^x) < r
    return r > floor_exp(x)


EXP_THRESHOLD_EXPONENT = 240


def exp_threshold_check(r: int, d: int) -> bool:
    """True iff r > exp(240) and d <= log(r) / 3."""
    if r < 1:
        raise ValueError("r must be positive")
    if d < 0:
        raise ValueError("d must be non-negative")
    return log_at_least(r, EXP_THRESHOLD_EXPONENT) and log_at_least(r, 3 * d)


def surjection_inequality_holds(r: int, d: int) -> bool:
    """surjection_lhs(d) <= xi(r) / 2, decided without any square root."""
    return r >= surjection_min_qrank(d)


def smallest_admissible_qrank(d: int) -> int:
    """Least r with exp_threshold_check(r, d) true."""
    if d < 0:
        raise ValueError("d must be non-negative")
    return max(floor_exp(EXP_THRESHOLD_EXPONENT), floor_exp(3 * d)) + 1


def exp_regime_implies_surjection(d: int) -> bool:
    """Whether every r passing exp_threshold_check(r, d) satisfies the surjection inequality at d.

    The inequality is monotone in r, so the least admissible r decides it.
    """
    return surjection_inequality_holds(smallest_admissible_qrank(d), d)


def exp_regime_gaps(dmax: int) -> list[int]:
    """The d in 1..dmax where the exp regime does not force the surjection inequality."""
    return [d for d in range(1, dmax + 1) if not exp_regime_implies_surjection(d)]
