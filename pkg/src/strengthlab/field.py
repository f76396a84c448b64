"""Exact arithmetic in GF(p) and GF(p^e) for primes p >= 5.

Field elements are plain non-negative integers below q = p^e.  For e > 1 the
integer encodes the coefficient list of a polynomial in the generator t,
low degree first, as base-p digits: ``a = c_0 + c_1 p + ... + c_{e-1} p^{e-1}``.
That encoding is canonical, so equality of elements is integer equality.

Every operation on :class:`Field` accepts either Python ints or integer numpy
arrays (broadcasting as numpy does).  Extension-field multiplication goes
through discrete log / exp tables; addition is digit-wise.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

MAX_TABLE_ORDER = 1 << 24


class FieldError(ValueError):
    """Invalid field parameters or mixing elements of different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ----------------------------------------------------------------------
# Polynomials over GF(p): coefficient lists, low degree first, trimmed.
# ----------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _poly_powmod(a: list[int], k: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while k:
        if k & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        k >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over GF(p) (coefficients low degree first)."""
    f = _trim([c % p for c in poly])
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(deg // 2):
        xp = _poly_powmod(xp, p, f, p)
        if len(_poly_gcd(f, _poly_sub(xp, x, p), p)) != 1:
            return False
    return True


def first_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree.

    Candidates t^degree + c_{degree-1} t^{degree-1} + ... + c_0 are scanned in
    increasing order of the integer whose base-p digits are (c_0, c_1, ...).
    """
    for code in range(p**degree):
        coeffs = []
        x = code
        for _ in range(degree):
            coeffs.append(x % p)
            x //= p
        poly = tuple(coeffs) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ----------------------------------------------------------------------
# Field specification and arithmetic
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e); ``modulus`` is monic, low degree first, present iff e > 1."""

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.p in (2, 3):
            raise FieldError("characteristic 2 and 3 are not supported")
        if self.e < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.e}")
        if self.e == 1:
            if self.modulus is not None:
                raise FieldError("prime fields carry no modulus")
            return
        if self.modulus is None:
            object.__setattr__(self, "modulus", first_irreducible(self.p, self.e))
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.e}")
        if not is_irreducible(mod, self.p):
            raise FieldError(f"modulus {list(mod)} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.e

    def __str__(self) -> str:
        return f"p={self.p}" if self.e == 1 else f"p={self.p},e={self.e}"

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``p=5`` or ``p=5,e=2``."""
        parts = {}
        for chunk in text.replace(" ", "").split(","):
            if not chunk:
                continue
            key, sep, val = chunk.partition("=")
            if not sep or key not in ("p", "e") or key in parts:
                raise FieldError(f"bad field spec {text!r}")
            try:
                parts[key] = int(val)
            except ValueError:
                raise FieldError(f"bad field spec {text!r}") from None
        if "p" not in parts:
            raise FieldError(f"field spec {text!r} lacks p")
        return cls(parts["p"], parts.get("e", 1))

    def to_json(self) -> dict:
        out = {"p": self.p, "e": self.e}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out


class Field:
    """Arithmetic in GF(p^e) on integer-encoded elements (ints or numpy arrays)."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.q = spec.q
        self._half = None
        if self.e > 1:
            if self.q > MAX_TABLE_ORDER:
                raise FieldError(f"GF({self.p}^{self.e}) is too large for table arithmetic")
            self._build_tables()

    # -- construction ---------------------------------------------------

    def _poly_of(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return _trim(out)

    def _int_of(self, poly: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(poly))

    def _build_tables(self) -> None:
        p, q, mod = self.p, self.q, list(self.spec.modulus)
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for cand in range(2, q):
            poly = self._poly_of(cand)
            if all(_poly_powmod(poly, order // f, mod, p) != [1] for f in factors):
                gen = poly
                break
        assert gen is not None
        exp = np.zeros(order, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = [1]
        for k in range(order):
            v = self._int_of(cur)
            exp[k] = v
            log[v] = k
            cur = _poly_mod(_poly_mul(cur, gen, p), mod, p)
        self._exp = exp
        self._log = log
        self._pows = [p**i for i in range(self.e)]

    # -- identity -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # -- conversions ----------------------------------------------------

    def from_int(self, x):
        """Image of an integer (or integer array) in the prime subfield."""
        if isinstance(x, np.ndarray):
            return np.asarray(x, dtype=np.int64) % self.p
        return int(x) % self.p

    def coeffs(self, a: int) -> list[int]:
        """Coefficient list of an element, low degree first, length e."""
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.e:
            raise FieldError(f"too many coefficients for {self!r}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def to_json(self, a: int):
        return int(a) if self.e == 1 else self.coeffs(int(a))

    def from_json(self, obj) -> int:
        """Inverse of :meth:`to_json`; bare integers denote prime-subfield elements."""
        if isinstance(obj, list):
            return self.from_coeffs(obj)
        return self.from_int(obj)

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, x) -> "Scalar":
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldError("element of a different field")
            return x
        if isinstance(x, (list, tuple)):
            return Scalar(self, self.from_coeffs(x))
        return Scalar(self, self.from_int(x))

    # -- arithmetic -----------------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        for pw in self._pows:
            out = out + ((a // pw + b // pw) % p) * pw
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        for pw in self._pows:
            out = out + ((-(a // pw)) % p) * pw
        return out

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            prod = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, prod)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a):
        if isinstance(a, np.ndarray):
            if np.any(a == 0):
                raise ZeroDivisionError("inverse of zero")
            if self.e == 1:
                return np.array([pow(int(x), self.p - 2, self.p) for x in a.ravel()],
                                dtype=np.int64).reshape(a.shape)
            return self._exp[(-self._log[a]) % (self.q - 1)]
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(int(a), self.p - 2, self.p)
        return int(self._exp[(-int(self._log[a])) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if self.e == 1:
            return pow(int(a), k, self.p)
        if a == 0:
            return 1 if k == 0 else 0
        return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])

    @property
    def half(self) -> int:
        if self._half is None:
            self._half = self.inv(2)
        return self._half

    def sum(self, arr: np.ndarray, axis: int = 0):
        """Field sum along an axis."""
        arr = np.asarray(arr, dtype=np.int64)
        if self.e == 1:
            return arr.sum(axis=axis) % self.p
        arr = np.moveaxis(arr, axis, 0)
        if arr.shape[0] == 0:
            return np.zeros(arr.shape[1:], dtype=np.int64)
        # digit-wise sums cannot overflow for the table-sized fields allowed here
        out = np.zeros(arr.shape[1:], dtype=np.int64)
        for pw in self._pows:
            out = out + ((arr // pw) % self.p).sum(axis=0) % self.p * pw
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        # (..., n, k) x (k, m): accumulate over the shared index
        k = a.shape[-1]
        out = None
        for i in range(k):
            term = self.mul(a[..., i, None], b[i])
            out = term if out is None else self.add(out, term)
        if out is None:
            return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        return out

    def random(self, rng: np.random.Generator, size=None):
        if size is None:
            return int(rng.integers(0, self.q))
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator, size=None):
        if size is None:
            return int(rng.integers(1, self.q))
        return rng.integers(1, self.q, size=size, dtype=np.int64)

    def eval_poly(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate a polynomial with field coefficients (low degree first) at x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc


@functools.lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> Field:
    return Field(spec)


def GF(p: int, e: int = 1) -> Field:
    """Field with the default (smallest irreducible) modulus."""
    return get_field(FieldSpec(p, e))


DEFAULT_FIELD_SPEC = FieldSpec(5)


class Scalar:
    """A field element bound to its field; operators refuse to mix fields."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = int(value)

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"cannot combine {self.field!r} and {other.field!r} elements")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def _wrap(self, v: int) -> "Scalar":
        return Scalar(self.field, v)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        return self._wrap(self.field.power(self.value, k))

    def inverse(self) -> "Scalar":
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.spec, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        if self.field.e == 1:
            return f"{self.value} in {self.field!r}"
        return f"{self.field.coeffs(self.value)} in {self.field!r}"


def field_extend(base: Field, k: int) -> Field:
    """GF(p^(e*k)) with the deterministic smallest irreducible modulus.

    ``k == 1`` returns ``base`` itself.  Use :func:`embedding` to map elements
    of ``base`` into the result.
    """
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        return base
    return get_field(FieldSpec(base.p, base.e * k))


def embedding(base: Field, ext: Field) -> Callable[[int], int]:
    """Ring homomorphism base -> ext (ext must contain a copy of base)."""
    if base.p != ext.p or ext.e % base.e:
        raise FieldError(f"{base!r} does not embed in {ext!r}")
    if base == ext:
        return lambda a: int(a)
    if base.e == 1:
        return lambda a: int(a) % base.p
    # send the generator of base to the first root of its modulus in ext
    mod = [int(c) for c in base.spec.modulus]
    root = next(b for b in range(ext.q) if ext.eval_poly(mod, b) == 0)
    powers = [ext.power(root, i) for i in range(base.e)]

    @functools.lru_cache(maxsize=None)
    def embed(a: int) -> int:
        acc = 0
        for c, pw in zip(base.coeffs(int(a)), powers):
            acc = ext.add(acc, ext.mul(c, pw))
        return acc

    return embed
