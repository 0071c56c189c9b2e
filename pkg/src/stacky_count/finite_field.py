"""Exact arithmetic in finite fields F_q, q = p^k.

Elements are encoded as integers ``0 <= v < q``: the base-p digits of ``v``
(little-endian) are the coordinates of the element on the basis
1, x, ..., x^{k-1} of F_p[x]/(modulus).  This encoding fixes the
deterministic element order used for enumeration everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Sequence

from sympy import factorint, isprime

from .errors import (
    CardinalityCap,
    DegreeOutOfRange,
    DivisionByZero,
    NonPrime,
    ZeroElement,
)

FIELD_CARDINALITY_CAP = 2**16
MAX_EXTENSION_DEGREE = 16


# -- polynomials over F_p (lists of ints, low degree first) -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    """a*b mod m over F_p, m monic."""
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _fp_mod(prod, m, p)


def _fp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        shift = len(a) - 1 - dm
        for j, mc in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mc) % p
        _trim(a)
    return a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _fp_mod(a, bm, p)
    return a


def _fp_powx(e: int, m: list[int], p: int) -> list[int]:
    """x^e mod m over F_p."""
    result, base = [1], _fp_mod([0, 1], m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic m of degree k over F_p."""
    k = len(m) - 1
    if k == 1:
        return True
    if m[0] == 0:
        return False
    xq = _fp_powx(p**k, m, p)
    if _fp_mod(xq, m, p) != _fp_mod([0, 1], m, p):
        return False
    for r in factorint(k):
        h = _fp_powx(p ** (k // r), m, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _fp_gcd(m, _trim(h), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over F_p.

    Candidates are ordered by the integer sum(c_i p^i) of their lower
    coefficients, i.e. lexicographic from the x^{k-1} coefficient down.
    """
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        cand = low + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- field spec -----------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_q with q = p^k; ``modulus`` is low-to-high and empty when k = 1."""

    p: int
    k: int
    modulus: tuple[int, ...] = ()

    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self):
        return format_field(self)

    # element encoding helpers
    def digits(self, v: int) -> tuple[int, ...]:
        p = self.p
        return tuple((v // p**i) % p for i in range(self.k))

    def from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for i, d in enumerate(ds):
            v += (d % self.p) * self.p**i
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        r = _fp_mulmod(_trim(list(self.digits(a))), _trim(list(self.digits(b))),
                       list(self.modulus), self.p)
        return self.from_digits(r)

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        """(exp, log) tables for a primitive element."""
        q = self.q
        if q == 2:
            return [1], [0, 0]
        prime_divs = list(factorint(q - 1))
        g = next(c for c in range(2, q) if self._is_primitive(c, prime_divs))
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._slow_mul(exp[i - 1], g)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        return exp, log

    def _is_primitive(self, c: int, prime_divs) -> bool:
        for r in prime_divs:
            if self._slow_pow(c, (self.q - 1) // r) == 1:
                return False
        return True

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    @cached_property
    def primitive(self) -> int:
        return self._tables[0][1] if self.q > 2 else 1

    # fast integer-level arithmetic
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return (a * b) % self.p
        exp, log = self._tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._tables
        return exp[(-log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        exp, log = self._tables
        return exp[(log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log to the base ``primitive``."""
        if a == 0:
            raise ZeroElement("log of 0")
        return self._tables[1][a]

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("multiplicative order of 0 is undefined")
        n = self.q - 1
        return n // gcd(self.log(a), n)

    def elements(self) -> range:
        return range(self.q)

    def element(self, v) -> "FieldElement":
        if isinstance(v, FieldElement):
            return v
        if isinstance(v, (tuple, list)):
            return FieldElement(self, self.from_digits(v))
        if self.k == 1:
            return FieldElement(self, v % self.p)
        if not 0 <= v < self.q:
            raise ValueError(f"element code {v} out of range for {self}")
        return FieldElement(self, v)

    @property
    def gen(self) -> "FieldElement":
        """Class of x for k > 1; the primitive root for prime fields."""
        return self.element(self.p if self.k > 1 else self.primitive)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.digits(self.value)

    def _lift(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.element(other).value

    def __add__(self, o):
        return FieldElement(self.field, self.field.add(self.value, self._lift(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.field, self.field.sub(self.value, self._lift(o)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, o):
        return FieldElement(self.field, self.field.mul(self.value, self._lift(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self * FieldElement(self.field, self.field.inv(self._lift(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        f = self.field
        if f.k == 1:
            return str(self.value)
        terms = []
        for i, c in reversed(list(enumerate(self.coords))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


# -- public operations -------------------------------------------------------

@lru_cache(maxsize=None)
def _create(p: int, k: int) -> FieldSpec:
    return FieldSpec(p, k, smallest_irreducible(p, k) if k > 1 else ())


def field_create(p: int, k: int = 1, cap: int | None = None) -> FieldSpec:
    """Build F_{p^k} with the deterministic modulus."""
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise NonPrime(f"{p} is not prime")
    if not isinstance(k, int) or k < 1 or k > MAX_EXTENSION_DEGREE:
        raise DegreeOutOfRange(f"extension degree {k} not in [1, {MAX_EXTENSION_DEGREE}]")
    cap = FIELD_CARDINALITY_CAP if cap is None else cap
    if p**k > cap:
        raise CardinalityCap(f"q = {p}^{k} exceeds cap {cap}")
    return _create(p, k)


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, or raise NonPrime."""
    if not isinstance(q, int) or q < 2:
        raise NonPrime(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise NonPrime(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


def field_from_q(q: int, cap: int | None = None) -> FieldSpec:
    p, k = prime_power(q)
    return field_create(p, k, cap)


def parse_field(text: str) -> FieldSpec:
    """Parse "p^k" or "q" (a prime power)."""
    text = text.strip()
    if "^" in text:
        p, k = text.split("^", 1)
        return field_create(int(p), int(k))
    return field_from_q(int(text))


def format_field(spec: FieldSpec) -> str:
    return str(spec.p) if spec.k == 1 else f"{spec.p}^{spec.k}"


def field_arith(spec: FieldSpec, op: str, *args) -> FieldElement:
    """Dispatch add/sub/mul/inv/pow on element codes or FieldElements."""
    if op == "pow":
        x, e = args
        return FieldElement(spec, spec.pow(spec.element(x).value, int(e)))
    vals = [spec.element(a).value for a in args]
    if op == "add":
        return FieldElement(spec, spec.add(vals[0], vals[1]))
    if op == "sub":
        return FieldElement(spec, spec.sub(vals[0], vals[1]))
    if op == "mul":
        return FieldElement(spec, spec.mul(vals[0], vals[1]))
    if op == "inv":
        return FieldElement(spec, spec.inv(vals[0]))
    raise ValueError(f"unknown op {op!r}")


def element_order(spec: FieldSpec, x) -> int:
    return spec.order(spec.element(x).value)


# -- polynomials over F_q (lists of element codes, low degree first) --------

def poly_trim(a: list[int]) -> list[int]:
    return _trim(a)


def poly_monic(spec: FieldSpec, a: Sequence[int]) -> tuple[int, ...]:
    a = _trim(list(a))
    if not a:
        return ()
    inv = spec.inv(a[-1])
    return tuple(spec.mul(c, inv) for c in a)


def poly_mod(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Remainder of a by the nonzero polynomial b."""
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    db = len(b) - 1
    inv = spec.inv(b[-1])
    mul, sub = spec.mul, spec.sub
    while a and len(a) - 1 >= db:
        c = mul(a[-1], inv)
        shift = len(a) - 1 - db
        for j, bc in enumerate(b):
            if bc:
                a[shift + j] = sub(a[shift + j], mul(c, bc))
        _trim(a)
    return a


def poly_gcd(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Monic gcd (empty tuple for gcd(0, 0))."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(spec, a, b)
    return poly_monic(spec, a)
