"""Binary forms over F_q and tuples of them.

A tuple (s_0, ..., s_N) with deg s_i = n * lambda_i is basepoint free when the
forms have no common zero on P^1 over the algebraic closure.  Common zeros are
detected algebraically: dehomogenize at y = 1, take the gcd of the affine
parts, and add the smallest multiplicity of the point at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterator, Sequence

from .errors import PartitionOutOfRange
from .finite_field import FieldElement, FieldSpec, poly_gcd, poly_monic


@dataclass(frozen=True)
class WeightVector:
    lambdas: tuple[int, ...]

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lambdas)
        if not lam or any(x < 1 for x in lam):
            raise ValueError(f"weights must be positive integers, got {self.lambdas}")
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        return cls(tuple(int(t) for t in text.split(",") if t.strip()))

    @property
    def N(self) -> int:
        return len(self.lambdas) - 1

    @property
    def total(self) -> int:
        return sum(self.lambdas)

    @property
    def lcm(self) -> int:
        return math.lcm(*self.lambdas)

    @property
    def gcd(self) -> int:
        return math.gcd(*self.lambdas)

    @property
    def eta(self) -> tuple[int, ...]:
        L = self.lcm
        return tuple(L // x for x in self.lambdas)

    def degrees(self, n: int) -> tuple[int, ...]:
        return tuple(n * x for x in self.lambdas)

    def restrict(self, keep) -> "WeightVector | None":
        sub = tuple(x for x in self.lambdas if keep(x))
        return WeightVector(sub) if sub else None

    def __iter__(self):
        return iter(self.lambdas)

    def __len__(self):
        return len(self.lambdas)

    def __str__(self):
        return "(" + ",".join(map(str, self.lambdas)) + ")"


def as_weights(w) -> WeightVector:
    if isinstance(w, WeightVector):
        return w
    if isinstance(w, str):
        return WeightVector.parse(w)
    return WeightVector(tuple(w))


@dataclass(frozen=True)
class BinaryForm:
    """coeffs[i] is the coefficient of x^i y^(d-i)."""

    degree: int
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("a degree-d form needs d+1 coefficients")

    @classmethod
    def from_ints(cls, spec: FieldSpec, coeffs: Sequence[int]) -> "BinaryForm":
        return cls(len(coeffs) - 1, tuple(spec.element(c) for c in coeffs))

    @classmethod
    def zero(cls, spec: FieldSpec, d: int) -> "BinaryForm":
        return cls.from_ints(spec, [0] * (d + 1))

    @property
    def field(self) -> FieldSpec:
        return self.coeffs[0].field

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(c.value for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.value == 0 for c in self.coeffs)

    def swapped(self) -> "BinaryForm":
        """The form with x and y exchanged."""
        return BinaryForm(self.degree, tuple(reversed(self.coeffs)))

    def scaled(self, c) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(a * c for a in self.coeffs))

    def __str__(self):
        d = self.degree
        terms = []
        for i in range(d, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "".join(
                s for s in (_pow("x", i), _pow("y", d - i)) if s
            )
            cs = str(c)
            if " " in cs:
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            else:
                terms.append(mono if cs == "1" else f"{cs} {mono}")
        return " + ".join(terms) if terms else "0"


def _pow(v: str, e: int) -> str:
    return "" if e == 0 else (v if e == 1 else f"{v}^{e}")


@dataclass(frozen=True)
class FormTuple:
    forms: tuple[BinaryForm, ...]
    weights: WeightVector
    n: int

    def __post_init__(self):
        degs = self.weights.degrees(self.n)
        if tuple(f.degree for f in self.forms) != degs:
            raise ValueError(f"form degrees must be {degs}")

    @classmethod
    def from_ints(cls, spec, w, n, coeff_lists) -> "FormTuple":
        w = as_weights(w)
        return cls(tuple(BinaryForm.from_ints(spec, c) for c in coeff_lists), w, n)

    def swapped(self) -> "FormTuple":
        return FormTuple(tuple(f.swapped() for f in self.forms), self.weights, self.n)

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.forms) + ")"


# -- gcd state ---------------------------------------------------------------
#
# A nonzero binary form up to scalars is (monic affine part, mult at infinity).
# The gcd of several forms is the pair (gcd of affine parts, min of mults).
# ``None`` stands for "every form seen so far is zero".

GcdState = "tuple[tuple[int, ...], int] | None"


def form_state(spec: FieldSpec, values: Sequence[int]):
    """Normalized (affine monic, infinity multiplicity) of one form."""
    d = len(values) - 1
    aff = poly_monic(spec, values)
    if not aff:
        return None
    return aff, d - (len(aff) - 1)


def combine_states(spec: FieldSpec, a, b):
    if a is None:
        return b
    if b is None:
        return a
    aff = a[0] if a[0] == b[0] else poly_gcd(spec, a[0], b[0])
    return aff, min(a[1], b[1])


def state_degree(state) -> float:
    if state is None:
        return math.inf
    return len(state[0]) - 1 + state[1]


def state_trivial(state) -> bool:
    return state is not None and state[1] == 0 and len(state[0]) == 1


def tuple_gcd_degree(t: FormTuple):
    """Degree of the gcd of the nonzero forms; ``math.inf`` if all are zero."""
    spec = t.forms[0].field
    st = reduce(lambda acc, f: combine_states(spec, acc, form_state(spec, f.values)),
                t.forms, None)
    return state_degree(st)


def is_basepoint_free(t: FormTuple) -> bool:
    return tuple_gcd_degree(t) == 0


# -- enumeration ---------------------------------------------------------------

@dataclass(frozen=True)
class TupleSpace:
    """Mixed-radix coordinates on the coefficient space of a tuple.

    The concatenated coefficient vector (form 0 first, each form low
    coefficient first) is read as a little-endian base-q numeral; form i
    then occupies one mixed-radix digit with radix q^(n*lambda_i + 1).
    """

    spec: FieldSpec
    weights: WeightVector
    n: int

    def __post_init__(self):
        object.__setattr__(self, "weights", as_weights(self.weights))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return self.weights.degrees(self.n)

    @cached_property
    def radices(self) -> tuple[int, ...]:
        return tuple(self.spec.q ** (d + 1) for d in self.degrees)

    @cached_property
    def size(self) -> int:
        return math.prod(self.radices)

    @property
    def dimension(self) -> int:
        return sum(d + 1 for d in self.degrees)

    def form_values(self, level: int, v: int) -> tuple[int, ...]:
        q = self.spec.q
        return tuple((v // q**j) % q for j in range(self.degrees[level] + 1))

    def unrank(self, r: int) -> tuple[int, ...]:
        """Per-form digit values of rank r."""
        out = []
        for R in self.radices:
            r, v = divmod(r, R)
            out.append(v)
        return tuple(out)

    def rank(self, digits: Sequence[int]) -> int:
        r, scale = 0, 1
        for v, R in zip(digits, self.radices):
            r += v * scale
            scale *= R
        return r

    def part_range(self, index: int, total: int) -> tuple[int, int]:
        if total < 1 or not 0 <= index < total:
            raise PartitionOutOfRange(f"bad partition ({index}, {total})")
        S = self.size
        return index * S // total, (index + 1) * S // total

    def to_tuple(self, digits: Sequence[int]) -> FormTuple:
        return FormTuple(
            tuple(BinaryForm.from_ints(self.spec, self.form_values(i, v))
                  for i, v in enumerate(digits)),
            self.weights, self.n)


def tuple_space_iter(spec: FieldSpec, w, n: int, part=(0, 1)) -> Iterator[FormTuple]:
    """Stream the tuples of one partition of the coefficient space."""
    space = TupleSpace(spec, as_weights(w), n)
    lo, hi = space.part_range(*part)
    for r in range(lo, hi):
        yield space.to_tuple(space.unrank(r))
