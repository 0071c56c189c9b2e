"""Trace evaluation, moduli dictionary and counting functions.

The trace of Frob^{-1} on a class q^j * Lambda^w H^1(C) * Sym^s H^1(C) is
q^{-j-w-s} e_w(omega) h_s(omega), where omega runs over the reciprocal roots
of the curve's L-polynomial  L(T) = sum_k (-1)^k e_k T^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .binary_forms import as_weights
from .errors import GenusMismatch, MissingLPolynomial, UnknownModuli, WildCharacteristic
from .finite_field import prime_power
from .spectral_sequence import CohomologyTable
from .stack_count import closed_iso_count

Q = sympy.Symbol("q")


def power_sum_symbols(m: int) -> list:
    return [sympy.Symbol(f"p{k}") for k in range(1, m + 1)]


# -- L-polynomials and symmetric functions -------------------------------------


def elementary_from_power_sums(p: Sequence, k: int) -> list:
    """[e_0, ..., e_k] from power sums p[0] = p_1, ... (Newton)."""
    e = [sympy.Integer(1)]
    for m in range(1, k + 1):
        s = sum((-1) ** (i - 1) * e[m - i] * p[i - 1] for i in range(1, m + 1))
        e.append(sympy.expand(s / m))
    return e


def complete_from_power_sums(p: Sequence, k: int) -> list:
    h = [sympy.Integer(1)]
    for m in range(1, k + 1):
        h.append(sympy.expand(sum(h[m - i] * p[i - 1] for i in range(1, m + 1)) / m))
    return h


def power_sums_from_elementary(e: Sequence, k: int) -> list:
    """[p_1, ..., p_k]; e[i] beyond the given list are zero."""
    def E(i):
        return e[i] if i < len(e) else 0

    p = []
    for m in range(1, k + 1):
        s = (-1) ** (m - 1) * m * E(m)
        s += sum((-1) ** (m - 1 + i) * E(m - i) * p[i - 1] for i in range(1, m))
        p.append(sympy.expand(s))
    return p


def complete_from_elementary(e: Sequence, k: int) -> list:
    """h_m from sum_i (-1)^i e_i h_{m-i} = 0."""
    def E(i):
        return e[i] if i < len(e) else 0

    h = [sympy.Integer(1)]
    for m in range(1, k + 1):
        h.append(sympy.expand(sum((-1) ** (i - 1) * E(i) * h[m - i] for i in range(1, m + 1))))
    return h


@dataclass(frozen=True)
class LPolynomial:
    """Numerator of the zeta function of a curve: 1 + a_1 T + ... + a_2g T^2g."""

    coeffs: tuple
    q: object = Q

    def __post_init__(self):
        cs = tuple(sympy.sympify(c) for c in self.coeffs)
        if not cs or cs[0] != 1:
            raise ValueError("L-polynomial must have constant term 1")
        if len(cs) % 2 != 1:
            raise ValueError("L-polynomial must have even degree 2g")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "q", sympy.sympify(self.q))

    @classmethod
    def parse(cls, text: str, q=Q) -> "LPolynomial":
        """Parse "1,-a,q"; the symbol q is replaced by a numeric q if given."""
        loc = {"q": Q}
        cs = [sympy.sympify(t.strip(), locals=loc) for t in text.split(",")]
        q = sympy.sympify(q)
        if q != Q:
            cs = [c.subs(Q, q) for c in cs]
        return cls(tuple(cs), q)

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def elementary(self) -> list:
        """e_k with L(T) = sum (-1)^k e_k T^k."""
        return [sympy.expand((-1) ** k * c) for k, c in enumerate(self.coeffs)]

    def power_sums(self, m: int) -> list:
        return power_sums_from_elementary(self.elementary(), m)

    def complete(self, m: int) -> list:
        return complete_from_elementary(self.elementary(), m)

    def functional_equation_holds(self) -> bool:
        g, a, q = self.genus, self.coeffs, self.q
        return all(sympy.expand(a[2 * g - i] - q ** (g - i) * a[i]) == 0 for i in range(2 * g + 1))

    def point_count(self, r: int = 1):
        """#C(F_{q^r}) = q^r + 1 - p_r."""
        return sympy.expand(self.q**r + 1 - self.power_sums(r)[-1])


# -- trace ---------------------------------------------------------------------------


def _symmetric_data(table: CohomologyTable, lpoly: Optional[LPolynomial], qv):
    max_w = max((wc.wedge for c in table.groups.values() for wc in c), default=0)
    max_s = max((wc.sym for c in table.groups.values() for wc in c), default=0)
    if lpoly is not None:
        e = lpoly.elementary()
        e = e + [sympy.Integer(0)] * max(0, max_w + 1 - len(e))
        h = lpoly.complete(max_s)
        return e, h
    ps = power_sum_symbols(max(max_w, max_s, 1))
    return elementary_from_power_sums(ps, max_w), complete_from_power_sums(ps, max_s)


def _needs_curve(table: CohomologyTable) -> bool:
    return any(wc.kind != "tate" for c in table.groups.values() for wc in c)


def trace_terms(table: CohomologyTable, q, lpoly: Optional[LPolynomial] = None) -> dict:
    """Signed contribution of each cohomological degree, before summing."""
    symbolic = isinstance(q, (str, sympy.Basic))
    qv = sympy.Symbol(q) if isinstance(q, str) else q
    curve = _needs_curve(table)
    if lpoly is not None and lpoly.genus != table.genus:
        raise GenusMismatch(f"L-polynomial of genus {lpoly.genus} for a genus-{table.genus} table")
    if curve and lpoly is None and not symbolic:
        raise MissingLPolynomial("numeric trace of curve classes needs --lpoly")
    if lpoly is not None:
        if lpoly.q == Q:
            if qv != Q:
                lpoly = LPolynomial(tuple(c.subs(Q, qv) for c in lpoly.coeffs), qv)
        elif sympy.sympify(qv) != lpoly.q:
            raise ValueError(f"L-polynomial recorded for q={lpoly.q}, trace requested at q={qv}")
    g = table.genus
    out = {}
    if curve:
        e, h = _symmetric_data(table, lpoly, qv)
    for i in table.degrees():
        acc = sympy.Integer(0) if (symbolic or curve) else Fraction(0)
        for wc, mult in table.groups[i].items():
            if not mult:
                continue
            if wc.kind == "tate":
                if symbolic or curve:
                    acc += mult * sympy.Pow(qv, table.dimension - wc.j)
                else:
                    acc += mult * Fraction(qv) ** (table.dimension - wc.j)
                continue
            blocks = Fraction(mult, wc.block_dim(g))
            if blocks.denominator != 1:
                raise ValueError(f"multiplicity {mult} is not a multiple of the block size of {wc}")
            exp = table.dimension - wc.j - wc.wedge - wc.sym
            acc += int(blocks) * sympy.Pow(qv, exp) * e[wc.wedge] * h[wc.sym]
        out[i] = (-1) ** i * (sympy.expand(acc) if isinstance(acc, sympy.Basic) else acc)
    return out


def _finish(v):
    if isinstance(v, sympy.Basic):
        v = sympy.expand(v)
        if v.is_Rational:
            return Fraction(int(v.p), int(v.q))
    return v


def trace_count(table: CohomologyTable, q, lpoly: Optional[LPolynomial] = None):
    """q^D * sum_i (-1)^i tr(Frob^{-1} | H^i)."""
    terms = trace_terms(table, q, lpoly)
    total = sum(terms.values(), sympy.Integer(0) if any(
        isinstance(v, sympy.Basic) for v in terms.values()) else Fraction(0))
    return _finish(total)


@dataclass
class TraceSplit:
    stable: object
    tail: object  # contributions from degrees above the stable cutoff


def trace_count_split(table: CohomologyTable, q, lpoly: Optional[LPolynomial] = None) -> TraceSplit:
    terms = trace_terms(table, q, lpoly)
    zero = sympy.Integer(0)
    stable = sum((v for i, v in terms.items() if table.is_reliable(i)), zero)
    tail = sum((v for i, v in terms.items() if not table.is_reliable(i)), zero)
    return TraceSplit(_finish(stable), _finish(tail))


# -- moduli dictionary ------------------------------------------------------------


@dataclass(frozen=True)
class ModuliSpec:
    name: str
    weights: tuple
    forbidden: frozenset
    discriminant_degree: int = 12
    description: str = ""

    @property
    def generic_stabilizer(self) -> int:
        return math.gcd(*self.weights)


def _prime_factors(m: int) -> frozenset:
    return frozenset(sympy.primefactors(m))


_REGISTRY = {
    "stable-elliptic": ModuliSpec("stable-elliptic", (4, 6), frozenset({2, 3}),
                                  description="stable elliptic curves"),
    "gamma1-2": ModuliSpec("gamma1-2", (2, 4), frozenset({2}),
                           description="generalized elliptic curves with Gamma_1(2) structure"),
    "gamma1-3": ModuliSpec("gamma1-3", (1, 3), frozenset({3}),
                           description="generalized elliptic curves with Gamma_1(3) structure"),
    "gamma1-4": ModuliSpec("gamma1-4", (1, 2), frozenset({2}),
                           description="generalized elliptic curves with Gamma_1(4) structure"),
    "gamma-2": ModuliSpec("gamma-2", (2, 2), frozenset({2}),
                          description="generalized elliptic curves with Gamma(2) structure"),
    "smyth-m2": ModuliSpec("smyth-m2", (2, 3, 4), frozenset({2, 3}),
                           description="2-marked 1-stable curves of arithmetic genus one"),
    "smyth-m3": ModuliSpec("smyth-m3", (1, 2, 2, 3), frozenset({2, 3}),
                           description="3-marked 1-stable curves of arithmetic genus one"),
    "smyth-m4": ModuliSpec("smyth-m4", (1, 1, 1, 2, 2), frozenset({2}),
                           description="4-marked 1-stable curves of arithmetic genus one"),
    "smyth-m5": ModuliSpec("smyth-m5", (1, 1, 1, 1, 1, 1), frozenset(),
                           description="5-marked 1-stable curves of arithmetic genus one"),
}
for _m in (5, 6, 7, 8, 9, 10, 12):
    _REGISTRY[f"gamma1-{_m}"] = ModuliSpec(
        f"gamma1-{_m}", (1, 1), _prime_factors(_m),
        description=f"generalized elliptic curves with Gamma_1({_m}) structure")


def moduli_names() -> list:
    return sorted(_REGISTRY) + ["hyperelliptic-g"]


def moduli_lookup(name: str) -> ModuliSpec:
    name = name.strip().lower()
    if name in _REGISTRY:
        return _REGISTRY[name]
    if name.startswith("hyperelliptic-"):
        try:
            g = int(name.split("-", 1)[1])
        except ValueError:
            raise UnknownModuli(f"bad genus in {name!r}") from None
        if g < 2:
            raise UnknownModuli("hyperelliptic-g needs g >= 2")
        weights = tuple(range(4, 4 * g + 3, 2))
        return ModuliSpec(name, weights, frozenset(sympy.primerange(2, 2 * g + 2)),
                          discriminant_degree=4 * g * (2 * g + 1),
                          description=f"hyperelliptic genus-{g} fibrations")
    raise UnknownModuli(f"unknown moduli {name!r}; known: {', '.join(moduli_names())}")


def _check_char(spec: ModuliSpec, q: int):
    p, _ = prime_power(q)
    if p in spec.forbidden:
        raise WildCharacteristic(f"characteristic {p} is excluded for {spec.name}")


def max_degree_for_height(spec: ModuliSpec, q: int, B: int) -> int:
    """Largest n with q^(deg * n) <= B (exact integer arithmetic)."""
    if B < 1:
        raise ValueError("B must be >= 1")
    step = q**spec.discriminant_degree
    n, bound = 0, step
    while bound <= B:
        n += 1
        bound *= step
    return n


def batyrev_manin_sum(spec: ModuliSpec, q: int, B: int) -> int:
    """Number of fibrations of height at most B: sum of iso-class counts."""
    _check_char(spec, q)
    top = max_degree_for_height(spec, q, B)
    return sum(int(closed_iso_count(q, spec.weights, n).value) for n in range(1, top + 1))


def manin_closed_form(spec: ModuliSpec, q: int, B: int) -> Fraction:
    """Geometric-series closed form, valid when B = q^(deg * n0).

    Each sub-stack of weights divisible by d contributes
    phi(d) * c * q^s (B^{s/deg} - 1) / (q^s - 1) with s = sum of its weights
    and c = (1 + ... + q^N')(1 - q^{-N'}).
    """
    _check_char(spec, q)
    deg = spec.discriminant_degree
    n0 = max_degree_for_height(spec, q, B)
    if q ** (deg * n0) != B:
        raise ValueError("closed form needs B to be an exact power q^(deg*n0)")
    w = as_weights(spec.weights)
    total = Fraction(0)
    for d in sympy.divisors(q - 1):
        sub = w.restrict(lambda x: x % d == 0)
        if sub is None or len(sub) < 2:
            continue
        s, Np = sub.total, sub.N
        c = Fraction(sum(q**i for i in range(Np + 1))) * (1 - Fraction(1, q**Np))
        total += int(sympy.totient(d)) * c * q**s * Fraction(q ** (s * n0) - 1, q**s - 1)
    return total


def shafarevich_leading(g: int, q=Q):
    """2 (q^{11-2g} - q^{9-2g}) / (q^{10} - 1) * B^{5/6}."""
    if g < 0:
        raise ValueError("g must be >= 0")
    B = sympy.Symbol("B", positive=True)
    qv = sympy.Symbol(q) if isinstance(q, str) else sympy.sympify(q)
    coeff = 2 * (qv ** (11 - 2 * g) - qv ** (9 - 2 * g)) / (qv**10 - 1)
    return coeff * B ** sympy.Rational(5, 6)


# -- Picard groups ------------------------------------------------------------------


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str  # finite_cyclic | infinite_cyclic
    order: Optional[int] = None
    resultant_degree: Optional[int] = None

    def __post_init__(self):
        if self.kind == "finite_cyclic" and (self.order is None or self.order < 1):
            raise ValueError("finite cyclic group needs order >= 1")

    def __str__(self):
        return f"Z/{self.order}" if self.kind == "finite_cyclic" else "Z"


def picard_group(w, n: int) -> GroupDescriptor:
    w = as_weights(w)
    if n < 1:
        raise ValueError("n must be >= 1")
    if w.N < 1:
        raise ValueError("need at least two weights")
    if w.N == 1:
        d = n * (w.lambdas[0] + w.lambdas[1])
        return GroupDescriptor("finite_cyclic", d, d)
    return GroupDescriptor("infinite_cyclic")
