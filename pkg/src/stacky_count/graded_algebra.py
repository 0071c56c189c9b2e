"""Graded-ring bookkeeping for weighted projective bundles.

Base rings are small: a point, the truncated polynomial ring Q[theta]/theta^{g+1}
(theta in degree 2), or Betti numbers only.  Classes are sympy expressions with
exact rational coefficients; ``BaseRing.reduce`` enforces the truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .binary_forms import WeightVector, as_weights
from .errors import DegreeTooSmall, WeightMismatch

THETA = sympy.Symbol("theta")
ZETA = sympy.Symbol("zeta")


@dataclass(frozen=True)
class BaseRing:
    """kind is one of point, theta_truncated, poincare_only or free.

    ``free`` imposes no relations; it is handy for generic symbolic classes.
    """

    kind: str = "point"
    g: int = 0
    poincare: tuple = ()

    @classmethod
    def point(cls):
        return cls("point")

    @classmethod
    def theta_truncated(cls, g: int):
        return cls("theta_truncated", g)

    @classmethod
    def poincare_only(cls, poly: "PoincarePolynomial"):
        return cls("poincare_only", poincare=tuple(poly.coeffs))

    @classmethod
    def free(cls):
        return cls("free")

    def reduce(self, expr):
        expr = sympy.expand(sympy.sympify(expr))
        if self.kind == "point":
            # positive-degree classes vanish on a point
            return expr.subs({s: 0 for s in expr.free_symbols})
        if self.kind == "theta_truncated":
            if not expr.has(THETA):
                return expr
            poly = sympy.Poly(expr, THETA)
            return sympy.expand(sum(c * THETA**k for (k,), c in poly.terms() if k <= self.g))
        return expr


@dataclass(frozen=True)
class ChernData:
    """Split bundle E = E_0 + ... + E_N; summands are (rank, (c_1, ..., c_r))."""

    summands: tuple
    eta: tuple
    base: BaseRing = field(default_factory=BaseRing.free)

    def __post_init__(self):
        summ = tuple((int(r), tuple(sympy.sympify(c) for c in cs)) for r, cs in self.summands)
        for r, cs in summ:
            if len(cs) > r:
                raise ValueError("a rank-r bundle has at most r Chern classes")
        object.__setattr__(self, "summands", summ)
        object.__setattr__(self, "eta", tuple(int(e) for e in self.eta))
        if len(self.eta) != len(summ):
            raise WeightMismatch("eta and summands differ in length")

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.summands)


def _polymul(a: list, b: list, base: BaseRing) -> list:
    out = [sympy.Integer(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] += x * y
    out = [base.reduce(c) for c in out]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def twisted_chern_polynomial(data: ChernData) -> list:
    """[c^eta_1, ..., c^eta_R]: coefficients of prod_i c_{eta_i t}(E_i)."""
    acc = [sympy.Integer(1)]
    for (r, cs), eta in zip(data.summands, data.eta):
        factor = [sympy.Integer(1)] + [eta**j * c for j, c in enumerate(cs, 1)]
        acc = _polymul(acc, factor, data.base)
    coeffs = acc[1:] + [sympy.Integer(0)] * (data.rank + 1 - len(acc))
    return coeffs[: data.rank]


@dataclass(frozen=True)
class RelationPresentation:
    """zeta^R + c_1 zeta^{R-1} + ... + c_R = 0, with zeta = L * c_1(O(1))."""

    degree: int
    coefficients: tuple
    zeta_normalization: int
    base: BaseRing = field(default_factory=BaseRing.free)

    def expr(self, zeta=ZETA):
        R = self.degree
        return zeta**R + sum(c * zeta ** (R - j) for j, c in enumerate(self.coefficients, 1))

    def nonzero_terms(self) -> list:
        return [(j, c) for j, c in enumerate(self.coefficients, 1) if c != 0]


def wpb_relation(data: ChernData, w) -> RelationPresentation:
    w = as_weights(w)
    if len(data.summands) != len(w):
        raise WeightMismatch(f"{len(data.summands)} summands for {len(w)} weights")
    data = ChernData(data.summands, w.eta, data.base)
    coeffs = tuple(twisted_chern_polynomial(data))
    return RelationPresentation(data.rank, coeffs, w.lcm, data.base)


def jacobian_chern_data(g: int, n: int, w) -> ChernData:
    """Chern data of the pushed-forward Poincare bundles over Pic^n(C).

    Summand i has rank n*lambda_i - g + 1 and c_j = (-1)^j theta^j / j!.
    """
    w = as_weights(w)
    if n < 2 * g:
        raise DegreeTooSmall(f"need n >= 2g, got n={n}, g={g}")
    base = BaseRing.theta_truncated(g) if g > 0 else BaseRing.point()
    summands = []
    for lam in w:
        r = n * lam - g + 1
        cs = tuple(sympy.Rational((-1) ** j, math.factorial(j)) * THETA**j
                   for j in range(1, min(g, r) + 1))
        summands.append((r, cs))
    return ChernData(tuple(summands), w.eta, base)


def pushforward_powers(rel: RelationPresentation, maxExtra: int) -> list:
    """[pi_* zeta^{R-1}, pi_* zeta^R, ...] via s_m = -sum_j c_j s_{m-j}."""
    if maxExtra < 0:
        raise ValueError("maxExtra must be >= 0")
    c = rel.coefficients
    s = [sympy.Integer(1)]
    for m in range(1, maxExtra + 1):
        val = -sum(c[j - 1] * s[m - j] for j in range(1, min(m, rel.degree) + 1))
        s.append(rel.base.reduce(val))
    return s


def recursion_residuals(rel: RelationPresentation, seq: Sequence) -> list:
    """sum_{j=0}^{min(m,R)} c_j s_{m-j} for m >= 1 (all zero when consistent)."""
    c = (sympy.Integer(1),) + tuple(rel.coefficients)
    return [rel.base.reduce(sum(c[j] * seq[m - j] for j in range(0, min(m, rel.degree) + 1)))
            for m in range(1, len(seq))]


def phi_cover_degree(w) -> Fraction:
    """lcm(lambda)^N / prod(lambda_i)."""
    w = as_weights(w)
    return Fraction(w.lcm**w.N, math.prod(w.lambdas))


@dataclass(frozen=True)
class PoincarePolynomial:
    coeffs: tuple

    def __post_init__(self):
        cs = list(int(c) for c in self.coeffs) or [0]
        if any(c < 0 for c in cs):
            raise ValueError("Betti numbers are nonnegative")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def point(cls):
        return cls((1,))

    @classmethod
    def jacobian(cls, g: int):
        return cls(tuple(math.comb(2 * g, i) for i in range(2 * g + 1)))

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PoincarePolynomial(tuple(out))

    def __call__(self, t):
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(terms) if terms else "0"


def wpb_poincare(base: PoincarePolynomial, N: int) -> PoincarePolynomial:
    """Betti numbers of a weighted projective bundle with fibre P(lambda)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    fibre = PoincarePolynomial(tuple(1 if i % 2 == 0 else 0 for i in range(2 * N + 1)))
    return base * fibre


def class_to_json(expr) -> object:
    """Serialize a class: polynomials in theta become {"theta^k": "num/den"}."""
    expr = sympy.expand(expr)
    syms = expr.free_symbols
    if syms and syms != {THETA}:
        return str(expr)
    poly = sympy.Poly(expr, THETA)
    out = {}
    for (k,), c in sorted(poly.terms()):
        c = sympy.Rational(c)
        out[f"theta^{k}"] = f"{c.p}/{c.q}"
    return out
