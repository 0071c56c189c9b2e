"""Point counts of Hom_n(P^1, P(lambda)) over F_q.

Closed forms and two independent exhaustive oracles:

* the mass formula #BPF / (q - 1), where BPF is the set of basepoint-free
  coefficient tuples (the F_q-points of the torsor over the Hom stack);
* Burnside's lemma over F_q^* for the number of isomorphism classes.

Two enumeration strategies are available.  ``naive`` visits every tuple.
``memo`` walks the same rank range but aggregates whole sub-blocks by the gcd
state of the forms fixed so far, which makes 10^8-tuple spaces cheap.  Both
are exhaustive: no closed form is used anywhere in the oracle path.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import sympy

from .binary_forms import (
    TupleSpace,
    WeightVector,
    as_weights,
    combine_states,
    form_state,
    state_trivial,
)
from .errors import BudgetExceeded, DegreeNonPositive, StackyError, WildCharacteristic
from .finite_field import FieldSpec, prime_power

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
Q = sympy.Symbol("q")


@dataclass(frozen=True)
class HomStackParams:
    weights: WeightVector
    n: int
    g: int = 0
    field: Optional[FieldSpec] = None  # None means symbolic q

    def __post_init__(self):
        object.__setattr__(self, "weights", as_weights(self.weights))
        if self.n < 1:
            raise DegreeNonPositive(f"n must be >= 1, got {self.n}")

    @property
    def dimension(self) -> int:
        w = self.weights
        return w.total * self.n + w.N - 2 * self.g

    def is_tame(self) -> bool:
        return self.field is None or all(x % self.field.p for x in self.weights)


@dataclass
class CountResult:
    value: object  # Fraction for numeric q, sympy expression for symbolic q
    method: str  # closed_form | brute_force | burnside
    tuple_count: Optional[int] = None
    wild: bool = False
    notes: list = field(default_factory=list)

    def is_integral(self) -> bool:
        return isinstance(self.value, Fraction) and self.value.denominator == 1

    def value_str(self) -> str:
        v = self.value
        if isinstance(v, Fraction):
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return str(v)


# -- helpers -------------------------------------------------------------------

def _is_symbolic(q) -> bool:
    return isinstance(q, (str, sympy.Basic))


def _as_q(q):
    if isinstance(q, str):
        return sympy.Symbol(q)
    return q


def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise DegreeNonPositive(f"n must be a positive integer, got {n}")


def _check_tame(q, w: WeightVector):
    if _is_symbolic(q):
        return
    p, _ = prime_power(q)
    bad = [x for x in w if x % p == 0]
    if bad:
        raise WildCharacteristic(f"characteristic {p} divides weight(s) {bad}")


def _weighted_formula(q, w: WeightVector, n: int):
    N, s = w.N, w.total * n
    if N == 0:
        return 0
    return sum(q**i for i in range(N + 1)) * (q**s - q ** (s - N))


# -- closed forms -------------------------------------------------------------

def closed_weighted_count(q, w, n: int) -> CountResult:
    """(1 + q + ... + q^N)(q^{|l|n} - q^{|l|n - N})."""
    w = as_weights(w)
    _check_n(n)
    _check_tame(q, w)
    if _is_symbolic(q):
        return CountResult(sympy.expand(_weighted_formula(_as_q(q), w, n)), "closed_form")
    return CountResult(Fraction(_weighted_formula(q, w, n)), "closed_form")


def _sub_weights(w: WeightVector, d: int) -> Optional[WeightVector]:
    return w.restrict(lambda x: x % d == 0)


def closed_iso_count(q: int, w, n: int) -> CountResult:
    """Number of isomorphism classes: sum over d | q-1 of phi(d) times the
    weighted count of the substack cut out by the weights divisible by d."""
    w = as_weights(w)
    _check_n(n)
    if _is_symbolic(q):
        raise TypeError("closed_iso_count needs a numeric q (it depends on divisors of q-1)")
    _check_tame(q, w)
    total = 0
    for d in sympy.divisors(q - 1):
        sub = _sub_weights(w, d)
        if sub is None or len(sub) < 2:
            continue
        total += int(sympy.totient(d)) * _weighted_formula(q, sub, n)
    return CountResult(Fraction(total), "closed_form")


def ambient_count(q, w, n: int):
    """Weighted count of the ambient stack P(Lambda): (q^M - 1)/(q - 1)."""
    w = as_weights(w)
    M = sum(n * x + 1 for x in w)
    return sum(_as_q(q) ** i for i in range(M))


def discriminant_weighted_count(q, w, n: int) -> CountResult:
    """Weighted count of the locus of tuples with a common zero."""
    w = as_weights(w)
    _check_n(n)
    _check_tame(q, w)
    val = ambient_count(q, w, n) - _weighted_formula(_as_q(q), w, n)
    if _is_symbolic(q):
        return CountResult(sympy.expand(val), "closed_form")
    return CountResult(Fraction(val), "closed_form")


# -- enumeration engine --------------------------------------------------------

class _BpfCounter:
    """Counts basepoint-free tuples inside rank ranges of a TupleSpace."""

    def __init__(self, spec: FieldSpec, degrees: Sequence[int]):
        self.spec = spec
        self.degrees = tuple(degrees)
        self.radices = tuple(spec.q ** (d + 1) for d in self.degrees)
        self._state_cache = [dict() for _ in self.degrees]
        self._full = {}
        self._classes = {}

    # per-level data
    def state_of(self, level: int, v: int):
        cache = self._state_cache[level]
        st = cache.get(v, _MISSING)
        if st is _MISSING:
            q = self.spec.q
            vals = [(v // q**j) % q for j in range(self.degrees[level] + 1)]
            st = cache[v] = form_state(self.spec, vals)
        return st

    def classes(self, d: int):
        """(state, multiplicity) over all forms of degree d, grouped by scaling."""
        got = self._classes.get(d)
        if got is None:
            spec, q = self.spec, self.spec.q
            got = [(None, 1)]
            # normalized forms: top nonzero coefficient equal to 1
            for top in range(d + 1):
                for low in range(q**top):
                    vals = [(low // q**j) % q for j in range(top)] + [1]
                    got.append(((tuple(vals), d - top), q - 1))
            self._classes[d] = got
        return got

    # full blocks
    def full(self, levels: tuple, state) -> int:
        """BPF count over all values of the given levels, others fixed."""
        if not levels:
            return 1 if state_trivial(state) else 0
        if state_trivial(state):
            return math.prod(self.radices[i] for i in levels)
        key = (levels, state)
        got = self._full.get(key)
        if got is not None:
            return got
        head, rest = levels[0], levels[1:]
        total = 0
        for st, mult in self.classes(self.degrees[head]):
            total += mult * self.full(rest, combine_states(self.spec, state, st))
        self._full[key] = total
        return total

    def _sorted_levels(self, k: int) -> tuple:
        return tuple(sorted(range(k + 1), key=lambda i: (self.degrees[i], i)))

    def count_range(self, lo: int, hi: int) -> int:
        """BPF tuples with rank in [lo, hi) (memoized strategy)."""
        if lo >= hi:
            return 0
        return self._range(len(self.degrees) - 1, None, lo, hi)

    def _range(self, k: int, state, lo: int, hi: int) -> int:
        if k < 0:
            return 1 if state_trivial(state) else 0
        block = math.prod(self.radices[:k])  # size of levels 0..k-1
        if lo == 0 and hi == block * self.radices[k]:
            return self.full(self._sorted_levels(k), state)
        first, last = lo // block, (hi - 1) // block
        total = 0
        grouped = Counter()
        for v in range(first, last + 1):
            sub_lo = max(lo - v * block, 0)
            sub_hi = min(hi - v * block, block)
            st = combine_states(self.spec, state, self.state_of(k, v))
            if sub_lo == 0 and sub_hi == block:
                grouped[st] += 1
            else:
                total += self._range(k - 1, st, sub_lo, sub_hi)
        rest = self._sorted_levels(k - 1)
        for st, mult in grouped.items():
            total += mult * self.full(rest, st)
        return total

    def count_range_naive(self, lo: int, hi: int) -> int:
        """BPF tuples with rank in [lo, hi), one tuple at a time."""
        spec = self.spec
        radices = self.radices
        hits = 0
        for r in range(lo, hi):
            st = None
            for level, R in enumerate(radices):
                r, v = divmod(r, R)
                st = combine_states(spec, st, self.state_of(level, v))
            if state_trivial(st):
                hits += 1
        return hits


_MISSING = object()


@lru_cache(maxsize=64)
def _counter(spec: FieldSpec, degrees: tuple) -> _BpfCounter:
    return _BpfCounter(spec, degrees)


def _count_part(args) -> int:
    spec, degrees, index, total, strategy = args
    c = _counter(spec, degrees)
    size = math.prod(c.radices)
    lo, hi = index * size // total, (index + 1) * size // total
    if strategy == "naive":
        return c.count_range_naive(lo, hi)
    return c.count_range(lo, hi)


def count_basepoint_free(spec: FieldSpec, degrees: Sequence[int], workers: int = 1,
                         strategy: str = "memo",
                         progress: Optional[Callable[[int, int], None]] = None) -> int:
    """Number of basepoint-free tuples of forms with the given degrees."""
    degrees = tuple(degrees)
    if strategy not in ("memo", "naive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not degrees:
        return 0
    workers = max(1, int(workers))
    jobs = [(spec, degrees, i, workers, strategy) for i in range(workers)]
    if workers == 1:
        parts = [_count_part(jobs[0])]
    else:
        parts = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for done, got in enumerate(pool.map(_count_part, jobs), 1):
                parts.append(got)
                if progress:
                    progress(done, workers)
    return sum(parts)


def _check_budget(space: TupleSpace, budget: Optional[int]):
    budget = DEFAULT_BUDGET if budget is None else budget
    if space.size > budget:
        raise BudgetExceeded(f"{space.size} tuples exceed the budget of {budget}")


def _wild(spec: FieldSpec, w: WeightVector) -> bool:
    return any(x % spec.p == 0 for x in w)


def brute_weighted_count(spec: FieldSpec, w, n: int, workers: int = 1,
                         budget: Optional[int] = None, strategy: str = "memo",
                         progress=None) -> CountResult:
    """Mass formula: (# basepoint-free tuples) / (q - 1)."""
    w = as_weights(w)
    _check_n(n)
    space = TupleSpace(spec, w, n)
    _check_budget(space, budget)
    bpf = count_basepoint_free(spec, space.degrees, workers, strategy, progress)
    q = spec.q
    assert bpf % (q - 1) == 0, "mass formula integrality failed"
    res = CountResult(Fraction(bpf, q - 1), "brute_force", tuple_count=bpf, wild=_wild(spec, w))
    if res.wild:
        res.notes.append("wild characteristic: closed forms do not apply")
    return res


def _fixed_count_by_support(spec, w, n, support, workers, strategy, cache):
    key = tuple(support)
    if key not in cache:
        degs = tuple(n * w.lambdas[i] for i in support)
        cache[key] = count_basepoint_free(spec, degs, workers, strategy) if degs else 0
    return cache[key]


def brute_iso_count(spec: FieldSpec, w, n: int, workers: int = 1,
                    budget: Optional[int] = None, strategy: str = "memo") -> CountResult:
    """Orbits of F_q^* on basepoint-free tuples, by Burnside's lemma.

    zeta fixes a tuple iff every form whose weight satisfies zeta^l != 1 is
    zero, so |Fix(zeta)| is a basepoint-free count on the remaining forms.
    """
    w = as_weights(w)
    _check_n(n)
    space = TupleSpace(spec, w, n)
    _check_budget(space, budget)
    if strategy == "naive":
        return _brute_iso_naive(spec, w, n, space)
    cache = {}
    fixed_total = 0
    for z in range(1, spec.q):
        support = [i for i, lam in enumerate(w) if spec.pow(z, lam) == 1]
        fixed_total += _fixed_count_by_support(spec, w, n, support, workers, strategy, cache)
    q = spec.q
    assert fixed_total % (q - 1) == 0, "Burnside average is not an integer"
    full = cache[tuple(range(len(w)))]
    return CountResult(Fraction(fixed_total, q - 1), "burnside", tuple_count=full,
                       wild=_wild(spec, w))


def _brute_iso_naive(spec, w, n, space) -> CountResult:
    q = spec.q
    # number of zeta fixing a tuple depends only on its support mask
    stab = {}
    for mask in range(1 << len(w)):
        stab[mask] = sum(
            1 for z in range(1, q)
            if all(spec.pow(z, w.lambdas[i]) == 1 for i in range(len(w)) if mask >> i & 1))
    c = _BpfCounter(spec, space.degrees)
    fixed_total = bpf = 0
    for r in range(space.size):
        st, mask = None, 0
        for level, R in enumerate(c.radices):
            r, v = divmod(r, R)
            if v:
                mask |= 1 << level
            st = combine_states(spec, st, c.state_of(level, v))
        if state_trivial(st):
            bpf += 1
            fixed_total += stab[mask]
    assert fixed_total % (q - 1) == 0
    return CountResult(Fraction(fixed_total, q - 1), "burnside", tuple_count=bpf,
                       wild=_wild(spec, w))


def brute_discriminant_count(spec: FieldSpec, w, n: int,
                             budget: Optional[int] = None) -> CountResult:
    """Nonzero tuples with a common zero, divided by q - 1 (direct enumeration)."""
    w = as_weights(w)
    _check_n(n)
    space = TupleSpace(spec, w, n)
    _check_budget(space, budget)
    c = _BpfCounter(spec, space.degrees)
    hits = 0
    for r in range(1, space.size):
        st = None
        for level, R in enumerate(c.radices):
            r, v = divmod(r, R)
            st = combine_states(spec, st, c.state_of(level, v))
        if not state_trivial(st):
            hits += 1
    q = spec.q
    assert hits % (q - 1) == 0
    return CountResult(Fraction(hits, q - 1), "brute_force", tuple_count=hits,
                       wild=_wild(spec, w))


def count(params: HomStackParams, method: str, workers: int = 1,
          budget: Optional[int] = None) -> CountResult:
    """Dispatch used by the CLI."""
    q = Q if params.field is None else params.field.q
    if method == "closed":
        return closed_weighted_count(q, params.weights, params.n)
    if method == "iso-closed":
        return closed_iso_count(q, params.weights, params.n)
    if method == "discriminant":
        return discriminant_weighted_count(q, params.weights, params.n)
    if params.field is None:
        raise StackyError(f"method {method!r} needs a numeric q")
    if method == "brute":
        return brute_weighted_count(params.field, params.weights, params.n, workers, budget)
    if method == "iso-brute":
        return brute_iso_count(params.field, params.weights, params.n, workers, budget)
    raise StackyError(f"unknown method {method!r}")
