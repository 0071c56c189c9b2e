"""Descent spectral sequence pages for Hom_n(C, P(lambda)).

Genus 0 is computed exactly: the E1 page has three columns built from the
ambient truncated polynomial ring, the d1 differentials are written down on
generators, and E2 is obtained by exact rank computations per bidegree.

For genus g the stable E2 page is modelled by monomials in
H^*(J(C)) [h]/h^N (x) Lambda[t] (x) Sym[alpha_1..alpha_2g].
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .binary_forms import WeightVector, as_weights
from .errors import UnstableRange

# -- weight classes ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class WeightClass:
    """Frobenius weight class q^j times e_wedge and h_sym of the curve's H^1.

    Tate(j) is (j, 0, 0).  One curve factor (wedge + sym == 1) is stored as
    wedge=1; traces of Lambda^1 and Sym^1 agree.
    """

    j: int
    wedge: int = 0
    sym: int = 0

    def __post_init__(self):
        if self.wedge < 0 or self.sym < 0:
            raise ValueError("negative curve degree")
        if self.wedge == 0 and self.sym == 1:
            object.__setattr__(self, "wedge", 1)
            object.__setattr__(self, "sym", 0)

    @property
    def kind(self) -> str:
        if self.wedge == 0 and self.sym == 0:
            return "tate"
        if self.wedge + self.sym == 1:
            return "curveH1"
        return "curve"

    @property
    def weight(self) -> int:
        return 2 * self.j + self.wedge + self.sym

    def block_dim(self, g: int) -> int:
        """Dimension of Lambda^wedge H^1 (x) Sym^sym H^1 for a genus-g curve."""
        return math.comb(2 * g, self.wedge) * math.comb(2 * g + self.sym - 1, self.sym)

    def __str__(self):
        if self.kind == "tate":
            return f"Tate({self.j})"
        if self.kind == "curveH1":
            return f"CurveH1Twist({self.j})"
        return f"Curve({self.j};wedge={self.wedge},sym={self.sym})"


def Tate(j: int) -> WeightClass:
    return WeightClass(j)


def CurveH1Twist(j: int) -> WeightClass:
    return WeightClass(j, 1, 0)


# -- page and table types ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class BigradedBasisMonomial:
    """A basis monomial of the stable E2 model.

    ``jacFactor`` is (i, index) for the index-th basis vector of H^i(J);
    ``alphaMultidegree`` is a sorted tuple of indices in 1..2g.
    """

    p: int
    jacFactor: tuple
    hPower: int
    tFlag: int
    alphaMultidegree: tuple

    def bidegree(self, N: int) -> tuple[int, int]:
        i = self.jacFactor[0]
        m = len(self.alphaMultidegree)
        q = i + 2 * self.hPower + self.tFlag * (2 * N + 2) + m * (2 * N + 1)
        return -self.p, q

    def weight_class(self, N: int) -> WeightClass:
        m = len(self.alphaMultidegree)
        return WeightClass(self.hPower + self.tFlag * (N + 1) + m * N, self.jacFactor[0], m)


@dataclass
class PageTable:
    entries: dict  # (-p, q) -> Counter[WeightClass] of dimensions
    N: int
    n: int
    g: int = 0
    stable_cutoff: Optional[int] = None  # n0 = n - 2g

    def dims(self) -> dict:
        return {k: sum(v.values()) for k, v in sorted(self.entries.items()) if sum(v.values())}

    def dim(self, p: int, q: int) -> int:
        return sum(self.entries.get((-p, q), Counter()).values())

    def columns(self) -> list:
        return sorted({-k[0] for k in self.entries})

    def outside_stable_range(self, p: int) -> bool:
        return self.g > 0 and self.stable_cutoff is not None and p > self.stable_cutoff


@dataclass
class CohomologyTable:
    dimension: int
    groups: dict  # degree i -> Counter[WeightClass] of dimensions
    genus: int = 0
    stable_cutoff: Optional[int] = None  # degrees above this are unverified
    warnings: tuple = ()

    def dim(self, i: int) -> int:
        return sum(self.groups.get(i, Counter()).values())

    def degrees(self) -> list:
        return sorted(i for i, c in self.groups.items() if sum(c.values()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees())

    def is_reliable(self, i: int) -> bool:
        return self.stable_cutoff is None or i <= self.stable_cutoff

    def restricted(self, max_degree: int) -> dict:
        return {i: self.groups[i] for i in self.degrees() if i <= max_degree}

    def to_json(self) -> dict:
        groups = []
        for i in self.degrees():
            classes = []
            for wc, mult in sorted(self.groups[i].items()):
                if not mult:
                    continue
                item = {"kind": wc.kind, "j": wc.j}
                if wc.kind == "curve":
                    item.update(wedge=wc.wedge, sym=wc.sym)
                item["mult"] = mult
                classes.append(item)
            groups.append({"i": i, "classes": classes})
        out = {"dimension": self.dimension, "genus": self.genus, "groups": groups}
        if self.stable_cutoff is not None:
            out["stable_cutoff"] = self.stable_cutoff
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CohomologyTable":
        groups = defaultdict(Counter)
        for grp in data.get("groups", []):
            i = int(grp["i"])
            for c in grp.get("classes", []):
                kind = c.get("kind", "tate")
                if kind == "tate":
                    wc = WeightClass(int(c["j"]))
                elif kind == "curveH1":
                    wc = WeightClass(int(c["j"]), 1, 0)
                elif kind == "curve":
                    wc = WeightClass(int(c["j"]), int(c.get("wedge", 0)), int(c.get("sym", 0)))
                else:
                    raise ValueError(f"unknown class kind {kind!r}")
                groups[i][wc] += int(c["mult"])
        return cls(int(data["dimension"]), dict(groups), int(data.get("genus", 0)),
                   data.get("stable_cutoff"), tuple(data.get("warnings", ())))


def _flatten(page: PageTable) -> dict:
    groups = defaultdict(Counter)
    for (mp, q), cnt in page.entries.items():
        for wc, m in cnt.items():
            if m:
                groups[q + mp][wc] += m
    return dict(groups)


# -- exact linear algebra -----------------------------------------------------------


def _rank(rows: list) -> int:
    """Rank of a matrix given as a list of dict rows {col: Fraction}."""
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        pivot_row = rows.pop()
        if not pivot_row:
            continue
        col, val = next(iter(pivot_row.items()))
        rank += 1
        new = []
        for r in rows:
            if col in r:
                f = Fraction(r[col]) / val
                for c, v in pivot_row.items():
                    r[c] = r.get(c, 0) - f * v
                    if r[c] == 0:
                        del r[c]
            if r:
                new.append(r)
        rows = new
    return rank


# -- genus 0 ------------------------------------------------------------------------


@dataclass
class Genus0Complex:
    """E1 page of the genus-0 descent spectral sequence with its d1 maps."""

    N: int
    n: int
    weights: WeightVector
    basis: dict  # column p -> list of (label, power, q)
    d1: dict  # (label, power) -> {(label, power): coefficient}

    @property
    def truncations(self) -> tuple[int, int, int]:
        M0 = self.weights.total * self.n + self.N + 1
        return M0, M0 - (self.N + 1), M0 - 2 * (self.N + 1)

    def by_degree(self, p: int) -> dict:
        out = defaultdict(list)
        for label, k, q in self.basis.get(p, []):
            out[q].append((label, k))
        return out

    def rank_out(self, p: int, q: int) -> int:
        """Rank of d1 leaving E1^{-p,q}."""
        if p == 0:
            return 0
        src = self.by_degree(p).get(q, [])
        return _rank([self.d1.get(b, {}) for b in src])

    def image(self, p: int) -> list:
        """Images of the generators of column p under d1."""
        return [(b, self.d1.get((b[0], b[1]), {})) for b in self.basis.get(p, [])]


def genus0_complex(N: int, n: int, weights=None) -> Genus0Complex:
    if N < 1 or n < 1:
        raise ValueError("need N >= 1 and n >= 1")
    w = as_weights(weights) if weights is not None else WeightVector((1,) * (N + 1))
    if w.N != N:
        raise ValueError(f"weights {w} do not have N+1 = {N + 1} entries")
    M0 = w.total * n + N + 1
    M1, M2 = M0 - (N + 1), M0 - 2 * (N + 1)
    basis = {
        0: [("h", j, 2 * j) for j in range(M0)],
        1: [("1h", j, 2 * N + 2 * j) for j in range(M1)]
        + [("eh", j, 2 * N + 2 + 2 * j) for j in range(M1)],
        2: [("1eh", j, 4 * N + 2 + 2 * j) for j in range(max(M2, 0))],
    }
    d1 = {}
    for j in range(M1):
        d1[("1h", j)] = {("h", N + j): Fraction(1)} if N + j < M0 else {}
        d1[("eh", j)] = {("h", N + 1 + j): Fraction(1)} if N + 1 + j < M0 else {}
    for j in range(max(M2, 0)):
        img = {}
        if N + 1 + j < M1:
            img[("1h", N + 1 + j)] = Fraction(1)
        if N + j < M1:
            img[("eh", N + j)] = Fraction(-1)
        d1[("1eh", j)] = img
    return Genus0Complex(N, n, w, basis, d1)


def _check_d1_squared(cx: Genus0Complex):
    for b, img in cx.image(2):
        total = defaultdict(Fraction)
        for tgt, c in img.items():
            for tt, c2 in cx.d1.get(tgt, {}).items():
                total[tt] += c * c2
        assert all(v == 0 for v in total.values()), "d1 o d1 != 0"


def _collapse_ok(e2: PageTable) -> bool:
    """Every d_r (r >= 2) into or out of a nonzero E2 entry hits a zero entry."""
    nz = {k for k, v in e2.entries.items() if sum(v.values())}
    for (mp, q) in nz:
        for r in range(2, 4):
            if (mp + r, q - r + 1) in nz or (mp - r, q + r - 1) in nz:
                return False
    return True


def genus0_pages(N: int, n: int, weights=None):
    """(E1, E2, table) for Hom_n(P^1, P(lambda)); default weights all 1."""
    cx = genus0_complex(N, n, weights)
    _check_d1_squared(cx)
    e1 = defaultdict(Counter)
    for p, items in cx.basis.items():
        for _, _, q in items:
            e1[(-p, q)][Tate(q // 2)] += 1
    e2 = defaultdict(Counter)
    for p in (0, 1, 2):
        for q, src in cx.by_degree(p).items():
            incoming = cx.rank_out(p + 1, q)
            d = len(src) - cx.rank_out(p, q) - incoming
            assert d >= 0
            if d:
                e2[(-p, q)][Tate(q // 2)] += d
    E1 = PageTable(dict(e1), N, n, 0, n)
    E2 = PageTable(dict(e2), N, n, 0, n)
    assert _collapse_ok(E2), "unexpected higher differential"
    table = CohomologyTable(cx.weights.total * n + N, _flatten(E2), 0, None)
    return E1, E2, table


def genus0_expected_table(N: int) -> dict:
    """H^{2j} = Tate(j) for j < N and H^{2j+1} = Tate(j+1) for N <= j < 2N."""
    out = {}
    for j in range(N):
        out[2 * j] = Counter({Tate(j): 1})
    for j in range(N, 2 * N):
        out[2 * j + 1] = Counter({Tate(j + 1): 1})
    return out


# -- stable genus-g model --------------------------------------------------------------


def _multisets(size: int, k: int) -> Iterable[tuple]:
    from itertools import combinations_with_replacement

    return combinations_with_replacement(range(1, size + 1), k)


def stable_monomials(g: int, N: int, n: int) -> list:
    """Explicit canonical basis (only sensible for small parameters)."""
    n0 = _n0(g, n)
    out = []
    for p in range(n0 + 1):
        for t in (0, 1):
            m = p - t
            if m < 0 or (m > 0 and g == 0):
                continue
            for i in range(2 * g + 1):
                for idx in range(math.comb(2 * g, i)):
                    for a in range(N):
                        for alpha in _multisets(2 * g, m):
                            out.append(BigradedBasisMonomial(p, (i, idx), a, t, tuple(alpha)))
    return sorted(out)


def _n0(g: int, n: int) -> int:
    if g < 0:
        raise ValueError("genus must be >= 0")
    if n < 2 * g:
        raise UnstableRange(f"need n >= 2g, got n={n}, g={g}")
    return n - 2 * g


def stable_e2_table(g: int, N: int, n: int) -> PageTable:
    """Dimensions and weights of the stable E2 page, columns p <= n - 2g."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n0 = _n0(g, n)
    entries = defaultdict(Counter)
    for p in range(n0 + 1):
        for t in (0, 1):
            m = p - t
            if m < 0 or (m > 0 and g == 0):
                continue
            sym_dim = math.comb(2 * g + m - 1, m) if m else 1
            for i in range(2 * g + 1):
                for a in range(N):
                    q = i + 2 * a + t * (2 * N + 2) + m * (2 * N + 1)
                    wc = WeightClass(a + t * (N + 1) + m * N, i, m)
                    entries[(-p, q)][wc] += math.comb(2 * g, i) * sym_dim
    return PageTable(dict(entries), N, n, g, n0)


STABLE_WARNING = (
    "genus > 0: E2 is modelled by the free algebra on h, t and alpha_i in the "
    "stable range; degrees above the cutoff are unverified"
)


def stable_cohomology_table(g: int, N: int, w, n: int) -> CohomologyTable:
    w = as_weights(w)
    if w.N != N:
        raise ValueError(f"weights {w} do not have N+1 = {N + 1} entries")
    page = stable_e2_table(g, N, n)
    D = w.total * n + N - 2 * g
    if g == 0:
        return CohomologyTable(D, _flatten(page), 0, None)
    return CohomologyTable(D, _flatten(page), g, page.stable_cutoff, (STABLE_WARNING,))
