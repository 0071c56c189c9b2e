from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from stacky_count.binary_forms import WeightVector, is_basepoint_free, tuple_space_iter
from stacky_count.errors import BudgetExceeded, DegreeNonPositive, WildCharacteristic
from stacky_count.finite_field import field_create, field_from_q
from stacky_count.stack_count import (
    HomStackParams,
    ambient_count,
    brute_discriminant_count,
    brute_iso_count,
    brute_weighted_count,
    closed_iso_count,
    closed_weighted_count,
    count_basepoint_free,
    discriminant_weighted_count,
)

q = sympy.Symbol("q")

# frozen oracle values (independent enumeration / group orders)
WEIGHTED = [
    (2, (1, 1), 1, 6),
    (3, (1, 1), 1, 24),  # |PGL_2(F_3)|
    (3, (1, 1), 2, 216),
    (3, (1, 2), 1, 72),
    (5, (1, 2), 1, 600),
    (3, (2, 4), 1, 1944),
    (5, (1, 1, 1), 1, 3720),
    (7, (1, 1), 1, 336),
]


@pytest.mark.parametrize("qq,w,n,expected", WEIGHTED)
def test_closed_weighted(qq, w, n, expected):
    assert closed_weighted_count(qq, w, n).value == expected


@pytest.mark.parametrize("qq,w,n,expected", WEIGHTED)
@pytest.mark.parametrize("strategy", ["memo", "naive"])
def test_brute_weighted(qq, w, n, expected, strategy):
    r = brute_weighted_count(field_from_q(qq), w, n, strategy=strategy)
    assert r.value == expected
    assert r.tuple_count == (qq - 1) * expected
    assert r.method == "brute_force"


def test_pgl2_orders():
    for qq in (2, 3, 4, 5, 7, 8, 9):
        assert closed_weighted_count(qq, (1, 1), 1).value == qq * (qq * qq - 1)


def test_brute_vs_iterator_oracle():
    """Plain predicate loop over the public iterator."""
    F = field_create(3)
    hits = sum(is_basepoint_free(t) for t in tuple_space_iter(F, (1, 2), 1))
    assert hits == 144
    assert brute_weighted_count(F, (1, 2), 1).tuple_count == hits


def test_extension_field_brute():
    F = field_create(2, 2)
    assert brute_weighted_count(F, (1, 1), 1).value == closed_weighted_count(4, (1, 1), 1).value
    assert brute_weighted_count(F, (1, 1), 1, strategy="naive").value == 60
    F9 = field_create(3, 2)
    assert brute_weighted_count(F9, (1, 2), 1).value == closed_weighted_count(9, (1, 2), 1).value


@pytest.mark.parametrize("workers", [1, 2, 7])
def test_workers_independent(workers):
    F = field_create(3)
    assert brute_weighted_count(F, (2, 4), 1, workers=workers).tuple_count == 3888
    assert brute_weighted_count(F, (1, 2), 1, workers=workers, strategy="naive").tuple_count == 144


def test_partial_ranges_agree():
    from stacky_count.stack_count import _BpfCounter

    F = field_create(3)
    c = _BpfCounter(F, (1, 2, 2))
    size = 3**8
    cuts = [0, 1, 17, 243, 500, 2000, 3001, size]
    for lo, hi in zip(cuts, cuts[1:]):
        assert c.count_range(lo, hi) == c.count_range_naive(lo, hi)


def test_single_weight_is_empty():
    assert closed_weighted_count(5, (3,), 2).value == 0
    assert brute_weighted_count(field_create(5), (1,), 1).value == 0
    assert closed_weighted_count(q, (3,), 1).value == 0


def test_symbolic_closed():
    v = closed_weighted_count(q, (1, 2), 1).value
    assert sympy.expand(v - (1 + q) * (q**3 - q**2)) == 0
    assert closed_weighted_count("q", (1, 1), 1).value == sympy.expand(q**3 - q)


def test_errors():
    with pytest.raises(WildCharacteristic):
        closed_weighted_count(2, (2, 4), 1)
    with pytest.raises(WildCharacteristic):
        closed_weighted_count(9, (1, 3), 1)
    with pytest.raises(DegreeNonPositive):
        closed_weighted_count(3, (1, 1), 0)
    with pytest.raises(BudgetExceeded):
        brute_weighted_count(field_create(3), (1, 1), 1, budget=10)
    with pytest.raises(DegreeNonPositive):
        HomStackParams((1, 1), 0)


def test_wild_brute_flagged():
    r = brute_weighted_count(field_create(2), (2, 4), 1)
    assert r.wild and r.notes
    # the coprimality count itself does not see the weights
    assert r.value == Fraction(((1 + 2) * (2**6 - 2**5)))


ISO = [
    (3, (2, 4), 1, 3888),
    (3, (1, 2), 1, 72),
    (3, (1, 2, 2), 1, 3024),
    (5, (2, 2), 1, 6000),
]


@pytest.mark.parametrize("qq,w,n,expected", ISO)
def test_iso(qq, w, n, expected):
    assert closed_iso_count(qq, w, n).value == expected
    F = field_from_q(qq)
    assert brute_iso_count(F, w, n).value == expected
    assert brute_iso_count(F, w, n, strategy="naive").value == expected


def test_iso_trivial_stabilizer():
    assert closed_iso_count(3, (1, 1), 2).value == closed_weighted_count(3, (1, 1), 2).value


def test_iso_partial_stabilizer_decomposition():
    assert closed_iso_count(3, (1, 2, 2), 1).value == (
        closed_weighted_count(3, (1, 2, 2), 1).value + closed_weighted_count(3, (2, 2), 1).value)


def test_iso_234_q5_closed():
    # (1+5+25)(5^9-5^7) + (1+5)(5^6-5^5)
    assert closed_weighted_count(5, (2, 3, 4), 1).value == 58_125_000
    assert closed_iso_count(5, (2, 3, 4), 1).value == 58_200_000


ISO_EXTRA = [(7, (2, 4), 1), (7, (1, 3), 1), (5, (1, 2), 1), (7, (2, 3), 1), (5, (2, 2, 4), 1),
             (7, (1, 2, 3), 1), (4, (1, 3), 1), (9, (1, 2), 1)]


@pytest.mark.parametrize("qq,w,n", ISO_EXTRA)
def test_iso_brute_matches_closed_beyond_listed(qq, w, n):
    assert brute_iso_count(field_from_q(qq), w, n).value == closed_iso_count(qq, w, n).value


def test_discriminant():
    assert discriminant_weighted_count(3, (1, 2), 1).value == 49
    assert brute_discriminant_count(field_create(3), (1, 2), 1).value == 49
    v = discriminant_weighted_count(q, (1, 2), 1).value
    assert sympy.expand(v - (1 + q + 2 * q**2 + q**3)) == 0
    assert sympy.expand(discriminant_weighted_count(q, (4,), 1).value
                        - sum(q**i for i in range(5))) == 0


@pytest.mark.parametrize("w", [(1, 2), (1, 1), (2, 4), (1, 1, 1)])
@pytest.mark.parametrize("n", [1, 2])
def test_discriminant_codimension(w, n):
    v = sympy.Poly(discriminant_weighted_count(q, w, n).value, q)
    wv = WeightVector(w)
    dim = sum(n * x + 1 for x in w) - 1
    assert v.degree() == dim - wv.N


def test_sandwich_symbolic():
    for w in [(1, 2), (2, 3, 4), (1, 1, 1, 1)]:
        for n in (1, 2):
            total = (discriminant_weighted_count(q, w, n).value
                     + closed_weighted_count(q, w, n).value)
            assert sympy.expand(total - ambient_count(q, w, n)) == 0


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=3), st.sampled_from([2, 3, 4, 5]))
def test_random_memo_vs_naive(degs, qq):
    F = field_from_q(qq)
    assume(qq ** sum(d + 1 for d in degs) <= 4000)
    a = count_basepoint_free(F, degs, strategy="memo")
    b = count_basepoint_free(F, degs, strategy="naive")
    assert a == b
    assert a % (qq - 1) == 0
