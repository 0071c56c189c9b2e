import itertools
import math

import pytest

from stacky_count.binary_forms import (
    BinaryForm,
    FormTuple,
    WeightVector,
    is_basepoint_free,
    tuple_gcd_degree,
    tuple_space_iter,
)
from stacky_count.errors import PartitionOutOfRange
from stacky_count.finite_field import field_create

F3 = field_create(3)


def ft(w, n, *coeffs, F=F3):
    return FormTuple.from_ints(F, w, n, coeffs)


def test_weight_vector():
    w = WeightVector((4, 6))
    assert (w.N, w.total, w.lcm, w.gcd, w.eta) == (1, 10, 12, 2, (3, 2))
    assert all(e * l == w.lcm for e, l in zip(w.eta, w.lambdas))
    with pytest.raises(ValueError):
        WeightVector((1, 0))


def test_gcd_examples():
    assert tuple_gcd_degree(ft((1, 1), 1, [0, 1], [1, 0])) == 0  # (x, y)
    assert tuple_gcd_degree(ft((2, 2), 1, [1, 0, 1], [2, 0, 1])) == 0  # x^2+y^2, x^2-y^2
    assert tuple_gcd_degree(ft((2, 2), 1, [0, 1, 0], [0, 0, 1])) == 1  # xy, x^2
    assert tuple_gcd_degree(ft((2, 2), 1, [1, 0, 0], [0, 1, 0])) == 1  # y^2, xy share y
    assert tuple_gcd_degree(ft((1, 2), 1, [0, 0], [0, 0, 0])) == math.inf


def test_basepoint_free_examples():
    assert is_basepoint_free(ft((1, 1), 1, [0, 1], [1, 0]))
    assert not is_basepoint_free(ft((1, 2), 1, [0, 0], [0, 0, 1]))  # (0, x^2)
    assert not is_basepoint_free(ft((1, 1), 1, [0, 0], [0, 0]))
    # x^2+1 has no F_3 root but still a common zero with itself over the closure
    assert not is_basepoint_free(ft((2, 2), 1, [1, 0, 1], [2, 0, 2]))


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        ft((1, 2), 1, [0, 1], [1, 0])


def test_iter_counts():
    assert sum(1 for _ in tuple_space_iter(F3, (1, 2), 1)) == 243
    assert sum(1 for _ in tuple_space_iter(field_create(2), (1, 1), 1)) == 16
    parts = [list(tuple_space_iter(F3, (1, 2), 1, (i, 3))) for i in range(3)]
    assert [len(p) for p in parts] == [81, 81, 81]
    keys = [tuple(f.values for f in t.forms) for p in parts for t in p]
    assert len(set(keys)) == 243


@pytest.mark.parametrize("total", [1, 2, 5, 7, 243, 300])
def test_partitions_cover_exactly_once(total):
    seen = []
    for i in range(total):
        seen.extend(tuple(f.values for f in t.forms)
                    for t in tuple_space_iter(F3, (1, 2), 1, (i, total)))
    assert len(seen) == 243 and len(set(seen)) == 243


def test_partition_errors():
    with pytest.raises(PartitionOutOfRange):
        list(tuple_space_iter(F3, (1, 1), 1, (3, 3)))
    with pytest.raises(PartitionOutOfRange):
        list(tuple_space_iter(F3, (1, 1), 1, (0, 0)))


def _roots_closure_oracle(t):
    """Independent BPF test over small fields: evaluate on P^1(F_{3^k}) for
    k up to the largest degree (every common factor has a root there)."""
    from stacky_count.finite_field import field_create as fc

    degs = [f.degree for f in t.forms if not f.is_zero()]
    if not degs:
        return False
    for k in range(1, max(degs) + 1):
        E = fc(3, k)
        # embed F_3 coefficients (prime field) into E
        points = [(E.element(x), E.element(1)) for x in range(E.q)] + [(E.element(1), E.element(0))]
        for x, y in points:
            if all(sum((E.element(c.value) * x**i * y ** (f.degree - i)
                        for i, c in enumerate(f.coeffs)), E.element(0)).is_zero()
                   for f in t.forms if not f.is_zero()):
                return False
    return True


def test_bpf_matches_point_evaluation_oracle():
    for t in tuple_space_iter(F3, (1, 2), 1):
        assert is_basepoint_free(t) == _roots_closure_oracle(t)


def test_scaling_invariance_exhaustive():
    w = WeightVector((1, 2))
    for t in tuple_space_iter(F3, w, 1):
        base = tuple_gcd_degree(t)
        for z in (1, 2):
            zeta = F3.element(z)
            s = FormTuple(tuple(f.scaled(zeta**l) for f, l in zip(t.forms, w)), w, 1)
            assert tuple_gcd_degree(s) == base


def test_swap_invariance_exhaustive():
    for t in tuple_space_iter(F3, (1, 2), 1):
        assert is_basepoint_free(t) == is_basepoint_free(t.swapped())


def test_gcd_bounds():
    F = field_create(5)
    for vals in itertools.product(range(5), repeat=3):
        f = BinaryForm.from_ints(F, vals)
        t = FormTuple((f, f), WeightVector((2, 2)), 1)
        d = tuple_gcd_degree(t)
        if f.is_zero():
            assert d == math.inf
        else:
            assert d == 2
        g = BinaryForm.from_ints(F, [1, 1, 0])
        d2 = tuple_gcd_degree(FormTuple((f, g), WeightVector((2, 2)), 1))
        assert d2 <= 2


def test_str():
    F = field_create(2, 2)
    f = BinaryForm.from_ints(F, [1, 0, 2])
    assert str(f) == "g x^2 + y^2"
    assert str(BinaryForm.from_ints(F3, [0, 0])) == "0"
