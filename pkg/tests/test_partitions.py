from collections import Counter
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hilbqde.algebra import t1, t2
from hilbqde.partitions import (BoxOutsideDiagram, Partition, arm_leg, content_order_lt, content_sum,
                                dominance_leq, enumerate_partitions, f2, hook_product, nstat,
                                parse_partition, tangent_weights, transpose, zmu)

# p(n) for n = 0..20
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627]

partitions = st.integers(0, 9).flatmap(lambda n: st.sampled_from(enumerate_partitions(n)))


def swap(f):
    return f.subs({"t1": t2, "t2": t1})


def test_enumeration_order():
    assert enumerate_partitions(3) == (Partition((3,)), Partition((2, 1)), Partition((1, 1, 1)))
    assert enumerate_partitions(0) == (Partition(()),)
    assert len(enumerate_partitions(5)) == 7


def test_partition_counts():
    assert [len(enumerate_partitions(n)) for n in range(21)] == PARTITION_COUNTS


def test_enumeration_is_strictly_decreasing_lex():
    for n in range(1, 10):
        ps = enumerate_partitions(n)
        assert all(tuple(a) > tuple(b) for a, b in zip(ps, ps[1:]))


def test_zmu():
    assert zmu((2, 1)) == 2
    assert zmu((1, 1, 1)) == 6
    assert zmu(()) == 1
    assert zmu((2, 2, 1)) == 8


def test_arm_leg():
    assert arm_leg((2,), (1, 1)) == (1, 0)
    assert arm_leg((1,), (1, 1)) == (0, 0)
    assert arm_leg((2, 1), (1, 1)) == (1, 1)
    with pytest.raises(BoxOutsideDiagram):
        arm_leg((2, 1), (2, 2))
    with pytest.raises(BoxOutsideDiagram):
        arm_leg((2,), (0, 1))


def test_content_sum():
    assert content_sum((1,)).is_zero()
    assert content_sum((3,)) == 3 * t1
    assert content_sum((2, 1)) == t1 + t2
    assert content_sum(()).is_zero()


def test_tangent_weights():
    assert Counter(map(str, tangent_weights((1,)))) == Counter(map(str, [t1, t2]))
    want = [2 * t1, -t1 + t2, t1, t2]
    assert Counter(map(str, tangent_weights((2,)))) == Counter(map(str, want))
    assert tangent_weights(()) == []


def test_small_statistics():
    assert hook_product((2, 1)) == 3
    assert transpose((3,)) == Partition((1, 1, 1))
    assert f2((2,)) == 1 and f2((1, 1)) == -1
    assert content_order_lt((1, 1), (2,))
    assert nstat((2, 1, 1)) == 3


def test_hook_length_formula():
    # n! / h_lambda counts standard tableaux; squares sum to n!
    from math import factorial
    for n in range(1, 9):
        assert sum((factorial(n) // hook_product(l)) ** 2 for l in enumerate_partitions(n)) == factorial(n)


def test_serialization():
    assert str(Partition((2, 1))) == "2,1"
    assert str(Partition(())) == "-"
    assert parse_partition("3,1,1") == Partition((3, 1, 1))
    assert parse_partition("-") == Partition(())
    assert parse_partition("1,2") == Partition((2, 1))
    for bad in ("a,1", "2,0", "3,-1"):
        with pytest.raises(ValueError):
            parse_partition(bad)


@given(partitions)
def test_transpose_involution(lam):
    assert transpose(transpose(lam)) == lam
    assert sum(transpose(lam)) == sum(lam)


@given(partitions)
def test_content_sum_transposes(lam):
    assert swap(content_sum(lam)) == content_sum(transpose(lam))


@given(partitions)
def test_tangent_weights_transpose(lam):
    a = Counter(str(swap(w)) for w in tangent_weights(lam))
    b = Counter(map(str, tangent_weights(transpose(lam))))
    assert a == b
    assert len(tangent_weights(lam)) == 2 * sum(lam)


def test_dominance_refined_by_content():
    for n in range(1, 11):
        ps = enumerate_partitions(n)
        for lam, mu in product(ps, ps):
            if dominance_leq(lam, mu) and lam != mu:
                assert f2(lam) < f2(mu)


def test_dominance_incomparable():
    assert dominance_leq((3, 1, 1, 1), (2, 2, 2)) is None
    assert dominance_leq((1, 1), (2,)) is True
    assert dominance_leq((2,), (1, 1)) is False
