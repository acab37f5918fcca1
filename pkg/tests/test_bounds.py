from fractions import Fraction

import pytest
from sympy import npartitions

from src.services.bounds import (
    alt_aut_class_count,
    brauer_min_k,
    certified_interval,
    even_partition_count,
    partition_count,
    partition_growth_check,
    perm_order_bound,
)
from src.services.constructions import alt
from src.services.errors import GroupInputError


def test_partition_counts():
    assert partition_count(0) == 1
    assert partition_count(5) == 7
    assert partition_count(10) == 42
    assert partition_count(25) == 1958
    assert all(partition_count(d) == npartitions(d) for d in range(0, 200, 7))
    with pytest.raises(GroupInputError):
        partition_count(-1)


def test_even_partitions_count_alternating_cycle_types():
    assert even_partition_count(4) == 3
    assert even_partition_count(5) == 4


@pytest.mark.parametrize("d", [5, 6, 7])
def test_alternating_class_numbers(d):
    counts = alt_aut_class_count(d)
    assert counts.k == len(alt(d).classes)


def test_aut_classes_of_alt6():
    counts = alt_aut_class_count(6)
    assert counts.k == 7
    assert counts.k_star == 5
    assert counts.out_order == 4
    assert alt_aut_class_count(5).k_star == 4


def test_exact_permutation_bounds():
    bound = perm_order_bound("primitive_not_alt", 7)
    assert bound.exact == "576"
    assert bound.floor == bound.ceiling == 576
    assert perm_order_bound("no_large_alt", 4, d=4).exact == "24"
    assert perm_order_bound("no_large_alt", 9, d=5).exact == "14400"


def test_irrational_permutation_bound_is_bracketed():
    bound = perm_order_bound("primitive_not_alt", 5)
    assert bound.exact is None
    assert bound.ceiling == bound.floor + 1
    assert Fraction(bound.lower) <= Fraction(bound.upper)
    assert bound.floor ** 3 < 24 ** 4 < bound.ceiling ** 3


def test_log_bound():
    assert perm_order_bound("log_p", 1, p=7).exact == "1"
    bound = perm_order_bound("log_p", 2, p=7)
    assert bound.floor == 3
    with pytest.raises(GroupInputError):
        perm_order_bound("log_p", 2, p=8)
    with pytest.raises(GroupInputError):
        perm_order_bound("cubic", 3)


def test_brauer_minimum():
    b = brauer_min_k(17)
    assert b.exact == "8" and b.perfect_square
    assert brauer_min_k(5).exact == "4"
    b = brauer_min_k(7)
    assert (b.floor, b.ceiling) == (4, 5)
    assert not b.perfect_square
    with pytest.raises(GroupInputError):
        brauer_min_k(9)


def test_certified_interval_shortcut():
    assert certified_interval(lambda: None, Fraction(7, 2)) == (Fraction(7, 2), Fraction(7, 2), 3, 4)


def test_partition_growth_holds_up_to_1000():
    failures = [d for d in range(1, 1001) if not partition_growth_check(d)]
    assert failures == []
