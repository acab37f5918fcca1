import pytest

from src.services.character_table import character_kernel, character_table
from src.services.constructions import alt, cyclic, dihedral, direct_product, frobenius, sym
from src.services.errors import GroupInputError
from src.services.groups import Subgroup
from src.services.rationality import (
    conductor_level,
    default_p_prime_index_normal,
    detect_cyclic_sylow,
    find_pq_rational_witness,
    kernel_lemma_check,
    mckay_navarro_check,
    p_rationality_level,
    parat_statistics,
    principal_block_local_check,
    rationality_profile,
    sigma_fixed_exponent_check,
    sp_set,
    two_rational_check,
    verify_brauer_permutation_lemma,
    verify_class_side_lemmas,
    verify_over_normal_lemma,
    verify_theorem_1_1,
    verify_theorem_1_3,
)


def _faithful_rows(T):
    return [r for r in range(T.size) if character_kernel(T, r) == [0]]


# ---- levels ----

def test_levels_of_cyclic_nine(c9):
    T = character_table(c9)
    levels = {r: p_rationality_level(T, r, 3) for r in range(T.size)}
    faithful = _faithful_rows(T)
    assert len(faithful) == 6
    assert all(levels[r] == 2 for r in faithful)
    assert levels[T.trivial_index] == 0
    assert sorted(levels.values()) == [0, 1, 1, 2, 2, 2, 2, 2, 2]


def test_level_of_faithful_character_of_c4():
    T = character_table(cyclic(4))
    assert [p_rationality_level(T, r, 2) for r in _faithful_rows(T)] == [2, 2]


@pytest.mark.parametrize("G,p", [(cyclic(9), 3), (cyclic(8), 2), (sym(4), 2), (alt(5), 5), (frobenius(7, 1, 3), 7)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_galois_level_agrees_with_conductor(G, p):
    T = character_table(G)
    for r in range(T.size):
        assert p_rationality_level(T, r, p) == conductor_level(T, r, p)


# ---- counts ----

def test_profile_counts(frob_17_1_4, c9, sym4):
    assert rationality_profile(frob_17_1_4, 17).counts.parat == 8
    assert rationality_profile(c9, 3).counts.parat == 3
    counts = rationality_profile(sym4, 2).counts
    assert counts.parat == 5
    assert counts.pprime_parat == 4
    assert counts.k == 5


@pytest.mark.parametrize("G,p", [(sym(4), 3), (alt(5), 2), (frobenius(13, 1, 3), 13), (cyclic(27), 3)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_count_chain(G, p):
    c = rationality_profile(G, p).counts
    assert c.k >= c.parat >= c.pprime_parat >= c.b0_pprime_parat
    assert c.parat >= c.prat
    assert c.cl_pareg >= c.cl_preg


def test_profile_rejects_composite(sym3):
    with pytest.raises(GroupInputError):
        rationality_profile(sym3, 4)


def test_sp_sets():
    assert sp_set(2).values == [2]
    assert sp_set(3).values == [3]
    assert sp_set(11).values == [7, 11]
    assert sp_set(13).values == [7, 8, 13]
    with pytest.raises(GroupInputError):
        sp_set(4)


# ---- detector and local counts ----

def test_detector_on_sym4(sym4):
    verdict = detect_cyclic_sylow(sym4, 3)
    assert verdict.count == 3
    assert verdict.in_sp and verdict.actual_cyclic and verdict.agree


def test_detector_on_frobenius(frob_17_1_4):
    verdict = detect_cyclic_sylow(frob_17_1_4, 17)
    assert verdict.count == 8
    assert verdict.agree


def test_detector_needs_p_dividing_order(sym3):
    with pytest.raises(GroupInputError):
        detect_cyclic_sylow(sym3, 5)


def test_mckay_navarro_counts(sym4, alt5):
    report = mckay_navarro_check(sym4, 2)
    assert (report.lhs, report.rhs) == (4, 4)
    report = mckay_navarro_check(alt5, 5)
    assert (report.lhs, report.rhs) == (4, 4)
    assert report.normalizer_order == 10


# ---- bound theorems ----

def test_lower_bound_equality_for_frobenius_shape(frob_5_1_2):
    report = verify_theorem_1_1(frob_5_1_2, 5)
    assert report.passed
    assert report.facts["count"] == 4
    assert report.facts["equality"]
    assert report.facts["frobenius_shape"]


def test_lower_bound_on_other_groups(sym4, c9):
    report = verify_theorem_1_1(sym4, 2)
    assert report.passed and not report.facts["equality"]
    assert verify_theorem_1_1(c9, 3).passed
    assert not verify_theorem_1_1(sym4, 5).applicable


def test_pprime_equivalences(frob_5_1_2, sym4):
    report = verify_theorem_1_3(frob_5_1_2, 5)
    assert report.passed
    assert report.facts["cond_i"] and report.facts["cond_ii"] and report.facts["cond_iii"]
    report = verify_theorem_1_3(sym4, 3)
    assert report.passed
    assert not report.facts["cond_i"]


# ---- class side and lemmas ----

def test_class_side_on_sym3(sym3):
    report = verify_class_side_lemmas(sym3, 3)
    assert report.passed, report.violations
    assert report.facts["cl_pareg"] == 3
    assert report.facts["parat"] == 3


def test_class_side_with_sigma_count(c9):
    report = verify_class_side_lemmas(c9, 3)
    assert report.passed, report.violations
    assert report.facts["sigma_fixed_rows"] == 3


def test_class_side_rejects_two(sym3):
    with pytest.raises(GroupInputError):
        verify_class_side_lemmas(sym3, 2)


def test_brauer_lemma_fixed_counts_on_c5():
    report = verify_brauer_permutation_lemma(character_table(cyclic(5)))
    assert report.passed, report.violations
    assert report.facts["fixed_rows"] == {"1": 5, "2": 1, "3": 1, "4": 1}


def test_brauer_lemma_holds_for_two_groups(q8):
    for G in (q8, dihedral(4)):
        report = verify_brauer_permutation_lemma(character_table(G))
        assert report.passed, report.violations
        assert report.facts["fixed_rows"] == {"1": 5, "3": 5}


def test_over_normal_lemma(sym4):
    A4 = Subgroup(sym4, alt(4).gens)
    assert verify_over_normal_lemma(sym4, A4, 3).passed


def test_over_normal_lemma_on_alt5_times_c2():
    G = direct_product(alt(5), cyclic(2))
    N = default_p_prime_index_normal(G, 5)
    assert N.order == 60
    assert verify_over_normal_lemma(G, N, 5).passed


def test_over_normal_lemma_input_checks(sym4):
    C4 = Subgroup(sym4, [[1, 2, 3, 0]])
    with pytest.raises(GroupInputError):
        verify_over_normal_lemma(sym4, C4, 3)
    A4 = Subgroup(sym4, alt(4).gens)
    with pytest.raises(GroupInputError):
        verify_over_normal_lemma(sym4, A4, 2)


def test_pq_witnesses(sym3, alt5):
    T = character_table(sym3)
    w = find_pq_rational_witness(sym3, 2, 3)
    assert w is not None and w != T.trivial_index
    assert T.degrees[w] == 1
    assert find_pq_rational_witness(cyclic(15), 3, 5) is not None
    w = find_pq_rational_witness(alt5, 2, 5)
    assert character_table(alt5).degrees[w] == 3


def test_two_rational_counts(sym3):
    report = two_rational_check(cyclic(4))
    assert report.passed and report.facts["count"] == 2
    report = two_rational_check(sym3)
    assert report.passed and report.facts["count"] == 3
    assert not two_rational_check(cyclic(3)).applicable


def test_kernel_lemma_on_sym4(sym4):
    report = kernel_lemma_check(sym4, 2)
    assert report.applicable
    assert report.passed
    assert report.facts["normal_order"] == 4


def test_principal_block_local_counts(sym4):
    report = principal_block_local_check(sym4, 3)
    assert report.passed and report.facts["local_k"] == 3
    report = principal_block_local_check(sym4, 2)
    assert report.passed and report.facts["local_k"] == 4


def test_sigma_fixed_exponent(frob_5_1_2):
    report = sigma_fixed_exponent_check(frob_5_1_2, 5)
    assert report.applicable and report.passed
    assert report.facts["abelianization_exponent"] == 5


def test_parat_statistics(sym4):
    stats = parat_statistics(sym4, 2)
    assert stats.parat_over_p == "5/2"
    assert stats.ratio_to_frattini_rank == pytest.approx(2.0)


@pytest.mark.slow
def test_detector_on_navarro_group(navarro):
    verdict = detect_cyclic_sylow(navarro, 11)
    assert verdict.count == 10
    assert not verdict.in_sp
    assert not verdict.actual_cyclic
    assert verdict.agree
