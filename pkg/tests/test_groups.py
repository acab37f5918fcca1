import random

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

from src.config.settings import EngineConfig
from src.models.permutation import Permutation, conjugate, element_order, invert, power
from src.services.arithmetic import p_part
from src.services.constructions import (
    alt,
    construct,
    construct_from_spec,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    frobenius,
    quaternion,
    sl2_5,
    sym,
)
from src.services.errors import GroupInputError, ResourceCapError
from src.services.groups import (
    Group,
    Subgroup,
    centralizer,
    characteristic_subgroups,
    conjugacy_classes,
    derived_subgroup,
    fingerprint,
    frattini_subgroup,
    group_from_generators,
    is_abelian,
    is_cyclic,
    is_normal,
    is_solvable,
    normalizer,
    p_core,
    p_prime_core,
    power_map,
    quotient_group,
    sylow_subgroup,
)


def _as_sympy(G):
    gens = [SympyPermutation(list(g)) for g in G.gens] or [SympyPermutation(list(range(G.degree)))]
    return PermutationGroup(gens)


def _cycle(degree, *cycles):
    return Permutation.from_cycles(degree, [list(c) for c in cycles])


def test_generated_group_orders():
    G = group_from_generators(3, [_cycle(3, (0, 1)), _cycle(3, (0, 1, 2))])
    assert G.order == 6
    assert Group(4, []).order == 1
    assert Group(4, []).is_trivial()


def test_invalid_generator_is_rejected():
    with pytest.raises(GroupInputError):
        Group(3, [[0, 0, 1]])
    with pytest.raises(GroupInputError):
        Group(3, [[0, 1]])


def test_sym3_classes_sorted_by_order_then_size(sym3):
    classes = conjugacy_classes(sym3)
    assert [c.size for c in classes] == [1, 3, 2]
    assert [c.element_order for c in classes] == [1, 2, 3]


def test_class_sizes_divide_order(sym4, alt5):
    assert len(sym4.classes) == 5
    for G in (sym4, alt5):
        assert sum(c.size for c in G.classes) == G.order
        assert all(G.order % c.size == 0 for c in G.classes)


def test_cyclic_group_classes_are_singletons():
    G = cyclic(7)
    assert len(G.classes) == 7
    assert {c.size for c in G.classes} == {1}


def test_centralizers(sym3, sym4):
    assert centralizer(sym3, _cycle(3, (0, 1, 2))).order == 3
    assert centralizer(sym4, _cycle(4, (0, 1))).order == 4
    assert centralizer(sym4, Permutation.identity(4)).order == 24


def test_power_maps(sym3):
    classes = sym3.classes
    assert power_map(sym3, classes, 1) == [0, 1, 2]
    assert power_map(sym3, classes, 2) == [0, 0, 2]
    assert power_map(sym3, classes, 6) == [0, 0, 0]


def test_sylow_subgroups(sym4, alt5):
    assert sylow_subgroup(sym4, 2).order == 8
    assert sylow_subgroup(cyclic(6), 3).order == 3
    assert sylow_subgroup(alt5, 5).order == 5
    assert sylow_subgroup(sym4, 5).order == 1


def test_normalizers(sym4, alt5):
    C4 = Subgroup(sym4, [_cycle(4, (0, 1, 2, 3))])
    assert normalizer(sym4, C4).order == 8
    assert normalizer(alt5, sylow_subgroup(alt5, 5)).order == 10
    V4 = Subgroup(sym4, [_cycle(4, (0, 1), (2, 3)), _cycle(4, (0, 2), (1, 3))])
    assert is_normal(sym4, V4)
    assert normalizer(sym4, V4).order == 24


def test_characteristic_subgroups(q8):
    assert frattini_subgroup(cyclic(27), 3).order == 9
    assert frattini_subgroup(elementary_abelian(2, 3), 2).order == 1
    assert derived_subgroup(q8).order == 2
    found = characteristic_subgroups(q8, 2)
    assert found["derived"].order == 2


def test_cores(sym4, alt5):
    assert p_core(sym4, 2).order == 4
    assert p_prime_core(sym4, 2).order == 1
    assert p_prime_core(alt5, 5).order == 1
    assert p_core(frobenius(7, 1, 3), 7).order == 7


def test_quotients(sym4):
    V4 = Subgroup(sym4, [_cycle(4, (0, 1), (2, 3)), _cycle(4, (0, 2), (1, 3))])
    Q = quotient_group(sym4, V4)
    assert Q.order == 6
    assert len(Q.classes) == 3
    assert quotient_group(sym4, sym4).order == 1
    C4 = cyclic(4)
    C2 = Subgroup(C4, [power(C4.gens[0], 2)])
    assert quotient_group(C4, C2).order == 2


def test_named_constructions(q8):
    assert dihedral(4).order == 8
    assert q8.order == 8
    assert not is_abelian(q8)
    assert is_cyclic(cyclic(9))
    F = frobenius(5, 1, 4)
    assert F.order == 20
    assert len(F.classes) == 5
    assert frobenius(17, 1, 4).order == 68
    S = sl2_5()
    assert S.degree == 24
    assert S.order == 120


def test_construct_specs():
    assert construct("direct_product", [["cyclic", [2]], ["cyclic", [3]]]).order == 6
    assert construct_from_spec({"construct": "alt", "params": [4]}).order == 12
    assert direct_product(sym(3), cyclic(5)).order == 30
    with pytest.raises(GroupInputError):
        construct("monster", [])
    with pytest.raises(GroupInputError):
        construct("cyclic", [1, 2, 3])


@pytest.mark.parametrize("G", [sym(4), alt(5), dihedral(5), quaternion(8), frobenius(7, 1, 3), direct_product(sym(3), cyclic(3))],
                         ids=lambda G: G.name)
def test_agrees_with_sympy(G):
    oracle = _as_sympy(G)
    assert G.order == oracle.order()
    assert len(G.classes) == len(oracle.conjugacy_classes())
    assert is_solvable(G) == oracle.is_solvable


def test_fingerprint_is_deterministic():
    assert fingerprint(sym(4)) == fingerprint(sym(4))
    assert fingerprint(sym(4)) != fingerprint(dihedral(4))


def test_group_order_cap(monkeypatch):
    monkeypatch.setattr(EngineConfig, "MAX_GROUP_ORDER", 100)
    with pytest.raises(ResourceCapError):
        _ = sym(6).order


@pytest.mark.slow
def test_navarro_group_order(navarro):
    assert navarro.order == 14520


CORPUS_SAMPLE = [sym(4), alt(5), dihedral(5), quaternion(8), frobenius(7, 1, 3), direct_product(sym(3), cyclic(3))]


def test_class_size_times_centralizer_order():
    rng = random.Random(EngineConfig.SEED)
    for _ in range(100):
        G = rng.choice(CORPUS_SAMPLE)
        g = rng.choice(G.elements)
        size = G.classes[G.class_index(g)].size
        assert size * centralizer(G, g).order == G.order


def _sylow_by_brute_force(G, p):
    target = p_part(G.order, p)
    p_elements = [x for x in G.elements if target % element_order(x) == 0]
    found = set()
    for a in p_elements:
        for b in p_elements:
            H = Subgroup(G, [a, b])
            if H.order == target:
                found.add(frozenset(H.elements))
    return found


@pytest.mark.parametrize("G, p", [(sym(4), 2), (sym(4), 3), (alt(5), 2), (alt(5), 5), (dihedral(5), 2),
                                  (frobenius(7, 1, 3), 3)],
                         ids=lambda v: getattr(v, "name", str(v)))
def test_sylow_conjugates_cover_every_sylow_subgroup(G, p):
    P = sylow_subgroup(G, p)
    assert P.order == p_part(G.order, p)
    conjugates = set()
    for x in G.elements:
        xi = invert(x)
        conjugates.add(frozenset(conjugate(h, x, xi) for h in P.elements))
    assert conjugates == _sylow_by_brute_force(G, p)


@pytest.mark.parametrize("G", CORPUS_SAMPLE, ids=lambda G: G.name)
def test_power_maps_compose(G):
    e = G.exponent
    for a in range(1, min(e, 12) + 1):
        first = G.power_map(a)
        for b in range(1, min(e, 12) + 1):
            second = G.power_map(b)
            ab = a * b % e or e
            assert [second[first[k]] for k in range(len(G.classes))] == G.power_map(ab)


def test_quotients_have_fewer_classes(sym4, q8):
    V4 = Subgroup(sym4, [_cycle(4, (0, 1), (2, 3)), _cycle(4, (0, 2), (1, 3))])
    F = frobenius(7, 1, 3)
    D = dihedral(4)
    cases = [(sym4, V4), (sym4, derived_subgroup(sym4)), (q8, derived_subgroup(q8)),
             (D, derived_subgroup(D)), (F, p_core(F, 7)), (sym4, Group(4, []))]
    for G, N in cases:
        Q = quotient_group(G, N)
        assert Q.order == G.order // N.order
        assert len(Q.classes) <= len(G.classes)
