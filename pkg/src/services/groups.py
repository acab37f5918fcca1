"""
Permutation Group Engine

Finite permutation groups held as fully enumerated element sets. Handles
closure, conjugacy classes, centralizers, normalizers, power maps, Sylow
subgroups, characteristic subgroups and quotients.
"""

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from math import lcm
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.config.settings import EngineConfig
from src.models.permutation import (
    Images,
    Permutation,
    compose,
    conjugate,
    element_order,
    invert,
    power,
)
from src.services.arithmetic import p_part
from src.services.errors import GroupInputError, ResourceCapError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    element_order: int


def _as_images(g, degree: int, field: str) -> Images:
    images = g.images if isinstance(g, Permutation) else tuple(int(i) for i in g)
    if len(images) != degree:
        raise GroupInputError(f"expected degree {degree}, got {len(images)}", field=field)
    if sorted(images) != list(range(degree)):
        raise GroupInputError("not a permutation of 0..degree-1", field=field)
    return images


def closure(degree: int, gens: Sequence[Images], cap: Optional[int] = None) -> List[Images]:
    """All products of `gens`, breadth first from the identity."""
    cap = cap or EngineConfig.MAX_GROUP_ORDER
    identity = tuple(range(degree))
    seen = {identity}
    elements = [identity]
    i = 0
    while i < len(elements):
        x = elements[i]
        i += 1
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > cap:
                    raise ResourceCapError(
                        f"group closure exceeds the enumeration cap of {cap} elements"
                    )
    return elements


class Group:
    """A finite permutation group with its enumerated element set."""

    def __init__(
        self,
        degree: int,
        generators: Iterable = (),
        name: Optional[str] = None,
        _elements: Optional[List[Images]] = None,
    ):
        if degree < 1:
            raise GroupInputError("degree must be positive", field="degree")
        self.degree = degree
        gens = []
        for k, g in enumerate(generators):
            images = _as_images(g, degree, f"generators[{k}]")
            if images != tuple(range(degree)) and images not in gens:
                gens.append(images)
        self.gens: Tuple[Images, ...] = tuple(gens)
        self.name = name or f"group(degree={degree})"
        self._elements = _elements
        self._index: Optional[Dict[Images, int]] = None
        self._classes: Optional[List[ConjugacyClass]] = None
        self._class_of: Optional[List[int]] = None
        self._power_maps: Dict[int, List[int]] = {}
        self._fingerprint: Optional[str] = None

    # ---- elements ----

    @property
    def generators(self) -> List[Permutation]:
        return [Permutation._trusted(g) for g in self.gens]

    @property
    def elements(self) -> List[Images]:
        if self._elements is None:
            self._elements = closure(self.degree, self.gens)
            logger.debug(f"[GROUP] {self.name}: enumerated {len(self._elements)} elements")
        return self._elements

    @property
    def index(self) -> Dict[Images, int]:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.elements)}
        return self._index

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Images:
        return tuple(range(self.degree))

    def contains(self, g) -> bool:
        images = g.images if isinstance(g, Permutation) else tuple(g)
        return images in self.index

    def is_trivial(self) -> bool:
        return not self.gens

    # ---- classes ----

    def _compute_classes(self) -> None:
        elems = self.elements
        index = self.index
        gen_pairs = [(g, invert(g)) for g in self.gens]
        raw_id = [-1] * len(elems)
        orbits: List[List[Images]] = []
        for start, x in enumerate(elems):
            if raw_id[start] >= 0:
                continue
            c = len(orbits)
            raw_id[start] = c
            orbit = [x]
            for y in orbit:
                for g, gi in gen_pairs:
                    z = conjugate(y, g, gi)
                    j = index[z]
                    if raw_id[j] < 0:
                        raw_id[j] = c
                        orbit.append(z)
            orbits.append(orbit)

        keyed = []
        for c, orbit in enumerate(orbits):
            rep = min(orbit)
            keyed.append(((element_order(rep), len(orbit), rep), c))
        keyed.sort()
        remap = [0] * len(orbits)
        classes = []
        for new, ((order, size, rep), old) in enumerate(keyed):
            remap[old] = new
            classes.append(ConjugacyClass(Permutation._trusted(rep), size, order))
        self._classes = classes
        self._class_of = [remap[c] for c in raw_id]
        logger.debug(f"[GROUP] {self.name}: {len(classes)} conjugacy classes")

    @property
    def classes(self) -> List[ConjugacyClass]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    def class_index(self, g) -> int:
        if self._class_of is None:
            self._compute_classes()
        images = g.images if isinstance(g, Permutation) else tuple(g)
        return self._class_of[self.index[images]]

    @property
    def class_of_element(self) -> List[int]:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of

    # ---- power maps ----

    def power_map(self, m: int) -> List[int]:
        cached = self._power_maps.get(m)
        if cached is not None:
            return cached
        images = []
        for cls in self.classes:
            rep = cls.representative.images
            images.append(self.class_index(power(rep, m % cls.element_order)))
        self._power_maps[m] = images
        return images

    @property
    def exponent(self) -> int:
        return lcm(*(c.element_order for c in self.classes))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class Subgroup(Group):
    """A subgroup of a parent Group, generated by permutations of the same degree."""

    def __init__(self, parent: Group, generators: Iterable = (), name: Optional[str] = None,
                 _elements: Optional[List[Images]] = None):
        super().__init__(parent.degree, generators, name=name or f"subgroup of {parent.name}",
                         _elements=_elements)
        self.parent = parent
        for k, g in enumerate(self.gens):
            if not parent.contains(g):
                raise GroupInputError("generator is not an element of the parent group",
                                      field=f"generators[{k}]")

    @classmethod
    def from_elements(cls, parent: Group, elements: Iterable[Images], name: Optional[str] = None) -> "Subgroup":
        """Subgroup with a known element set; picks a small generating set greedily."""
        target = sorted(set(elements))
        gens: List[Images] = []
        current = {parent.identity}
        for x in target:
            if x not in current:
                gens.append(x)
                current = set(closure(parent.degree, gens))
        if len(current) != len(target):
            raise GroupInputError("element set is not closed under multiplication")
        return cls(parent, gens, name=name, _elements=closure(parent.degree, gens))


# ==================== CONSTRUCTION ====================

def group_from_generators(degree: int, gens: Sequence, name: Optional[str] = None) -> Group:
    """Group generated by `gens`; an empty list yields the trivial group on `degree` points."""
    group = Group(degree, gens, name=name)
    logger.info(f"[GROUP] {group.name}: order {group.order}")
    return group


def conjugacy_classes(G: Group) -> List[ConjugacyClass]:
    return G.classes


def power_map(G: Group, classes: Sequence[ConjugacyClass], m: int) -> List[int]:
    if len(classes) != len(G.classes):
        raise GroupInputError("class list does not belong to this group")
    return G.power_map(m)


# ==================== SUBGROUPS ====================

def centralizer(G: Group, g) -> Subgroup:
    images = g.images if isinstance(g, Permutation) else tuple(g)
    if not G.contains(images):
        raise GroupInputError("element is not in the group")
    elems = [x for x in G.elements if compose(x, images) == compose(images, x)]
    return Subgroup.from_elements(G, elems, name=f"C({G.name})")


def _contained(G: Group, H: Group) -> None:
    if H.degree != G.degree or any(not G.contains(h) for h in H.gens):
        raise GroupInputError("subgroup is not contained in the group")


def normalizer(G: Group, H: Group) -> Subgroup:
    _contained(G, H)
    members = set(H.elements)
    elems = []
    for x in G.elements:
        xi = invert(x)
        if all(conjugate(h, x, xi) in members for h in H.gens):
            elems.append(x)
    return Subgroup.from_elements(G, elems, name=f"N({H.name})")


def is_normal(G: Group, H: Group) -> bool:
    _contained(G, H)
    members = set(H.elements)
    return all(conjugate(h, g, invert(g)) in members for h in H.gens for g in G.gens)


def normal_closure(G: Group, gens: Iterable, name: Optional[str] = None) -> Subgroup:
    """Smallest normal subgroup of G containing `gens`."""
    identity = G.identity
    current: List[Images] = []
    for g in gens:
        images = g.images if isinstance(g, Permutation) else tuple(g)
        if images != identity and images not in current:
            current.append(images)
    members = set(closure(G.degree, current))
    pairs = [(g, invert(g)) for g in G.gens]
    changed = True
    while changed:
        changed = False
        for s in list(current):
            for g, gi in pairs:
                c = conjugate(s, g, gi)
                if c not in members:
                    current.append(c)
                    members = set(closure(G.degree, current))
                    changed = True
    return Subgroup(G, current, name=name, _elements=closure(G.degree, current))


def commutator(a: Images, b: Images) -> Images:
    return compose(compose(invert(a), invert(b)), compose(a, b))


def derived_subgroup(H: Group) -> Subgroup:
    comms = [commutator(a, b) for i, a in enumerate(H.gens) for b in H.gens[i + 1:]]
    return normal_closure(H, comms, name=f"[{H.name},{H.name}]")


def is_abelian(H: Group) -> bool:
    return all(compose(a, b) == compose(b, a) for a in H.gens for b in H.gens)


def is_cyclic(H: Group) -> bool:
    n = H.order
    return any(element_order(x) == n for x in H.elements)


def is_p_group(H: Group, p: int) -> bool:
    return p_part(H.order, p) == H.order


def is_solvable(H: Group) -> bool:
    current: Group = H
    while not current.is_trivial():
        derived = derived_subgroup(current)
        if derived.order == current.order:
            return False
        current = derived
    return True


def frattini_subgroup(H: Group, p: int) -> Subgroup:
    """Phi(H) = H'H^p for a p-group H."""
    if not is_p_group(H, p):
        raise GroupInputError(f"Frattini subgroup requested on a group of order {H.order}, not a {p}-group")
    gens = list(derived_subgroup(H).gens)
    members = set(closure(H.degree, gens))
    for x in H.elements:
        y = power(x, p)
        if y not in members:
            gens.append(y)
            members = set(closure(H.degree, gens))
    return Subgroup(H, gens, name=f"Phi({H.name})", _elements=closure(H.degree, gens))


def _normal_core_by(G: Group, good: Callable[[int], bool], name: str) -> Subgroup:
    """Subgroup generated by class representatives whose normal closure has `good` order."""
    gens: List[Images] = []
    for cls in G.classes:
        rep = cls.representative.images
        if cls.element_order == 1 or not good(cls.element_order):
            continue
        if good(normal_closure(G, [rep]).order):
            gens.append(rep)
    return normal_closure(G, gens, name=name)


def p_prime_core(G: Group, p: int) -> Subgroup:
    """O_p'(G): largest normal subgroup of order prime to p."""
    return _normal_core_by(G, lambda n: n % p != 0, name=f"O_{p}'({G.name})")


def p_core(G: Group, p: int) -> Subgroup:
    """O_p(G): largest normal p-subgroup."""
    return _normal_core_by(G, lambda n: p_part(n, p) == n, name=f"O_{p}({G.name})")


def characteristic_subgroups(H: Group, p: Optional[int] = None) -> Dict[str, Subgroup]:
    """Derived subgroup, plus Frattini subgroup (p-groups only) and O_p'(H) when p is given."""
    result = {"derived": derived_subgroup(H)}
    if p is not None:
        if is_p_group(H, p):
            result["frattini"] = frattini_subgroup(H, p)
        result["p_prime_core"] = p_prime_core(H, p)
    return result


def sylow_subgroup(G: Group, p: int, seed: Optional[int] = None) -> Subgroup:
    """
    A Sylow p-subgroup: grow P by p-parts of elements of N_G(P) outside P.

    Candidates are scanned in a seeded random order, so the result is
    deterministic for a fixed seed.
    """
    target = p_part(G.order, p)
    rng = random.Random(EngineConfig.SEED if seed is None else seed)
    gens: List[Images] = []
    members = {G.identity}
    while len(members) < target:
        P = Subgroup(G, gens, _elements=list(members))
        candidates = list(normalizer(G, P).elements)
        rng.shuffle(candidates)
        for x in candidates:
            o = element_order(x)
            y = power(x, o // p_part(o, p))
            if y not in members:
                gens.append(y)
                members = set(closure(G.degree, gens))
                break
        else:
            raise RuntimeError(f"Sylow search stalled at order {len(members)} < {target}")
    name = f"Syl_{p}({G.name})"
    return Subgroup(G, gens, name=name, _elements=closure(G.degree, gens))


# ==================== QUOTIENTS ====================

def coset_action(G: Group, subgroups: Sequence[Group], name: Optional[str] = None) -> Group:
    """Action of G by right multiplication on the disjoint union of right coset spaces."""
    offset = 0
    images_per_gen = [[] for _ in G.gens]
    for K in subgroups:
        coset_of: Dict[Images, int] = {}
        reps: List[Images] = []
        k_elems = K.elements
        for x in G.elements:
            if x in coset_of:
                continue
            c = len(reps)
            reps.append(x)
            for k in k_elems:
                coset_of[compose(k, x)] = c
        for gi, g in enumerate(G.gens):
            images_per_gen[gi].extend(offset + coset_of[compose(r, g)] for r in reps)
        offset += len(reps)
    return Group(offset, images_per_gen, name=name)


def quotient_group(G: Group, N: Group) -> Group:
    """G/N as the coset action of G on G/N, with the kernel verified."""
    if not is_normal(G, N):
        raise GroupInputError(f"{N.name} is not normal in {G.name}")
    name = f"{G.name}/{N.name}"
    if N.order == 1:
        return Group(G.degree, G.gens, name=name, _elements=G.elements)
    expected = G.order // N.order
    spaces: List[Group] = [N]
    Q = coset_action(G, spaces, name=name)
    if Q.order != expected:
        # kernel of the action on G/N is core(N) = N; a mismatch means N was not normal
        raise RuntimeError(f"coset action of {G.name} on cosets of {N.name} has order {Q.order}, expected {expected}")
    return Q


# ==================== FINGERPRINTS ====================

def class_vector(G: Group) -> List[Tuple[int, int]]:
    return sorted((c.element_order, c.size) for c in G.classes)


def class_signature(G: Group) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """Order plus sorted (element order, class size) vector; an isomorphism invariant."""
    return G.order, tuple(class_vector(G))


def fingerprint(G: Group) -> str:
    if G._fingerprint is None:
        gen_hash = hashlib.sha256(json.dumps([list(g) for g in G.gens]).encode()).hexdigest()
        payload = {
            "order": G.order,
            "degree": G.degree,
            "classes": [list(c) for c in class_vector(G)],
            "generators": gen_hash,
        }
        G._fingerprint = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:32]
    return G._fingerprint
