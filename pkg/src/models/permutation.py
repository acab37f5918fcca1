"""
Permutation Model

Permutations of {0, ..., degree-1} stored as image tuples. Products compose
left to right: (a * b)[i] = b[a[i]], i.e. apply a first, then b.
"""

from math import lcm
from typing import Iterable, List, Sequence, Tuple

from src.services.errors import GroupInputError


Images = Tuple[int, ...]


def compose(a: Images, b: Images) -> Images:
    """Image tuple of a * b (a first)."""
    return tuple(b[i] for i in a)


def invert(a: Images) -> Images:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def conjugate(x: Images, g: Images, g_inv: Images) -> Images:
    """Image tuple of g^-1 * x * g."""
    return tuple(g[x[j]] for j in g_inv)


def power(a: Images, m: int) -> Images:
    if m < 0:
        a, m = invert(a), -m
    result = tuple(range(len(a)))
    base = a
    while m:
        if m & 1:
            result = compose(result, base)
        m >>= 1
        if m:
            base = compose(base, base)
    return result


def cycle_lengths(a: Images) -> List[int]:
    seen = [False] * len(a)
    lengths = []
    for start in range(len(a)):
        if seen[start]:
            continue
        n = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = a[i]
            n += 1
        lengths.append(n)
    return lengths


def element_order(a: Images) -> int:
    return lcm(*cycle_lengths(a)) if a else 1


class Permutation:
    """Immutable permutation on {0, ..., degree-1}."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise GroupInputError(f"not a bijection on 0..{len(images) - 1}: {list(images)}")
        self.images = images

    @classmethod
    def _trusted(cls, images: Images) -> "Permutation":
        obj = cls.__new__(cls)
        obj.images = images
        return obj

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        for cycle in cycles:
            for pos, point in enumerate(cycle):
                if not 0 <= point < degree:
                    raise GroupInputError(f"point {point} outside 0..{degree - 1}")
                images[point] = cycle[(pos + 1) % len(cycle)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise GroupInputError("degree mismatch in product")
        return Permutation._trusted(compose(self.images, other.images))

    def __pow__(self, m: int) -> "Permutation":
        return Permutation._trusted(power(self.images, m))

    def inverse(self) -> "Permutation":
        return Permutation._trusted(invert(self.images))

    def order(self) -> int:
        return element_order(self.images)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            i = self.images[start]
            while i != start:
                cycle.append(i)
                seen.add(i)
                i = self.images[i]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation({cyc or '()'}, degree={self.degree})"
