"""Finite permutation groups with full element enumeration.

Elements are tuples ``g`` of images, ``g[i]`` being the image of point ``i``.
Composition is right-to-left: ``(g*h)(i) = g[h[i]]``.  Element ``k`` is reached
from the identity by the word ``words[k]`` (generator indices, applied left to
right), so its matrix in a representation is
``A[w[-1]] @ ... @ A[w[0]]``.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 512

Perm = tuple[int, ...]


class GroupError(ValueError):
    pass


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[i] for i in h)


def invert(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def _check_perm(g, degree: int) -> Perm:
    g = tuple(int(x) for x in g)
    if len(g) != degree:
        raise GroupError(f"permutation {g} has degree {len(g)}, expected {degree}")
    if sorted(g) != list(range(degree)):
        raise GroupError(f"{g} is not a permutation of 0..{degree - 1}")
    return g


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    words: tuple[tuple[int, ...], ...]
    mult: np.ndarray = field(repr=False)
    inverse: tuple[int, ...] = field(repr=False)
    index: dict = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def element_index(self, g) -> int:
        try:
            return self.index[tuple(g)]
        except KeyError:
            raise GroupError(f"{tuple(g)} is not an element of the group") from None

    def fingerprint(self) -> str:
        h = hashlib.sha256(repr((self.degree, self.generators)).encode())
        return h.hexdigest()[:16]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def element_order(self, k: int) -> int:
        n, cur = 1, k
        while cur != 0:
            cur = int(self.mult[k, cur])
            n += 1
        return n

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, degree={self.degree}, ngens={len(self.generators)})"


def build_group(gen_perms, degree: int | None = None) -> FiniteGroup:
    """Close the generators under composition by breadth-first search."""
    gen_perms = list(gen_perms)
    if degree is None:
        if not gen_perms:
            raise GroupError("a group without generators needs an explicit degree")
        degree = len(gen_perms[0])
    gens = tuple(_check_perm(g, degree) for g in gen_perms)
    ident = tuple(range(degree))
    elements = [ident]
    words: list[tuple[int, ...]] = [()]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for i, g in enumerate(gens):
            h = compose(g, elements[k])
            if h not in index:
                if len(elements) >= MAX_ORDER:
                    raise GroupError(f"group closure exceeds the order cap {MAX_ORDER}")
                index[h] = len(elements)
                elements.append(h)
                words.append(words[k] + (i,))
                queue.append(index[h])
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for a, ga in enumerate(elements):
        for b, gb in enumerate(elements):
            mult[a, b] = index[compose(ga, gb)]
    inverse = tuple(index[invert(g)] for g in elements)
    return FiniteGroup(degree, gens, tuple(elements), tuple(words), mult, inverse, index)


def subgroup(group: FiniteGroup, gen_indices) -> FiniteGroup:
    """The subgroup generated by the given element indices of ``group``."""
    gens = [group.elements[int(k)] for k in gen_indices]
    return build_group(gens, degree=group.degree)


def subgroup_indices(group: FiniteGroup, sub: FiniteGroup) -> list[int]:
    """Indices in ``group`` of the elements of ``sub``, in ``sub``'s order."""
    if sub.degree != group.degree:
        raise GroupError("subgroup has a different permutation degree")
    return [group.element_index(h) for h in sub.elements]


def left_cosets(group: FiniteGroup, sub: FiniteGroup) -> tuple[list[int], list[int]]:
    """Transversal of left cosets gH in BFS order, and the coset label of every element."""
    members = set(subgroup_indices(group, sub))
    label = [-1] * group.order
    transversal: list[int] = []
    for g in range(group.order):
        if label[g] >= 0:
            continue
        c = len(transversal)
        transversal.append(g)
        for h in members:
            label[int(group.mult[g, h])] = c
    return transversal, label


def cyclic_group(n: int) -> FiniteGroup:
    return build_group([tuple((i + 1) % n for i in range(n))])


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    """(C_p)^r acting regularly on p^r points, generator i shifting coordinate i."""
    n = p**r
    gens = []
    for i in range(r):
        step = p**i
        perm = []
        for x in range(n):
            digit = (x // step) % p
            perm.append(x - digit * step + ((digit + 1) % p) * step)
        gens.append(tuple(perm))
    return build_group(gens)


def trivial_group(degree: int = 1) -> FiniteGroup:
    return build_group([], degree=degree)
