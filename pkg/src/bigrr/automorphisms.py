"""Automorphisms of small finite groups.

Maps act on the right: ``g^phi`` is ``phi.image[g]``.  Enumeration works on
images of a short generating sequence; any assignment of generator images
that extends consistently to a bijection is an automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from bigrr.errors import CapExceededError, GroupValidationError, NotInvariantError
from bigrr.groups import FiniteGroup, Subgroup, closure

AUT_ORDER_CAP = 64


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    group: FiniteGroup
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if not is_automorphism(self.group, self.image):
            raise GroupValidationError("map is not an automorphism")

    def __call__(self, g: int) -> int:
        return self.image[g]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAutomorphism):
            return NotImplemented
        return self.group is other.group and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"GroupAutomorphism({list(self.image)})"

    @property
    def is_identity(self) -> bool:
        return all(i == g for g, i in enumerate(self.image))

    def then(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        """``g^(self other) = (g^self)^other``."""
        return GroupAutomorphism(self.group, tuple(other.image[x] for x in self.image))

    @cached_property
    def fixed(self) -> frozenset[int]:
        """The centraliser ``{g : g^phi = g}``."""
        return frozenset(g for g, x in enumerate(self.image) if x == g)

    @cached_property
    def inverted(self) -> frozenset[int]:
        """``{g : g^phi = g^-1}``."""
        inv = self.group.inv
        return frozenset(g for g, x in enumerate(self.image) if x == inv[g])

    def preserves(self, H: Subgroup) -> bool:
        return all(self.image[h] in H.memberset for h in H.members)


def is_automorphism(G: FiniteGroup, image: Sequence[int]) -> bool:
    """Full check: bijective, identity fixed, and ``(gh)^phi = g^phi h^phi``."""
    n = G.order
    if len(image) != n or sorted(image) != list(range(n)) or image[0] != 0:
        return False
    img = np.asarray(image, dtype=np.int64)
    T = G.array
    return bool((img[T] == T[img][:, img]).all())


def identity_automorphism(G: FiniteGroup) -> GroupAutomorphism:
    return GroupAutomorphism(G, tuple(range(G.order)))


def inner_automorphism(G: FiniteGroup, a: int) -> GroupAutomorphism:
    """Conjugation ``g -> a^-1 g a``."""
    return GroupAutomorphism(G, tuple(G.conj(g, a) for g in range(G.order)))


def generating_sequence(G: FiniteGroup, pool: Iterable[int] | None = None) -> list[int]:
    """Greedy generating sequence: repeatedly take the smallest element of
    ``pool`` (default: all elements) outside the closure of the prefix."""
    pool = range(G.order) if pool is None else sorted(pool)
    gens: list[int] = []
    reached = {0}
    for g in pool:
        if len(reached) == G.order:
            break
        if g not in reached:
            gens.append(g)
            reached = set(closure(G, gens))
    if len(reached) != G.order:
        raise GroupValidationError("pool does not generate the group")
    return gens


def hom_from_generators(
    G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> list[int] | None:
    """Extend ``gens[i] -> images[i]`` to a homomorphism ``G -> H``.

    Returns the image list, or ``None`` when the assignment is inconsistent or
    ``gens`` does not generate ``G``.
    """
    tg, th = G.table, H.table
    phi = [-1] * G.order
    phi[0] = 0
    frontier = [0]
    pairs = list(zip(gens, images))
    while frontier:
        nxt = []
        for x in frontier:
            px = phi[x]
            for s, si in pairs:
                y = tg[x][s]
                py = th[px][si]
                if phi[y] == -1:
                    phi[y] = py
                    nxt.append(y)
                elif phi[y] != py:
                    return None
        frontier = nxt
    if -1 in phi:
        return None
    # consistency on every (element, generator) edge implies a homomorphism
    return phi


class _Extender:
    """Incrementally extends a partial map on ``<gens[:k]>`` one generator at a time."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.phi = [-1] * G.order
        self.phi[0] = 0
        self.domain = [0]
        self.used = {0}

    def extend(self, gens: Sequence[int], images: Sequence[int]) -> "_Extender | None":
        t = self.G.table
        child = _Extender.__new__(_Extender)
        child.G = self.G
        phi = child.phi = list(self.phi)
        used = child.used = set(self.used)
        domain = list(self.domain)
        frontier = list(self.domain)
        pairs = list(zip(gens, images))
        # close the domain under all generators chosen so far, checking consistency
        while frontier:
            nxt = []
            for x in frontier:
                px = phi[x]
                for s, si in pairs:
                    y = t[x][s]
                    py = t[px][si]
                    if phi[y] == -1:
                        if py in used:
                            return None  # not injective
                        phi[y] = py
                        used.add(py)
                        domain.append(y)
                        nxt.append(y)
                    elif phi[y] != py:
                        return None
            frontier = nxt
        child.domain = domain
        return child


def _search_automorphisms(
    G: FiniteGroup, gens: Sequence[int], candidates: Sequence[Sequence[int]]
) -> Iterator[list[int]]:
    """Backtrack over generator images; candidates are tried in the given order."""
    k = len(gens)

    def rec(level: int, ext: _Extender, chosen: list[int]) -> Iterator[list[int]]:
        if level == k:
            yield ext.phi
            return
        for c in candidates[level]:
            if c in ext.used:
                continue  # gens[level] lies outside the current domain
            child = ext.extend(gens[: level + 1], chosen + [c])
            if child is not None:
                yield from rec(level + 1, child, chosen + [c])

    yield from rec(0, _Extender(G), [])


def automorphism_group(
    G: FiniteGroup, cap: int = AUT_ORDER_CAP, limit: int | None = None
) -> list[GroupAutomorphism]:
    """All automorphisms of ``G`` in lexicographic order of generator images.

    ``cap`` bounds ``|G|``; ``limit`` optionally bounds how many automorphisms
    may be produced before giving up.
    """
    if G.order > cap:
        raise CapExceededError(f"|G| = {G.order} exceeds automorphism cap {cap}")
    gens = generating_sequence(G)
    orders = G.orders
    candidates = [[c for c in range(G.order) if orders[c] == orders[g]] for g in gens]
    out = []
    for phi in _search_automorphisms(G, gens, candidates):
        out.append(GroupAutomorphism(G, tuple(phi)))
        if limit is not None and len(out) > limit:
            raise CapExceededError(f"more than {limit} automorphisms")
    return out


def iter_half_inverting(R: FiniteGroup, M: Subgroup, cap: int = AUT_ORDER_CAP) -> Iterator[GroupAutomorphism]:
    """Every non-identity automorphism with ``g^phi in {g, g^-1}`` on ``R \\ M``.

    Because ``R \\ M`` generates ``R``, a generating sequence drawn from
    ``R \\ M`` has at most two admissible images per generator, which makes the
    exhaustive search cheap.
    """
    if R.order > cap:
        raise CapExceededError(f"|R| = {R.order} exceeds automorphism cap {cap}")
    if M.index != 2:
        raise GroupValidationError("M must have index 2")
    outside = M.complement()
    gens = generating_sequence(R, outside)
    inv = R.inv
    candidates = [sorted({g, inv[g]}) for g in gens]
    for phi in _search_automorphisms(R, gens, candidates):
        if all(p == g for g, p in enumerate(phi)):
            continue
        if all(phi[g] == g or phi[g] == inv[g] for g in outside):
            yield GroupAutomorphism(R, tuple(phi))


def find_half_inverting_automorphism(
    R: FiniteGroup, M: Subgroup, cap: int = AUT_ORDER_CAP
) -> GroupAutomorphism | None:
    return next(iter_half_inverting(R, M, cap), None)


def complement_orbits(phi: GroupAutomorphism, M: Subgroup) -> list[list[int]]:
    """Orbits of ``<phi>`` on ``R \\ M``, each sorted, ordered by least element."""
    if not phi.preserves(M):
        raise NotInvariantError("M is not phi-invariant")
    seen: set[int] = set()
    orbits = []
    for g in M.complement():
        if g in seen:
            continue
        orb = [g]
        seen.add(g)
        x = phi.image[g]
        while x != g:
            orb.append(x)
            seen.add(x)
            x = phi.image[x]
        orbits.append(sorted(orb))
    return orbits


def complement_orbit_count(phi: GroupAutomorphism, M: Subgroup) -> int:
    return len(complement_orbits(phi, M))


def invariant_subset_count(phi: GroupAutomorphism, M: Subgroup) -> int:
    """Number of ``phi``-invariant subsets of ``R \\ M``: two to the orbit count."""
    return 2 ** complement_orbit_count(phi, M)
