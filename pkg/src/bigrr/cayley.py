"""Bipartite Cayley digraphs ``Cay(R, S)`` with ``S`` inside ``R \\ M``.

``(g, h)`` is an arc exactly when ``g h^-1`` lies in ``S``, so the
out-neighbours of ``g`` are ``s^-1 g`` and its in-neighbours are ``s g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from bigrr.groups import FiniteGroup, Subgroup, closure
from bigrr.graphaut import Digraph, _bits


@dataclass(frozen=True, eq=False)
class ConnectionSet:
    group: FiniteGroup
    M: Subgroup
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.group.order:
            raise ValueError("connection set has bits outside the group")
        if self.bits & self.M.mask:
            raise ValueError("connection set meets M")

    @classmethod
    def from_elements(cls, R: FiniteGroup, M: Subgroup, elements: Iterable[int]) -> "ConnectionSet":
        bits = 0
        for s in elements:
            bits |= 1 << s
        return cls(R, M, bits)

    def elements(self) -> list[int]:
        return _bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, g: int) -> bool:
        return bool(self.bits >> g & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConnectionSet):
            return NotImplemented
        return self.group is other.group and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        return f"ConnectionSet({self.elements()})"


class CayleyDigraph(Digraph):
    """``Cay(R, S)`` together with the bipartition ``parts[g] = 0`` on ``M``, ``1`` off it."""

    def __init__(self, R: FiniteGroup, M: Subgroup, S: ConnectionSet):
        t, inv = R.table, R.inv
        elems = S.elements()
        out = [[t[inv[s]][g] for s in elems] for g in range(R.order)]
        super().__init__(R.order, out)
        self.group = R
        self.M = M
        self.S = S
        self.parts = tuple(0 if g in M.memberset else 1 for g in range(R.order))
        self._validate()

    def _validate(self) -> None:
        R, t, inv = self.group, self.group.table, self.group.inv
        k = len(self.S)
        for g in range(self.n):
            if len(self.out[g]) != k or self.in_mask[g].bit_count() != k:
                raise AssertionError("Cayley digraph is not |S|-regular")
            for h in self.out[g]:
                if t[g][inv[h]] not in self.S:
                    raise AssertionError("arc without g h^-1 in S")
                if self.parts[g] == self.parts[h]:
                    raise AssertionError("arc inside a part")


def build_cayley_digraph(R: FiniteGroup, M: Subgroup, S: ConnectionSet) -> CayleyDigraph:
    return CayleyDigraph(R, M, S)


def cayley_masks(R: FiniteGroup, elements: Sequence[int]) -> tuple[list[int], list[int]]:
    """Out- and in-neighbour bitsets of ``Cay(R, S)`` without validation."""
    t, inv = R.table, R.inv
    n = R.order
    om = [0] * n
    im = [0] * n
    for s in elements:
        ls = t[inv[s]]
        rs = t[s]
        for g in range(n):
            om[g] |= 1 << ls[g]
            im[g] |= 1 << rs[g]
    return om, im


def _elements(S) -> list[int]:
    return S.elements() if isinstance(S, ConnectionSet) else sorted(set(S))


def generates_whole_group(R: FiniteGroup, S) -> bool:
    return len(closure(R, _elements(S))) == R.order


def is_inverse_closed(R: FiniteGroup, S) -> bool:
    elems = set(_elements(S))
    return all(R.inv[s] in elems for s in elems)
