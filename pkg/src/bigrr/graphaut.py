"""Automorphisms of small digraphs by individualization and refinement.

Partitions are ordered lists of cells; every step (refinement, target-cell
choice, splitting order) depends only on cell positions and neighbour counts,
never on vertex names, so an automorphism fixing a partition maps the search
tree below it onto itself.  That is what makes leaf-to-leaf comparison sound.

Adjacency is kept as Python-int bitsets: ``out_mask[v]`` has bit ``u`` set
when ``v -> u`` is an arc and ``in_mask[v]`` has bit ``u`` set when ``u -> v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from bigrr import _kernel
from bigrr.errors import SizeExceededError

MAX_VERTICES = 128


class Digraph:
    """A digraph on vertices ``0 .. n-1`` with sorted out-neighbour lists."""

    def __init__(self, n: int, out: Iterable[Iterable[int]]):
        self.n = n
        self.out = tuple(tuple(sorted(set(nb))) for nb in out)
        if len(self.out) != n:
            raise ValueError("need one out-list per vertex")
        om = [0] * n
        im = [0] * n
        for v, nb in enumerate(self.out):
            for u in nb:
                if not 0 <= u < n:
                    raise ValueError(f"arc {v}->{u} leaves the vertex set")
                om[v] |= 1 << u
                im[u] |= 1 << v
        self.out_mask = tuple(om)
        self.in_mask = tuple(im)

    @classmethod
    def from_masks(cls, out_mask: Sequence[int], in_mask: Sequence[int] | None = None) -> "Digraph":
        n = len(out_mask)
        return cls(n, (_bits(m) for m in out_mask))

    @property
    def inn(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_bits(m)) for m in self.in_mask)

    def has_arc(self, v: int, u: int) -> bool:
        return bool(self.out_mask[v] >> u & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(v, u) for v in range(self.n) for u in self.out[v]]

    def is_symmetric(self) -> bool:
        return self.out_mask == self.in_mask

    def to_adjacency_text(self) -> str:
        return "".join(f"{v}: {' '.join(map(str, nb))}\n".replace(": \n", ":\n") for v, nb in enumerate(self.out))


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


@dataclass(frozen=True)
class OrderedPartition:
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cells = tuple(tuple(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        seen: set[int] = set()
        for c in cells:
            if not c:
                raise ValueError("empty cell")
            if seen.intersection(c) or len(set(c)) != len(c):
                raise ValueError("cells overlap")
            seen.update(c)
        if seen != set(range(len(seen))):
            raise ValueError("cells do not cover 0 .. n-1")

    @classmethod
    def unit(cls, n: int) -> "OrderedPartition":
        return cls((tuple(range(n)),))

    @classmethod
    def discrete(cls, order: Sequence[int]) -> "OrderedPartition":
        return cls(tuple((v,) for v in order))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cells)

    @property
    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)


@dataclass
class AutReport:
    stabilizer_order: int
    group_order: int | None = None
    witness: tuple[int, ...] | None = None
    generators: list[tuple[int, ...]] = field(default_factory=list, repr=False)


# ------------------------------------------------------------------- engine


def _refine(om: Sequence[int], im: Sequence[int], cells: list[list[int]], splitters: Iterable[int]) -> list[list[int]]:
    """Coarsest equitable refinement reachable by splitting ``cells``.

    ``splitters`` are vertex bitsets to refine against.  Fragments of a split
    cell take its position, ordered by (out-count, in-count) into the splitter.
    As in Hopcroft's algorithm, when the split cell is not itself pending, its
    largest fragment (first on ties) need not be queued.
    """
    n = len(om)
    q = deque(splitters)
    pending = set(q)
    masks = [_mask(c) for c in cells]
    while q and len(cells) < n:
        W = q.popleft()
        pending.discard(W)
        touched = 0
        w = W
        while w:
            low = w & -w
            v = low.bit_length() - 1
            touched |= om[v] | im[v]
            w ^= low
        new: list[list[int]] = []
        new_masks: list[int] = []
        for cell, cm in zip(cells, masks):
            if len(cell) == 1 or not cm & touched:
                new.append(cell)
                new_masks.append(cm)
                continue
            groups: dict[int, list[int]] = {}
            for v in cell:
                k = ((om[v] & W).bit_count() << 16) | (im[v] & W).bit_count()
                g = groups.get(k)
                if g is None:
                    groups[k] = [v]
                else:
                    g.append(v)
            if len(groups) == 1:
                new.append(cell)
                new_masks.append(cm)
                continue
            frags = [groups[k] for k in sorted(groups)]
            fmasks = [_mask(f) for f in frags]
            new.extend(frags)
            new_masks.extend(fmasks)
            if cm in pending:
                pending.discard(cm)
                skip = -1
            else:
                sizes = [len(f) for f in frags]
                skip = sizes.index(max(sizes))
            for i, fm in enumerate(fmasks):
                if i != skip and fm not in pending:
                    pending.add(fm)
                    q.append(fm)
        cells, masks = new, new_masks
    return cells


def _mask(cell: Iterable[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _target(cells: list[list[int]]) -> int:
    """Index of the first smallest non-singleton cell."""
    best, size = -1, 0
    for i, c in enumerate(cells):
        k = len(c)
        if k > 1 and (best < 0 or k < size):
            best, size = i, k
            if k == 2:
                break
    return best


def _individualize(om, im, cells: list[list[int]], t: int, v: int) -> list[list[int]]:
    cell = cells[t]
    split = cells[:t] + [[v], [u for u in cell if u != v]] + cells[t + 1 :]
    return _refine(om, im, split, (1 << v,))


def _is_automorphism(om: Sequence[int], outs: Sequence[Sequence[int]], sigma: Sequence[int]) -> bool:
    # sigma is a bijection, so mapping every arc onto an arc suffices
    for v, nb in enumerate(outs):
        target = om[sigma[v]]
        for u in nb:
            if not target >> sigma[u] & 1:
                return False
    return True


class _Search:
    """Search tree rooted at an equitable partition."""

    def __init__(self, om, im, outs, root: list[list[int]], first: int | None = None):
        self.om, self.im, self.outs = om, im, outs
        self.n = len(om)
        # first path: (partition, target cell index, chosen vertex) per level
        self.levels: list[tuple[list[list[int]], int, int]] = []
        self.shapes: list[tuple[int, ...]] = []
        cells = root
        if first is not None and any(c == [first] for c in cells):
            first = None  # already a singleton: its orbit is trivial
        while len(cells) < self.n:
            if first is not None and not self.levels:
                t = next(i for i, c in enumerate(cells) if first in c)
                v = first
            else:
                t = _target(cells)
                v = cells[t][0]
            self.levels.append((cells, t, v))
            self.shapes.append(tuple(len(c) for c in cells))
            cells = _individualize(om, im, cells, t, v)
        self.shapes.append(tuple(len(c) for c in cells))
        self.leaf = [c[0] for c in cells]

    def _match(self, cells: list[list[int]], depth: int) -> list[int] | None:
        """A leaf below ``cells`` whose alignment with the first leaf is an automorphism."""
        if tuple(len(c) for c in cells) != self.shapes[depth]:
            return None
        if len(cells) == self.n:
            sigma = [0] * self.n
            for a, c in zip(self.leaf, cells):
                sigma[a] = c[0]
            return sigma if _is_automorphism(self.om, self.outs, sigma) else None
        t = _target(cells)
        for u in cells[t]:
            r = self._match(_individualize(self.om, self.im, cells, t, u), depth + 1)
            if r is not None:
                return r
        return None

    def mapping(self, level: int, w: int) -> list[int] | None:
        """An automorphism fixing the level's partition and sending its chosen vertex to ``w``."""
        cells, t, _ = self.levels[level]
        return self._match(_individualize(self.om, self.im, cells, t, w), level + 1)

    def group_order(self, stop_at_first: bool = False) -> tuple[int, list[list[int]]]:
        """Order of the automorphism group of the root partition, with generators.

        Levels are processed deepest first so that generators found below can
        prune orbit computations above.
        """
        gens: list[list[int]] = []
        order = 1
        for level in range(len(self.levels) - 1, -1, -1):
            cells, t, v = self.levels[level]
            orbit = _orbit(v, gens)
            for w in cells[t]:
                if w in orbit:
                    continue
                sigma = self.mapping(level, w)
                if sigma is not None:
                    gens.append(sigma)
                    if stop_at_first:
                        return 0, gens
                    orbit = _orbit(v, gens)
            order *= len(orbit)
        return order, gens


def _orbit(v: int, gens: list[list[int]]) -> set[int]:
    orb = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    nxt.append(y)
        frontier = nxt
    return orb


def _check_size(g: Digraph) -> None:
    if g.n > MAX_VERTICES:
        raise SizeExceededError(f"{g.n} vertices exceeds the cap of {MAX_VERTICES}")


def _cells(p: OrderedPartition) -> list[list[int]]:
    return [sorted(c) for c in p.cells]


# ---------------------------------------------------------------- public API


def color_refine(g: Digraph, p: OrderedPartition) -> OrderedPartition:
    if p.n != g.n:
        raise ValueError("partition and digraph sizes differ")
    cells = _cells(p)
    out = _refine(g.out_mask, g.in_mask, cells, [_mask(c) for c in cells])
    return OrderedPartition(tuple(tuple(c) for c in out))


def _vertex_root(g: Digraph, v: int) -> list[list[int]]:
    rest = [u for u in range(g.n) if u != v]
    cells = [[v], rest] if rest else [[v]]
    return _refine(g.out_mask, g.in_mask, cells, [_mask(c) for c in cells])


def stabilizer_order(g: Digraph, v: int) -> AutReport:
    """Exact order of the stabilizer of ``v`` in ``Aut(g)`` (no coloring imposed)."""
    _check_size(g)
    root = _vertex_root(g, v)
    search = _Search(g.out_mask, g.in_mask, g.out, root)
    order, gens = search.group_order()
    witness = tuple(gens[0]) if gens else None
    return AutReport(stabilizer_order=order, witness=witness, generators=[tuple(x) for x in gens])


def automorphism_report(g: Digraph, v: int = 0) -> AutReport:
    """``|Aut(g)|`` as the orbit of ``v`` times the order of its stabilizer."""
    _check_size(g)
    if g.n == 0:
        return AutReport(stabilizer_order=1, group_order=1)
    unit = [list(range(g.n))]
    root = _refine(g.out_mask, g.in_mask, unit, [_mask(unit[0])])
    search = _Search(g.out_mask, g.in_mask, g.out, root, first=v)
    order, gens = search.group_order()
    # level 0 is the orbit of v; deeper levels give the stabilizer of v
    stab = order // len(_orbit(v, gens))
    fixing = [x for x in gens if x[v] == v]
    witness = tuple(fixing[0]) if fixing and stab > 1 else None
    if stab > 1 and witness is None:
        witness = stabilizer_order(g, v).witness
    return AutReport(stabilizer_order=stab, group_order=order, witness=witness, generators=[tuple(x) for x in gens])


def automorphism_group_order(g: Digraph) -> int:
    return automorphism_report(g).group_order  # type: ignore[return-value]


def has_trivial_stabilizer(out_mask: Sequence[int], in_mask: Sequence[int], outs: Sequence[Sequence[int]], v: int = 0) -> bool:
    """Fast path: is the stabilizer of ``v`` trivial?  Stops at the first witness."""
    n = len(out_mask)
    rest = [u for u in range(n) if u != v]
    cells = [[v], rest] if rest else [[v]]
    root = _refine(out_mask, in_mask, cells, [1 << v, _mask(rest)])
    if len(root) == n:
        return True
    search = _Search(out_mask, in_mask, outs, root)
    order, _ = search.group_order(stop_at_first=True)
    return order == 1


def is_regular_representation(R, M, S, engine: str = "auto") -> bool:
    """Is ``Cay(R, S)`` a DRR (its automorphism group is exactly ``R``)?

    ``R`` acts regularly, so this is the trivial-stabilizer test at the
    identity vertex.  ``S`` is a :class:`~bigrr.cayley.ConnectionSet` (or an
    iterable of elements of ``R \\ M``).  ``engine`` is ``"python"``,
    ``"compiled"`` or ``"auto"`` (compiled when numba is available).
    """
    from bigrr.cayley import ConnectionSet, cayley_masks

    if R.order > MAX_VERTICES:
        raise SizeExceededError(f"|R| = {R.order} exceeds the cap of {MAX_VERTICES}")
    if not isinstance(S, ConnectionSet):
        S = ConnectionSet.from_elements(R, M, S)
    if engine not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "compiled" or (engine == "auto" and _kernel.HAVE_NUMBA):
        elems = np.asarray(S.elements(), dtype=np.int64)
        lists = _kernel._cayley_lists(_table64(R), _inv64(R), elems, len(elems))
        return bool(_kernel.trivial_vertex_stabilizer(R.order, *lists))
    om, im = cayley_masks(R, S.elements())
    outs = [_bits(m) for m in om]
    return has_trivial_stabilizer(om, im, outs, 0)


def has_trivial_stabilizer_compiled(g: Digraph) -> bool:
    """Compiled counterpart of :func:`has_trivial_stabilizer` at vertex 0."""
    _check_size(g)
    return bool(_kernel.trivial_vertex_stabilizer(g.n, *_kernel.csr_lists(g.out)))


def _table64(R) -> np.ndarray:
    return np.ascontiguousarray(R.array, dtype=np.int64)


def _inv64(R) -> np.ndarray:
    return np.asarray(R.inv, dtype=np.int64)
