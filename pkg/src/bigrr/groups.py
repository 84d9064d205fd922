"""Finite groups given by multiplication tables.

Elements are the integers ``0 .. n-1`` and ``0`` is always the identity.
Conjugation follows the right-action convention ``x^g = g^-1 x g`` and
commutators are ``[g, h] = g^-1 h^-1 g h``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from bigrr.errors import GroupValidationError, TableParseError

MAX_ORDER = 4096
FULL_ASSOC_LIMIT = 256
ASSOC_SAMPLES = 10_000


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as its Cayley table.

    ``generators`` is an optional canonical generating tuple recorded by the
    constructors; catalog entries attach names to it.
    """

    table: tuple[tuple[int, ...], ...]
    name: str | None = None
    generators: tuple[int, ...] = ()
    inv: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "inv", _validate_table(self.table))
        for g in self.generators:
            if not 0 <= g < len(self.table):
                raise GroupValidationError(f"generator {g} out of range")

    @classmethod
    def from_table(
        cls,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str | None = None,
        generators: Iterable[int] = (),
    ) -> "FiniteGroup":
        rows = tuple(tuple(int(x) for x in row) for row in table)
        return cls(rows, name=name, generators=tuple(generators))

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, order={self.order})"

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.table, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, *elements: int) -> int:
        acc = 0
        for g in elements:
            acc = self.table[acc][g]
        return acc

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        acc, base = 0, g
        while k:
            if k & 1:
                acc = self.table[acc][base]
            base = self.table[base][base]
            k >>= 1
        return acc

    def conj(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        t = self.table
        return t[t[self.inv[g]][x]][g]

    def commutator(self, g: int, h: int) -> int:
        t, inv = self.table, self.inv
        return t[t[t[inv[g]][inv[h]]][g]][h]

    def commute(self, g: int, h: int) -> bool:
        return self.table[g][h] == self.table[h][g]

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(element_order(self, g) for g in range(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        arr = self.array
        return bool((arr == arr.T).all())

    def elements(self) -> range:
        return range(self.order)


def _validate_table(table: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    n = len(table)
    if n == 0:
        raise GroupValidationError("empty table")
    if n > MAX_ORDER:
        raise GroupValidationError(f"order {n} exceeds cap {MAX_ORDER}")
    if any(len(row) != n for row in table):
        raise GroupValidationError("table is not square")
    arr = np.array(table, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= n:
        raise GroupValidationError("table entry out of range")
    ids = np.arange(n)
    if not (arr[0] == ids).all() or not (arr[:, 0] == ids).all():
        raise GroupValidationError("element 0 is not the identity")
    # Latin square check: each row and column is a permutation.
    srt = np.sort(arr, axis=1)
    if not (srt == ids).all() or not (np.sort(arr, axis=0).T == ids).all():
        raise GroupValidationError("table rows/columns are not bijective")
    _check_associative(arr)
    inv_arr = np.argmin(arr, axis=1)  # position of the 0 entry in each row
    inv = tuple(int(x) for x in inv_arr)
    if any(table[inv[i]][i] != 0 for i in range(n)):
        raise GroupValidationError("left and right inverses differ")
    return inv


def _check_associative(arr: np.ndarray) -> None:
    n = arr.shape[0]
    if n <= FULL_ASSOC_LIMIT:
        for a in range(n):
            # (a*b)*c versus a*(b*c) for all b, c
            left = arr[arr[a]]  # row b: (a*b)*c over c
            right = arr[a][arr]  # row b: a*(b*c) over c
            if not np.array_equal(left, right):
                raise GroupValidationError("table is not associative")
        return
    rng = random.Random(0)
    for _ in range(ASSOC_SAMPLES):
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if arr[arr[a, b], c] != arr[a, arr[b, c]]:
            raise GroupValidationError("table is not associative")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @cached_property
    def memberset(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> int:
        m = 0
        for g in self.members:
            m |= 1 << g
        return m

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: object) -> bool:
        return g in self.memberset

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, index={self.index}, members={list(self.members)})"

    def complement(self) -> list[int]:
        """Elements of the parent outside this subgroup, ascending."""
        return [g for g in range(self.parent.order) if g not in self.memberset]

    @cached_property
    def is_abelian(self) -> bool:
        t = self.parent.table
        ms = self.members
        return all(t[a][b] == t[b][a] for i, a in enumerate(ms) for b in ms[i + 1 :])

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.memberset <= other.memberset

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """Relabel as a standalone group; returns it with the local->parent id map."""
        ms = self.members  # ms[0] == 0 since members are sorted
        local = {g: i for i, g in enumerate(ms)}
        t = self.parent.table
        table = tuple(tuple(local[t[a][b]] for b in ms) for a in ms)
        return FiniteGroup(table, name=None), ms

    def lift(self, local_ids: Iterable[int]) -> list[int]:
        return [self.members[i] for i in local_ids]


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def element_order(G: FiniteGroup, g: int) -> int:
    if not 0 <= g < G.order:
        raise IndexError(f"element {g} out of range")
    k, x = 1, g
    row = G.table
    while x != 0:
        x = row[x][g]
        k += 1
    return k


def closure(G: FiniteGroup, gens: Iterable[int]) -> list[int]:
    """Sorted element list of the subgroup generated by ``gens``."""
    gens = list(dict.fromkeys(gens))
    t = G.table
    seen = {0}
    frontier = [0]
    # right multiplication by generators suffices: inverses are positive powers
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for s in gens:
                y = row[s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = list(gens)
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexError(f"element {g} out of range")
    return Subgroup(G, tuple(closure(G, gens)))


def center(G: FiniteGroup) -> Subgroup:
    arr = G.array
    central = np.nonzero((arr == arr.T).all(axis=1))[0]
    return Subgroup(G, tuple(int(g) for g in central))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = {G.commutator(g, h) for g in range(G.order) for h in range(G.order)}
    return Subgroup(G, tuple(closure(G, sorted(comms))))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    hs = H.memberset
    return all(G.conj(h, g) in hs for h in H.members for g in range(G.order))


def _elementary_two_quotient(G: FiniteGroup) -> tuple[list[int], int]:
    """Coordinates of every element in ``G / <gamma_2(G), squares>`` over GF(2).

    Returns ``(coords, rank)`` where ``coords[g]`` is a bit vector.
    """
    t = G.table
    gens = {G.commutator(g, h) for g in range(G.order) for h in range(G.order)}
    gens |= {t[g][g] for g in range(G.order)}
    kernel = closure(G, sorted(gens))
    coords = [-1] * G.order
    for g in kernel:
        coords[g] = 0
    reached = list(kernel)
    rank = 0
    for g in range(G.order):
        if coords[g] != -1:
            continue
        bit = 1 << rank
        rank += 1
        # the quotient is elementary abelian, so <H, g> = H u Hg
        new = []
        for h in reached:
            x = t[h][g]
            coords[x] = coords[h] | bit
            new.append(x)
        reached.extend(new)
    assert len(reached) == G.order
    return coords, rank


def index2_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups of index 2, sorted by member list.

    They are the kernels of the nonzero functionals on the elementary abelian
    quotient ``G / <gamma_2(G), squares>``.
    """
    if G.order % 2:
        return []
    coords, rank = _elementary_two_quotient(G)
    subs = []
    for f in range(1, 1 << rank):
        members = tuple(g for g in range(G.order) if (coords[g] & f).bit_count() % 2 == 0)
        subs.append(Subgroup(G, members))
    subs.sort(key=lambda s: s.members)
    return subs


def two_rank(G: FiniteGroup) -> int:
    """Rank of ``G / <gamma_2(G), squares>``."""
    return _elementary_two_quotient(G)[1]


def is_generalized_dihedral_on(R: FiniteGroup, M: Subgroup) -> bool:
    if M.index != 2:
        raise GroupValidationError("M must have index 2")
    if not M.is_abelian:
        return False
    return _inverting_involution(R, M) is not None


def _inverting_involution(R: FiniteGroup, M: Subgroup) -> int | None:
    t, inv = R.table, R.inv
    for x in M.complement():
        if t[x][x] != 0:
            continue
        if all(R.conj(m, x) == inv[m] for m in M.members):
            return x
    return None


# ---------------------------------------------------------------- file input


def parse_cayley_table(text: str, name: str | None = None) -> FiniteGroup:
    """Parse the plain-text table format (``order n`` / ``name`` / n rows)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TableParseError("empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order":
        raise TableParseError("first line must be 'order <n>'")
    try:
        n = int(head[1])
    except ValueError as exc:
        raise TableParseError(f"bad order: {head[1]!r}") from exc
    if n <= 0:
        raise TableParseError("order must be positive")
    body = lines[1:]
    if body and body[0].split()[0] == "name":
        name = body[0][len("name") :].strip() or name
        body = body[1:]
    if len(body) != n:
        raise TableParseError(f"expected {n} table rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        try:
            row = [int(x) for x in ln.split()]
        except ValueError as exc:
            raise TableParseError(f"row {i}: non-integer entry") from exc
        if len(row) != n:
            raise TableParseError(f"row {i}: expected {n} entries, found {len(row)}")
        rows.append(row)
    return FiniteGroup.from_table(rows, name=name)


def parse_cayley_json(text: str) -> FiniteGroup:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableParseError(str(exc)) from exc
    if not isinstance(obj, dict) or "table" not in obj:
        raise TableParseError("JSON table must be an object with a 'table' field")
    table = obj["table"]
    if "order" in obj and obj["order"] != len(table):
        raise TableParseError("'order' does not match the table size")
    if not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in table):
        raise TableParseError("'table' must be a list of integer lists")
    return FiniteGroup.from_table(table, name=obj.get("name"))


def load_group_file(path: str | Path) -> FiniteGroup:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_cayley_json(text)
    return parse_cayley_table(text, name=path.stem)


def format_cayley_table(G: FiniteGroup) -> str:
    out = [f"order {G.order}"]
    if G.name:
        out.append(f"name {G.name}")
    out.extend(" ".join(map(str, row)) for row in G.table)
    return "\n".join(out) + "\n"
