"""The group catalog and the expected experiment tables.

Both live in the packaged data file ``tables.expected`` (JSON).  Catalog
entries pair an explicit constructor with names for its canonical generators
and a claimed SmallGroups id, which is a label and nothing more.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Any

from bigrr.construct import GroupSpec, build_group, eval_word
from bigrr.groups import FiniteGroup, Subgroup, closure, index2_subgroups


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    name: str
    smallgroup: tuple[int, int]
    spec: GroupSpec
    generator_names: tuple[str, ...]

    @property
    def order(self) -> int:
        return self.smallgroup[0]

    @property
    def group(self) -> FiniteGroup:
        return _build(self.key)

    def env(self) -> dict[str, int]:
        return dict(zip(self.generator_names, self.group.generators))

    def word(self, w: str) -> int:
        return eval_word(self.group, w, self.env())

    def subgroups(self) -> list[Subgroup]:
        return _index2(self.key)

    def pair_label(self, index: int) -> str:
        return f"{self.key}/{index}"


@dataclass(frozen=True)
class Table1Row:
    entry: CatalogEntry
    selector: dict[str, Any]
    note: str = ""

    def subgroup_indices(self) -> list[int]:
        """Indices into ``index2_subgroups`` of the pairs this row lists."""
        return select_subgroups(self.entry, self.selector)


@cache
def _document() -> dict[str, Any]:
    text = resources.files("bigrr.data").joinpath("tables.expected").read_text()
    return json.loads(text)


@cache
def _entries() -> dict[str, CatalogEntry]:
    out = {}
    for e in _document()["catalog"]:
        out[e["key"]] = CatalogEntry(
            key=e["key"],
            name=e["name"],
            smallgroup=(e["smallgroup"][0], e["smallgroup"][1]),
            spec=GroupSpec.from_json(e["spec"]),
            generator_names=tuple(e["generators"]),
        )
    return out


@cache
def _build(key: str) -> FiniteGroup:
    e = _entries()[key]
    G = build_group(e.spec, name=e.name)
    if G.order != e.order:
        raise ValueError(f"catalog entry {key} builds a group of order {G.order}")
    return G


@cache
def _index2(key: str) -> list[Subgroup]:
    return index2_subgroups(_build(key))


def catalog(max_order: int | None = None, min_order: int = 1) -> list[CatalogEntry]:
    """Catalog entries ordered by (order, SmallGroups number)."""
    out = sorted(_entries().values(), key=lambda e: e.smallgroup)
    return [e for e in out if e.order >= min_order and (max_order is None or e.order <= max_order)]


def get(key: str) -> CatalogEntry:
    try:
        return _entries()[key]
    except KeyError:
        raise KeyError(f"no catalog group {key!r}") from None


def catalog_pairs(max_order: int | None = None, min_order: int = 1) -> list[tuple[CatalogEntry, int]]:
    """Every (group, index-2 subgroup index) pair in the catalog."""
    return [(e, i) for e in catalog(max_order, min_order) for i in range(len(e.subgroups()))]


def select_subgroups(entry: CatalogEntry, selector: dict[str, Any]) -> list[int]:
    """Resolve an M selector: ``{"any": true}``, ``{"generated_by": words}``
    or ``{"containing": words}``."""
    subs = entry.subgroups()
    if selector.get("any"):
        return list(range(len(subs)))
    if "generated_by" in selector:
        target = closure(entry.group, [entry.word(w) for w in selector["generated_by"]])
        hits = [i for i, M in enumerate(subs) if list(M.members) == target]
        if len(hits) != 1:
            raise ValueError(f"{entry.key}: words {selector['generated_by']} do not generate an index-2 subgroup")
        return hits
    if "containing" in selector:
        inner = set(closure(entry.group, [entry.word(w) for w in selector["containing"]]))
        return [i for i, M in enumerate(subs) if inner <= M.memberset]
    raise ValueError(f"unknown subgroup selector {selector!r}")


def table1() -> list[Table1Row]:
    return [Table1Row(get(r["group"]), r["subgroups"], r.get("note", "")) for r in _document()["table1"]]


def table1_pairs() -> set[tuple[str, int]]:
    return {(row.entry.key, i) for row in table1() for i in row.subgroup_indices()}


def table2() -> dict[int, tuple[int, ...]]:
    """SmallGroups numbers per order for the groups listed as having no bipartite GRR."""
    return {int(k): tuple(v) for k, v in _document()["table2"].items()}


def in_table2(entry: CatalogEntry) -> bool:
    return entry.smallgroup[1] in table2().get(entry.order, ())
