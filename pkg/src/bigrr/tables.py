"""Re-run the DRR and GRR experiments over the catalog and compare with the
expected tables.

Every pair goes through the same protocol: a randomized search first, then,
if nothing was found, exhaustive enumeration when the space is small enough.
Conclusions resting on randomized failure alone are marked as non-proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from bigrr import catalog as cat
from bigrr.obstruction import obstruction_status
from bigrr.search import (
    DEFAULT_TRIALS,
    DRR,
    FOUND,
    GRR,
    MAX_EXHAUSTIVE_UNITS,
    exhaustive_count,
    search_representation,
    units,
)

EXHAUSTIVE_MAX_ORDER = 32

HAS, NONE_PROVED, NONE_RANDOMIZED, OBSTRUCTED = "has", "none-exhaustive", "none-randomized-nonproof", "obstructed"


@dataclass
class PairOutcome:
    key: str
    name: str
    subgroup: int
    mode: str
    obstruction: str | None
    search_status: str
    found_at: int | None
    exhaustive: tuple[int, int] | None
    conclusion: str

    def to_json(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "name": self.name,
            "subgroup": self.subgroup,
            "mode": self.mode,
            "obstruction": self.obstruction,
            "search_status": self.search_status,
            "found_at": self.found_at,
            "exhaustive": None if self.exhaustive is None else {"scanned": self.exhaustive[0], "found": self.exhaustive[1]},
            "conclusion": self.conclusion,
        }


@dataclass
class Table1Check:
    pair: PairOutcome
    listed: bool

    @property
    def agrees(self) -> bool:
        none = self.pair.conclusion in (NONE_PROVED, NONE_RANDOMIZED)
        return self.listed == none

    def to_json(self) -> dict[str, Any]:
        return {**self.pair.to_json(), "listed": self.listed, "agrees": self.agrees}


@dataclass
class Table2Check:
    key: str
    name: str
    listed: bool
    pairs: list[PairOutcome]

    @property
    def exceptional_subgroups(self) -> list[int]:
        return [p.subgroup for p in self.pairs if p.conclusion in (NONE_PROVED, NONE_RANDOMIZED)]

    @property
    def agrees(self) -> bool:
        return self.listed == bool(self.exceptional_subgroups)

    @property
    def proof(self) -> bool:
        return all(p.conclusion != NONE_RANDOMIZED for p in self.pairs)

    def to_json(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "name": self.name,
            "listed": self.listed,
            "exceptional_subgroups": self.exceptional_subgroups,
            "agrees": self.agrees,
            "proof": self.proof,
            "pairs": [p.to_json() for p in self.pairs],
        }


@dataclass
class TableReport:
    max_order: int
    trials: int
    seed: int
    table1: list[Table1Check] = field(default_factory=list)
    table2: list[Table2Check] = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return all(c.agrees for c in self.table1) and all(c.agrees for c in self.table2)

    def disagreements(self) -> list[str]:
        out = [f"table1 {c.pair.key}/{c.pair.subgroup}" for c in self.table1 if not c.agrees]
        out += [f"table2 {c.key}" for c in self.table2 if not c.agrees]
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "max_order": self.max_order,
            "trials": self.trials,
            "seed": self.seed,
            "confirmed": self.confirmed,
            "disagreements": self.disagreements(),
            "table1": [c.to_json() for c in self.table1],
            "table2": [c.to_json() for c in self.table2],
        }

    def summary(self) -> str:
        lines = []
        for c in self.table1:
            if c.listed:
                p = c.pair
                tag = "proof" if p.conclusion == NONE_PROVED else "randomized evidence, not a proof"
                lines.append(f"table1 {p.key} {p.name} M#{p.subgroup}: {p.conclusion} ({tag}) {'ok' if c.agrees else 'MISMATCH'}")
        bad = [c for c in self.table1 if not c.listed and not c.agrees]
        n_unlisted = sum(1 for c in self.table1 if not c.listed)
        lines.append(f"table1 unlisted pairs with a DRR: {n_unlisted - len(bad)}/{n_unlisted}")
        for c in self.table2:
            if c.listed or not c.agrees:
                tag = "proof" if c.proof else "randomized evidence, not a proof"
                lines.append(
                    f"table2 {c.key} {c.name}: listed={c.listed} exceptional M={c.exceptional_subgroups} ({tag}) "
                    f"{'ok' if c.agrees else 'MISMATCH'}"
                )
        lines.append(f"confirmed: {self.confirmed}")
        return "\n".join(lines) + "\n"


def classify_pair(
    entry: cat.CatalogEntry,
    index: int,
    mode: str,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int | None = 1,
    exhaustive_max_order: int = EXHAUSTIVE_MAX_ORDER,
) -> PairOutcome:
    R = entry.group
    M = entry.subgroups()[index]
    w = obstruction_status(R, M)
    base = dict(key=entry.key, name=entry.name, subgroup=index, mode=mode, obstruction=w.condition)
    if mode == GRR and w.obstructed:
        return PairOutcome(search_status="Obstructed", found_at=None, exhaustive=None, conclusion=OBSTRUCTED, **base)
    rep = search_representation(R, M, mode, trials, seed, label=entry.key, subgroup_index=index, workers=workers)
    if rep.status == FOUND:
        return PairOutcome(search_status=rep.status, found_at=rep.found_at, exhaustive=None, conclusion=HAS, **base)
    feasible = R.order <= exhaustive_max_order and len(units(R, M, mode == GRR)) <= MAX_EXHAUSTIVE_UNITS
    if not feasible:
        return PairOutcome(search_status=rep.status, found_at=None, exhaustive=None, conclusion=NONE_RANDOMIZED, **base)
    ex = exhaustive_count(R, M, mode, label=entry.key, subgroup_index=index, workers=workers)
    counts = ex.counts
    assert counts is not None
    return PairOutcome(
        search_status=rep.status,
        found_at=None,
        exhaustive=counts,
        conclusion=HAS if counts[1] else NONE_PROVED,
        **base,
    )


def reproduce_tables(
    max_order: int,
    mode: str = "both",
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int | None = 1,
    min_order: int = 1,
) -> TableReport:
    """Classify every catalog pair with ``min_order <= |R| <= max_order``.

    ``mode`` is ``drr`` (first table), ``grr`` (second table) or ``both``.
    """
    if mode not in (DRR, GRR, "both"):
        raise ValueError(f"mode must be drr, grr or both, got {mode!r}")
    listed1 = cat.table1_pairs()
    report = TableReport(max_order=max_order, trials=trials, seed=seed)
    for entry in cat.catalog(max_order, min_order):
        n_sub = len(entry.subgroups())
        if n_sub == 0:
            continue
        if mode in (DRR, "both"):
            for i in range(n_sub):
                p = classify_pair(entry, i, DRR, trials, seed, workers)
                report.table1.append(Table1Check(p, (entry.key, i) in listed1))
        if mode in (GRR, "both"):
            pairs = [classify_pair(entry, i, GRR, trials, seed, workers) for i in range(n_sub)]
            report.table2.append(Table2Check(entry.key, entry.name, cat.in_table2(entry), pairs))
    return report
