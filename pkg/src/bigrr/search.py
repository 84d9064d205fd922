"""Randomized and exhaustive search for bipartite DRRs and GRRs.

A connection set is chosen unit by unit: in DRR mode the units are the
elements of ``R \\ M``, in GRR mode the inverse-pair classes ``{s, s^-1}``
(involutions form singleton classes), so every GRR-mode set is inverse-closed.

Randomness is counter-based.  Trial ``t`` of a pair draws its bits from a
Philox stream keyed by the seed with counter ``(0, 0, t, pair_id)``, so any
trial can be replayed on its own and the result does not depend on how trials
are split between workers.
"""

from __future__ import annotations

import csv
import io
import json
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from bigrr import _kernel
from bigrr.cayley import ConnectionSet, is_inverse_closed
from bigrr.errors import SizeExceededError, SpaceTooLargeError, VerificationError
from bigrr.graphaut import MAX_VERTICES, _bits, has_trivial_stabilizer, is_regular_representation
from bigrr.groups import FiniteGroup, Subgroup
from bigrr.obstruction import ObstructionWitness, obstruction_status

DRR, GRR = "drr", "grr"
MAX_EXHAUSTIVE_UNITS = 24
DEFAULT_TRIALS = 10_000
EXHAUSTIVE_CHUNK = 4096

OBSTRUCTED, FOUND, EXHAUSTED_NONE, UNRESOLVED = "Obstructed", "Found", "ExhaustedNone", "Unresolved"
CSV_COLUMNS = ("group", "label", "subgroup", "mode", "status", "trials", "seed", "found_set")


@dataclass
class SearchReport:
    group: str
    label: str
    subgroup: int
    mode: str
    status: str
    trials: int
    seed: int
    found_set: list[int] | None = None
    found_at: int | None = None
    scanned: int | None = None
    found_count: int | None = None
    witness: ObstructionWitness | None = field(default=None)

    @property
    def counts(self) -> tuple[int, int] | None:
        if self.scanned is None or self.found_count is None:
            return None
        return (self.scanned, self.found_count)

    def to_json(self) -> dict[str, Any]:
        return {
            "group": self.group,
            "label": self.label,
            "subgroup": self.subgroup,
            "mode": self.mode,
            "status": self.status,
            "trials": self.trials,
            "seed": self.seed,
            "found_set": self.found_set,
            "found_at": self.found_at,
            "counts": None if self.counts is None else {"scanned": self.scanned, "found": self.found_count},
            "witness": None if self.witness is None else self.witness.to_json(),
        }

    def csv_row(self) -> list[str]:
        fs = "" if self.found_set is None else " ".join(map(str, self.found_set))
        return [self.group, self.label, str(self.subgroup), self.mode, self.status, str(self.trials), str(self.seed), fs]


def reports_to_json(reports: Sequence[SearchReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=1) + "\n"


def reports_to_csv(reports: Sequence[SearchReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


# ------------------------------------------------------------------ sampling


def _check_mode(mode: str) -> str:
    m = mode.lower()
    if m not in (DRR, GRR):
        raise ValueError(f"mode must be drr or grr, got {mode!r}")
    return m


def units(R: FiniteGroup, M: Subgroup, inverse_closed: bool) -> list[tuple[int, ...]]:
    """Selection units of ``R \\ M`` in ascending order of their least element."""
    out = []
    seen: set[int] = set()
    for g in M.complement():
        if g in seen:
            continue
        if inverse_closed and R.inv[g] != g:
            out.append((g, R.inv[g]))
            seen.update((g, R.inv[g]))
        else:
            out.append((g,))
            seen.add(g)
    return out


def pair_id(label: str, subgroup: int, mode: str) -> int:
    return zlib.crc32(f"{label}/{subgroup}/{mode}".encode())


def trial_generator(seed: int, pid: int, t: int) -> np.random.Generator:
    bg = np.random.Philox(key=seed % 2**64, counter=[0, 0, t, pid])
    return np.random.Generator(bg)


def _draw(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.integers(0, 2, size=k, dtype=np.int8).astype(np.bool_)


def random_connection_set(
    R: FiniteGroup, M: Subgroup, rng: np.random.Generator, inverse_closed: bool = False
) -> ConnectionSet:
    """Include each unit independently with probability 1/2."""
    us = units(R, M, inverse_closed)
    pick = _draw(rng, len(us))
    return ConnectionSet.from_elements(R, M, [g for u, p in zip(us, pick) if p for g in u])


def _selection_set(R: FiniteGroup, M: Subgroup, us: Sequence[tuple[int, ...]], row: np.ndarray) -> ConnectionSet:
    return ConnectionSet.from_elements(R, M, [g for u, p in zip(us, row) if p for g in u])


# ------------------------------------------------------------- evaluation


def _units_array(us: Sequence[tuple[int, ...]]) -> np.ndarray:
    arr = np.full((len(us), 2), -1, dtype=np.int64)
    for i, u in enumerate(us):
        arr[i, : len(u)] = u
    return arr


def _flags(T: np.ndarray, inv: np.ndarray, uarr: np.ndarray, select: np.ndarray) -> np.ndarray:
    """Regularity flag per selection row (compiled when numba is present)."""
    if _kernel.HAVE_NUMBA:
        return _kernel.cayley_regular_flags(T, inv, uarr, select)
    return _python_flags(T, inv, uarr, select)


def _python_flags(T: np.ndarray, inv: np.ndarray, uarr: np.ndarray, select: np.ndarray) -> np.ndarray:
    n = T.shape[0]
    out = np.zeros(select.shape[0], dtype=np.bool_)
    table = [list(map(int, row)) for row in T]
    invl = list(map(int, inv))
    for r, row in enumerate(select):
        elems = [int(e) for i in np.flatnonzero(row) for e in uarr[i] if e >= 0]
        om = [0] * n
        im = [0] * n
        for s in elems:
            ls, rs = table[invl[s]], table[s]
            for g in range(n):
                om[g] |= 1 << ls[g]
                im[g] |= 1 << rs[g]
        out[r] = has_trivial_stabilizer(om, im, [_bits(m) for m in om], 0)
    return out


def _mask_rows(lo: int, hi: int, k: int) -> np.ndarray:
    masks = np.arange(lo, hi, dtype=np.int64)
    return ((masks[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.bool_)


def _exhaustive_chunk(T, inv, uarr, lo: int, hi: int) -> tuple[int, int]:
    """Count of regular masks in ``[lo, hi)`` and the smallest one (or -1)."""
    f = _flags(T, inv, uarr, _mask_rows(lo, hi, uarr.shape[0]))
    hits = np.flatnonzero(f)
    return int(hits.size), (lo + int(hits[0])) if hits.size else -1


def _trial_rows(seed: int, pid: int, lo: int, hi: int, k: int) -> np.ndarray:
    rows = np.zeros((hi - lo, k), dtype=np.bool_)
    for t in range(lo, hi):
        rows[t - lo] = _draw(trial_generator(seed, pid, t), k)
    return rows


def _trial_chunk(T, inv, uarr, seed: int, pid: int, lo: int, hi: int) -> int:
    """Smallest successful trial index in ``[lo, hi)``, or -1."""
    f = _flags(T, inv, uarr, _trial_rows(seed, pid, lo, hi, uarr.shape[0]))
    hits = np.flatnonzero(f)
    return lo + int(hits[0]) if hits.size else -1


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("BIGRR_WORKERS", "1") or 1)
    if workers < 1:
        raise ValueError("workers must be at least 1")
    return workers


def _arrays(R: FiniteGroup, us: Sequence[tuple[int, ...]]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        np.ascontiguousarray(R.array, dtype=np.int64),
        np.asarray(R.inv, dtype=np.int64),
        _units_array(us),
    )


def _reverify(R: FiniteGroup, M: Subgroup, S: ConnectionSet, mode: str) -> None:
    # second route: the pure-Python refinement engine
    if not is_regular_representation(R, M, S, engine="python"):
        raise VerificationError(f"found set {S.elements()} fails re-verification")
    if mode == GRR and not is_inverse_closed(R, S):
        raise VerificationError("GRR-mode set is not inverse-closed")


def _check_size(R: FiniteGroup) -> None:
    if R.order > MAX_VERTICES:
        raise SizeExceededError(f"|R| = {R.order} exceeds the cap of {MAX_VERTICES}")


def search_representation(
    R: FiniteGroup,
    M: Subgroup,
    mode: str = DRR,
    max_trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    label: str | None = None,
    subgroup_index: int = -1,
    workers: int | None = 1,
) -> SearchReport:
    """Sample up to ``max_trials`` connection sets; report the first that works.

    GRR mode first applies the obstruction test and stops there if it fires.
    """
    mode = _check_mode(mode)
    _check_size(R)
    if max_trials < 1:
        raise ValueError("max_trials must be at least 1")
    label = label or (R.name or f"order{R.order}")
    base = dict(group=R.name or "", label=label, subgroup=subgroup_index, mode=mode, trials=max_trials, seed=seed)
    if mode == GRR:
        w = obstruction_status(R, M)
        if w.obstructed:
            return SearchReport(status=OBSTRUCTED, witness=w, **base)
    us = units(R, M, mode == GRR)
    T, inv, uarr = _arrays(R, us)
    pid = pair_id(label, subgroup_index, mode)
    hit = _first_success(T, inv, uarr, seed, pid, max_trials, resolve_workers(workers))
    if hit < 0:
        return SearchReport(status=UNRESOLVED, **base)
    S = _selection_set(R, M, us, _draw(trial_generator(seed, pid, hit), len(us)))
    _reverify(R, M, S, mode)
    return SearchReport(status=FOUND, found_set=S.elements(), found_at=hit, **base)


def _first_success(T, inv, uarr, seed: int, pid: int, max_trials: int, workers: int) -> int:
    # growing chunks keep the common "found within a few trials" case cheap
    bounds = []
    lo, size = 0, 16
    while lo < max_trials:
        hi = min(max_trials, lo + size)
        bounds.append((lo, hi))
        lo, size = hi, min(size * 2, 1024)
    if workers == 1:
        for lo, hi in bounds:
            r = _trial_chunk(T, inv, uarr, seed, pid, lo, hi)
            if r >= 0:
                return r
        return -1
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for i in range(0, len(bounds), workers):
            batch = bounds[i : i + workers]
            futs = [ex.submit(_trial_chunk, T, inv, uarr, seed, pid, lo, hi) for lo, hi in batch]
            hits = [r for r in (f.result() for f in futs) if r >= 0]
            if hits:
                return min(hits)
    return -1


def exhaustive_count(
    R: FiniteGroup,
    M: Subgroup,
    mode: str = DRR,
    label: str | None = None,
    subgroup_index: int = -1,
    workers: int | None = 1,
) -> SearchReport:
    """Test every subset of ``R \\ M`` (DRR) or every inverse-closed one (GRR),
    in ascending mask order over the units."""
    mode = _check_mode(mode)
    _check_size(R)
    us = units(R, M, mode == GRR)
    if len(us) > MAX_EXHAUSTIVE_UNITS:
        raise SpaceTooLargeError(f"2^{len(us)} subsets exceed the exhaustive cap 2^{MAX_EXHAUSTIVE_UNITS}")
    T, inv, uarr = _arrays(R, us)
    total = 1 << len(us)
    chunks = [(lo, min(total, lo + EXHAUSTIVE_CHUNK)) for lo in range(0, total, EXHAUSTIVE_CHUNK)]
    workers = resolve_workers(workers)
    if workers == 1:
        results = [_exhaustive_chunk(T, inv, uarr, lo, hi) for lo, hi in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_exhaustive_chunk, T, inv, uarr, lo, hi) for lo, hi in chunks]
            results = [f.result() for f in futs]
    found = sum(c for c, _ in results)
    firsts = [m for _, m in results if m >= 0]
    label = label or (R.name or f"order{R.order}")
    w = obstruction_status(R, M) if mode == GRR else None
    base = dict(
        group=R.name or "", label=label, subgroup=subgroup_index, mode=mode, trials=total, seed=0,
        scanned=total, found_count=found, witness=w,
    )
    if not firsts:
        return SearchReport(status=EXHAUSTED_NONE, **base)
    first = min(firsts)
    S = _selection_set(R, M, us, _mask_rows(first, first + 1, len(us))[0])
    _reverify(R, M, S, mode)
    return SearchReport(status=FOUND, found_set=S.elements(), found_at=first, **base)


# ------------------------------------------------------------ counting lemmas


@dataclass
class AutomorphismCount:
    image: tuple[int, ...]
    orbits: int
    invariant_subsets: int

    @property
    def identity_holds(self) -> bool:
        return self.invariant_subsets == 2**self.orbits


@dataclass
class CountingReport:
    order: int
    M_abelian: bool
    disconnected: int
    disconnected_bound_holds: bool
    automorphisms: list[AutomorphismCount]

    @property
    def max_orbits(self) -> int:
        return max((a.orbits for a in self.automorphisms), default=0)

    @property
    def orbit_bound_holds(self) -> bool:
        # l <= 3|R|/8, equivalently 2^l <= 2^(3|R|/8)
        return 8 * self.max_orbits <= 3 * self.order

    @property
    def identities_hold(self) -> bool:
        return all(a.identity_holds for a in self.automorphisms)

    @property
    def ok(self) -> bool:
        return self.disconnected_bound_holds and self.orbit_bound_holds and self.identities_hold

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "M_abelian": self.M_abelian,
            "disconnected": self.disconnected,
            "disconnected_bound_holds": self.disconnected_bound_holds,
            "automorphisms": len(self.automorphisms),
            "max_orbits": self.max_orbits,
            "orbit_bound_holds": self.orbit_bound_holds,
            "identities_hold": self.identities_hold,
        }


def disconnected_subset_count(R: FiniteGroup, M: Subgroup) -> int:
    """Number of ``S`` inside ``R \\ M`` with ``<S>`` a proper subgroup."""
    from bigrr.groups import closure

    outside = M.complement()
    k = len(outside)
    if k > MAX_EXHAUSTIVE_UNITS:
        raise SpaceTooLargeError(f"2^{k} subsets exceed the exhaustive cap")
    # <S> is proper iff S lies in a maximal subgroup; cache closures by mask
    full = R.order
    count = 0
    memo: dict[int, int] = {}
    for mask in range(1 << k):
        elems = [outside[i] for i in range(k) if mask >> i & 1]
        if mask == 0:
            count += 1
            continue
        low = mask & -mask
        prev = memo.get(mask ^ low)
        if prev is not None and prev == full:
            memo[mask] = full
            continue
        size = len(closure(R, elems))
        memo[mask] = size
        if size < full:
            count += 1
    return count


def solvable_disconnected_bound_holds(n: int, count: int) -> bool:
    """``count <= 2^(n/4 + log2 n) = n * 2^(n/4)``, compared exactly."""
    return count**4 <= n**4 * 2**n


def invariant_subset_count_exhaustive(image: Sequence[int], outside: Sequence[int]) -> int:
    """Count subsets ``S`` of ``outside`` with ``S^phi = S`` by enumeration."""
    k = len(outside)
    idx = {g: i for i, g in enumerate(outside)}
    perm = np.array([idx[image[g]] for g in outside], dtype=np.int64)
    masks = np.arange(1 << k, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k, dtype=np.int64)) & 1
    moved = (bits << perm).sum(axis=1)
    return int((moved == masks).sum())


def verify_counting_lemmas(R: FiniteGroup, M: Subgroup, max_order: int = 24, aut_cap: int = 64) -> CountingReport:
    """Exact small-case checks of the disconnected-subset bound and of the
    invariant-subset identity ``#{S : S^phi = S} = 2^l`` with ``l <= 3|R|/8``."""
    from bigrr.automorphisms import automorphism_group, complement_orbit_count

    if R.order > max_order:
        raise SizeExceededError(f"|R| = {R.order} exceeds the exhaustive cap {max_order}")
    outside = M.complement()
    disc = disconnected_subset_count(R, M)
    autos = []
    for phi in automorphism_group(R, cap=aut_cap):
        if phi.is_identity or not phi.preserves(M):
            continue
        ell = complement_orbit_count(phi, M)
        autos.append(AutomorphismCount(phi.image, ell, invariant_subset_count_exhaustive(phi.image, outside)))
    return CountingReport(
        order=R.order,
        M_abelian=M.is_abelian,
        disconnected=disc,
        disconnected_bound_holds=solvable_disconnected_bound_holds(R.order, disc),
        automorphisms=autos,
    )

