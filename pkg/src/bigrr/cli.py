"""Command-line interface: ``bigrr <subcommand> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 a computational cap was hit,
3 the table reproduction disagreed with the expected data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Sequence

from bigrr import catalog as cat
from bigrr.bounds import HORIZON, bound_crossover, drr_lower_bound
from bigrr.construct import GroupSpec, abelian, build_group, cyclic, dicyclic, dihedral, gendihedral
from bigrr.errors import BigrrError, CapExceededError
from bigrr.groups import (
    FiniteGroup,
    Subgroup,
    center,
    derived_subgroup,
    format_cayley_table,
    index2_subgroups,
    load_group_file,
)
from bigrr.obstruction import build_automorphism, obstruction_status, theorem11_equivalence
from bigrr.search import (
    DEFAULT_TRIALS,
    exhaustive_count,
    reports_to_csv,
    reports_to_json,
    search_representation,
    verify_counting_lemmas,
)
from bigrr.tables import reproduce_tables

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_DISAGREE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _seed(text: str) -> int:
    v = int(text, 0)
    if not -(2**63) <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _add_group_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("group (exactly one)")
    x = g.add_mutually_exclusive_group(required=True)
    x.add_argument("--cyclic", type=_positive, metavar="N")
    x.add_argument("--abelian", type=_positive, nargs="+", metavar="N", help="invariants of an abelian group")
    x.add_argument("--dihedral", type=_positive, metavar="N", help="dihedral group of order 2N")
    x.add_argument("--gendihedral", type=_positive, nargs="+", metavar="N", help="generalized dihedral over the abelian group with these invariants")
    x.add_argument("--dicyclic", type=_positive, metavar="N", help="dicyclic group of order 4N")
    x.add_argument("--spec", metavar="JSON", help="a group spec as JSON, e.g. '{\"direct\": [{\"dihedral\": 4}, {\"cyclic\": 2}]}'")
    x.add_argument("--catalog", metavar="KEY", help="catalog key such as 16#13")
    x.add_argument("--table-file", metavar="PATH", help="Cayley table file (text, or JSON when the suffix is .json)")


def _add_subgroup_flags(p: argparse.ArgumentParser) -> None:
    x = p.add_mutually_exclusive_group(required=True)
    x.add_argument("--subgroup", type=int, metavar="I", help="index into the index-2 subgroup list")
    x.add_argument("--all", action="store_true", help="every index-2 subgroup")


def _add_output_flags(p: argparse.ArgumentParser, formats: Sequence[str] = ("json", "csv")) -> None:
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_search_flags(p: argparse.ArgumentParser, trials: bool) -> None:
    p.add_argument("--mode", choices=("drr", "grr"), default="drr")
    if trials:
        p.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS)
        p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive, default=None, help="worker processes (default: $BIGRR_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bigrr", description="Bipartite DRR/GRR experiments on small groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("group", help="build, validate and describe a group")
    _add_group_flags(p)
    p.add_argument("--print-table", action="store_true", help="print the Cayley table in file format")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("subgroups", help="list index-2 subgroups")
    _add_group_flags(p)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("obstruct", help="obstruction conditions, witnesses and automorphisms")
    _add_group_flags(p)
    _add_subgroup_flags(p)
    p.add_argument("--oracle", action="store_true", help="also compare with brute-force automorphism search")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("search", help="randomized search for a bipartite DRR/GRR")
    _add_group_flags(p)
    _add_subgroup_flags(p)
    _add_search_flags(p, trials=True)
    _add_output_flags(p)

    p = sub.add_parser("count", help="exhaustive count of bipartite DRRs/GRRs")
    _add_group_flags(p)
    _add_subgroup_flags(p)
    _add_search_flags(p, trials=False)
    _add_output_flags(p)

    p = sub.add_parser("tables", help="reproduce the expected DRR and GRR tables from the catalog")
    p.add_argument("--max-order", type=_positive, default=18)
    p.add_argument("--min-order", type=_positive, default=1)
    p.add_argument("--mode", choices=("drr", "grr", "both"), default="both")
    p.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive, default=None)
    _add_output_flags(p, ("json", "csv", "text"))

    p = sub.add_parser("bounds", help="evaluate the DRR-count lower bound")
    x = p.add_mutually_exclusive_group(required=True)
    x.add_argument("--n", type=int, nargs="+", metavar="N", help="even group orders")
    x.add_argument("--crossover", action="store_true", help="smallest order from which the bound stays positive")
    p.add_argument("--horizon", type=_positive, default=HORIZON)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("verify", help="exact checks of the counting lemmas")
    _add_group_flags(p)
    _add_subgroup_flags(p)
    p.add_argument("--out", metavar="PATH")
    return parser


# ------------------------------------------------------------------ helpers


def _group_and_label(args: argparse.Namespace) -> tuple[FiniteGroup, str]:
    if args.catalog is not None:
        e = cat.get(args.catalog)
        return e.group, e.key
    if args.table_file is not None:
        G = load_group_file(args.table_file)
        return G, G.name or Path(args.table_file).name
    spec: GroupSpec
    if args.cyclic is not None:
        spec = cyclic(args.cyclic)
    elif args.abelian is not None:
        spec = abelian(*args.abelian)
    elif args.dihedral is not None:
        spec = dihedral(args.dihedral)
    elif args.gendihedral is not None:
        spec = gendihedral(abelian(*args.gendihedral))
    elif args.dicyclic is not None:
        spec = dicyclic(args.dicyclic)
    else:
        try:
            obj = json.loads(args.spec)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--spec is not valid JSON: {exc}") from exc
        spec = GroupSpec.from_json(obj)
    G = build_group(spec)
    return G, json.dumps(spec.to_json(), separators=(",", ":"))


def _subgroups(R: FiniteGroup, args: argparse.Namespace) -> list[tuple[int, Subgroup]]:
    subs = index2_subgroups(R)
    if args.all:
        return list(enumerate(subs))
    if not 0 <= args.subgroup < len(subs):
        raise UsageError(f"--subgroup {args.subgroup} out of range: the group has {len(subs)} index-2 subgroups")
    return [(args.subgroup, subs[args.subgroup])]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=1) + "\n"


# ---------------------------------------------------------------- commands


def _cmd_group(args) -> int:
    G, label = _group_and_label(args)
    if args.print_table:
        _emit(format_cayley_table(G), args.out)
        return EXIT_OK
    info = {
        "label": label,
        "name": G.name,
        "order": G.order,
        "generators": list(G.generators),
        "abelian": G.is_abelian,
        "element_orders": {str(k): v for k, v in sorted(Counter(G.orders).items())},
        "center_order": center(G).order,
        "derived_order": derived_subgroup(G).order,
        "index2_subgroups": len(index2_subgroups(G)),
    }
    _emit(_dump(info), args.out)
    return EXIT_OK


def _cmd_subgroups(args) -> int:
    G, label = _group_and_label(args)
    rows = [
        {"index": i, "members": list(M.members), "abelian": M.is_abelian, "obstruction": obstruction_status(G, M).condition}
        for i, M in enumerate(index2_subgroups(G))
    ]
    _emit(_dump({"label": label, "order": G.order, "subgroups": rows}), args.out)
    return EXIT_OK


def _cmd_obstruct(args) -> int:
    R, label = _group_and_label(args)
    rows = []
    for i, M in _subgroups(R, args):
        w = obstruction_status(R, M)
        row: dict[str, Any] = {"subgroup": i, **w.to_json()}
        row["automorphism"] = list(build_automorphism(R, M, w).image) if w.obstructed else None
        if args.oracle:
            row["oracle_agrees"] = theorem11_equivalence(R, M)
        rows.append(row)
    _emit(_dump({"label": label, "order": R.order, "pairs": rows}), args.out)
    return EXIT_OK


def _reports_out(reports, args) -> None:
    _emit(reports_to_json(reports) if args.format == "json" else reports_to_csv(reports), args.out)


def _cmd_search(args) -> int:
    R, label = _group_and_label(args)
    reports = [
        search_representation(R, M, args.mode, args.trials, args.seed, label=label, subgroup_index=i, workers=args.workers)
        for i, M in _subgroups(R, args)
    ]
    _reports_out(reports, args)
    return EXIT_OK


def _cmd_count(args) -> int:
    R, label = _group_and_label(args)
    reports = [
        exhaustive_count(R, M, args.mode, label=label, subgroup_index=i, workers=args.workers)
        for i, M in _subgroups(R, args)
    ]
    _reports_out(reports, args)
    return EXIT_OK


def _cmd_tables(args) -> int:
    rep = reproduce_tables(args.max_order, args.mode, args.trials, args.seed, args.workers, min_order=args.min_order)
    if args.format == "json":
        text = _dump(rep.to_json())
    elif args.format == "text":
        text = rep.summary()
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "key", "name", "subgroup", "mode", "conclusion", "listed", "agrees"])
        for c in rep.table1:
            p = c.pair
            w.writerow([1, p.key, p.name, p.subgroup, p.mode, p.conclusion, c.listed, c.agrees])
        for g in rep.table2:
            for p in g.pairs:
                w.writerow([2, p.key, p.name, p.subgroup, p.mode, p.conclusion, g.listed, g.agrees])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK if rep.confirmed else EXIT_DISAGREE


def _cmd_bounds(args) -> int:
    if args.crossover:
        _emit(f"{bound_crossover(args.horizon)}\n", args.out)
        return EXIT_OK
    for n in args.n:
        if n < 2 or n % 2:
            raise UsageError(f"--n values must be even and at least 2, got {n}")
    _emit(_dump([drr_lower_bound(n).to_json() for n in args.n]), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    R, label = _group_and_label(args)
    rows = []
    for i, M in _subgroups(R, args):
        rep = verify_counting_lemmas(R, M)
        rows.append({"subgroup": i, **rep.to_json(), "ok": rep.ok})
    _emit(_dump({"label": label, "order": R.order, "pairs": rows}), args.out)
    return EXIT_OK


COMMANDS = {
    "group": _cmd_group,
    "subgroups": _cmd_subgroups,
    "obstruct": _cmd_obstruct,
    "search": _cmd_search,
    "count": _cmd_count,
    "tables": _cmd_tables,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bigrr: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"bigrr: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (BigrrError, KeyError, OSError) as exc:
        print(f"bigrr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
