import argparse
import time

from ..core.errors import BAD_ARGUMENT
from ..core.logging_config import get_cli_logger
from ..core.pfun import InputFamily
from ..core.symmetry import symmetry_group
from ..services.classify import (
    build_hierarchy,
    class_table,
    enumerate_cc_bruteforce,
    enumerate_cc_dfs,
    expand_classes,
    landmark_classes,
    stats,
)
from ..services.export import hierarchy_dot, to_json, write_text
from ..services.search_store import CodeStore, write_sorted_codes
from .common import output_flags, resolve_output

log = get_cli_logger("classify")

STAT_FIELDS = [
    "tight_classes",
    "nontight_classes",
    "no_fixed_definite_classes",
    "order_induced_classes",
    "maxima_classes",
    "maxima_spaces",
]


def family_from_args(args: argparse.Namespace) -> InputFamily:
    labels = "ABCDEFGH"
    if args.sizes:
        try:
            sizes = [int(part) for part in args.sizes.split(",")]
        except ValueError:
            raise BAD_ARGUMENT(f"--sizes takes comma separated integers, got {args.sizes!r}") from None
        if len(sizes) > len(labels):
            raise BAD_ARGUMENT(f"at most {len(labels)} events are supported")
        return InputFamily(labels[: len(sizes)], tuple(tuple(range(k)) for k in sizes))
    if not 0 <= args.events <= len(labels):
        raise BAD_ARGUMENT(f"--events must be between 0 and {len(labels)}")
    return InputFamily.uniform(labels[: args.events], args.inputs)


def run_classify(args: argparse.Namespace) -> int:
    family = family_from_args(args)
    started = time.monotonic()

    if args.engine == "brute":
        if args.resume or args.limit is not None:
            raise BAD_ARGUMENT("--resume and --limit need the dfs engine")
        spaces = enumerate_cc_bruteforce(family)
        group = symmetry_group(family)
        codes = sorted({group.canonical_codes(s.codes) for s in spaces})
    else:
        store = CodeStore(resolve_output(args.resume)) if args.resume else None
        codes = list(
            enumerate_cc_dfs(
                family,
                store,
                jobs=args.jobs,
                limit=args.limit,
            )
        )
        spaces = expand_classes(family, codes)
    log.info(
        f"🏷️ {args.engine}: {len(spaces)} spaces in {len(codes)} classes "
        f"({time.monotonic() - started:.1f}s)"
    )

    if args.out:
        path = resolve_output(args.out)
        write_sorted_codes(path, codes)
        log.info(f"💾 wrote {len(codes)} canonical codes to {path}")

    result: dict = {"spaces": len(spaces), "classes": len(codes)}
    lines = [f"spaces={len(spaces)} classes={len(codes)}"]

    wants_hierarchy = args.stats or args.dot or args.report or args.table or args.landmarks
    if wants_hierarchy and spaces:
        hierarchy = build_hierarchy(spaces, quotient_covers=args.quotient_covers)
        if hierarchy.discrepancy:
            log.warning(
                f"⚠️ {len(hierarchy.discrepancy)} projected class edges are not class-level covers"
            )
        if args.stats or args.report:
            report = stats(hierarchy)
            if args.report:
                write_text(resolve_output(args.report), to_json(report))
            if args.stats:
                values = report.model_dump()
                lines.append(" ".join(f"{key}={values[key]}" for key in STAT_FIELDS))
                lines.append(
                    "orbit_sizes="
                    + ",".join(f"{size}:{count}" for size, count in report.orbit_sizes.items())
                )
                result["stats"] = report.model_dump(mode="json")
        if args.dot:
            write_text(resolve_output(args.dot), hierarchy_dot(hierarchy))
        if args.landmarks:
            found = landmark_classes(hierarchy)
            lines.append(" ".join(f"{name}={index}" for name, index in found.items()))
            result["landmarks"] = found
        if args.table:
            lines.append(class_table(hierarchy).to_string())

    if args.json:
        print(to_json(result))
    else:
        for line in lines:
            print(line)
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser(
        "classify",
        parents=[output_flags()],
        help="enumerate and classify causally complete spaces",
    )
    p.add_argument("--events", type=int, default=2)
    p.add_argument("--inputs", type=int, default=2)
    p.add_argument("--sizes", help="per-event input counts, e.g. 2,3,2 (overrides --events/--inputs)")
    p.add_argument("--engine", choices=["brute", "dfs"], default="dfs")
    p.add_argument("--stats", action="store_true", help="print class statistics")
    p.add_argument("--report", metavar="PATH", help="write the statistics as JSON")
    p.add_argument("--dot", metavar="PATH", help="write the class hierarchy as DOT")
    p.add_argument("--out", metavar="PATH", help="write sorted canonical codes")
    p.add_argument("--resume", metavar="PATH", help="append-only code stream with checkpoint")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--limit", type=int, default=None, help="stop after this many new classes")
    p.add_argument("--quotient-covers", action="store_true", help="class edges from the class-level order")
    p.add_argument("--landmarks", action="store_true", help="print the classes of named spaces")
    p.add_argument("--table", action="store_true", help="print one row per class")
    p.set_defaults(func=run_classify)
