import argparse

from ..core.completions import causal_completions
from ..core.errors import BAD_ARGUMENT, FREE_CHOICE
from ..core.logging_config import get_cli_logger
from ..core.pfun import InputFamily
from ..core.space import (
    HistorySpace,
    count_switch_spaces_family,
    free_choice,
    is_causally_complete,
    is_tight,
    parallel,
    sequential,
    switch_spaces,
)
from ..models import SpaceDocument
from ..services.export import space_dot, write_text
from .common import (
    add_space_source,
    documents,
    emit,
    load_space,
    load_space_path,
    output_flags,
    resolve_output,
    save_json,
)

log = get_cli_logger("spaces")


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _show(args: argparse.Namespace, space: HistorySpace) -> int:
    if getattr(args, "count", False):
        print(len(space))
        return 0
    document = SpaceDocument.from_space(space)
    if getattr(args, "out", None):
        save_json(args.out, document)
    emit(args, space.text() or ["∅"], document)
    return 0


def _show_many(args: argparse.Namespace, spaces: list[HistorySpace]) -> int:
    if args.count:
        print(len(spaces))
        return 0
    docs = [SpaceDocument.from_space(s) for s in spaces]
    if args.out:
        save_json(args.out, documents(docs))
    lines = [f"{i}: " + "; ".join(space.text()) for i, space in enumerate(spaces)]
    emit(args, lines, documents(docs))
    return 0


def run_induce(args: argparse.Namespace) -> int:
    space = load_space(args)
    log.info(f"🧩 induced space with {len(space)} histories ({len(space.ext)} extended)")
    return _show(args, space)


def run_check(args: argparse.Namespace) -> int:
    space = load_space(args)
    if not free_choice(space):
        missing = sum(1 for t in space.universe.totals if not space.ext_mask >> t & 1)
        raise FREE_CHOICE(
            f"{missing} total input assignments are not extended histories; "
            "causal completeness is undefined"
        )
    report = {
        "complete": is_causally_complete(space, args.method),
        "tight": is_tight(space, args.tightness),
        "free_choice": True,
        "histories": len(space),
        "extended": len(space.ext),
    }
    line = " ".join(
        f"{key}={_flag(value) if isinstance(value, bool) else value}" for key, value in report.items()
    )
    emit(args, [line], report)
    return 0


def run_completions(args: argparse.Namespace) -> int:
    completions = causal_completions(load_space(args))
    log.info(f"🧩 {len(completions)} causal completions")
    return _show_many(args, completions)


def run_switch(args: argparse.Namespace) -> int:
    if args.events < 0 or args.inputs < 1:
        raise BAD_ARGUMENT("--events must be >= 0 and --inputs >= 1")
    family = InputFamily.uniform("ABCDEFGH"[: args.events], args.inputs)
    if args.count and args.closed_form:
        print(count_switch_spaces_family(family))
        return 0
    return _show_many(args, switch_spaces(family))


def run_hasse(args: argparse.Namespace) -> int:
    space = load_space(args)
    source = space_dot(space, extended=not args.prime_only)
    if args.dot:
        write_text(resolve_output(args.dot), source)
    else:
        print(source)
    return 0


def run_compose(args: argparse.Namespace) -> int:
    left = load_space_path(args.left, args.inputs)
    right = load_space_path(args.right, args.inputs)
    composed = parallel(left, right) if args.mode == "parallel" else sequential(left, right)
    log.info(f"🧩 {args.mode} composition has {len(composed)} histories")
    return _show(args, composed)


def register(subparsers) -> None:
    common = output_flags()
    spaces = subparsers.add_parser("spaces", help="spaces of input histories")
    sub = spaces.add_subparsers(dest="action", required=True)

    p = sub.add_parser("induce", parents=[common], help="space induced by an order")
    p.add_argument("--order", required=True)
    p.add_argument("--inputs", type=int, default=2)
    p.add_argument("--count", action="store_true")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=run_induce)

    p = sub.add_parser("check", parents=[common], help="completeness, tightness, free choice")
    add_space_source(p)
    p.add_argument("--method", choices=["tips", "descent", "both"], default="both")
    p.add_argument("--tightness", choices=["all", "maximal"], default="all")
    p.set_defaults(func=run_check)

    p = sub.add_parser("completions", parents=[common], help="causal completions of a space")
    add_space_source(p)
    p.add_argument("--count", action="store_true")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=run_completions)

    p = sub.add_parser("switch", parents=[common], help="causal switch spaces")
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--inputs", type=int, default=2)
    p.add_argument("--count", action="store_true")
    p.add_argument("--closed-form", action="store_true", help="with --count, skip enumeration")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=run_switch)

    p = sub.add_parser("hasse", parents=[common], help="DOT diagram of a space")
    add_space_source(p)
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--prime-only", action="store_true", help="leave out extended-only histories")
    p.set_defaults(func=run_hasse)

    p = sub.add_parser("compose", parents=[common], help="parallel or sequential composition")
    p.add_argument("--mode", choices=["parallel", "sequential"], required=True)
    p.add_argument("--left", required=True, help="space JSON file or hist:ORDER")
    p.add_argument("--right", required=True, help="space JSON file or hist:ORDER")
    p.add_argument("--inputs", type=int, default=2)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=run_compose)
