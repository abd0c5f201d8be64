import argparse

from ..services.acceptance import AcceptanceRunner
from .common import output_flags


def run_check(args: argparse.Namespace) -> int:
    runner = AcceptanceRunner(quick=args.quick, seed=args.seed)
    ok = runner.run()
    if args.json:
        print("[" + ",".join(r.model_dump_json() for r in runner.results) + "]")
    return 0 if ok else 1


def register(subparsers) -> None:
    p = subparsers.add_parser("check", parents=[output_flags()], help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="skip the exhaustive 3-event checks")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled property checks")
    p.set_defaults(func=run_check)
