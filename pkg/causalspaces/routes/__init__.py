import argparse

from . import check, classify, orders, spaces


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalspaces",
        description="Causal orders, spaces of input histories and their classification",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for route in (orders, spaces, classify, check):
        route.register(subparsers)
    return parser


__all__ = ["build_parser"]
