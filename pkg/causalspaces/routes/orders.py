import argparse

from ..core.errors import BAD_ARGUMENT
from ..core.logging_config import get_cli_logger
from ..core.preorder import (
    construct,
    enumerate_preorders,
    hasse_diagram,
    is_definite,
    lowersets,
    order_hierarchy,
)
from ..models import PreorderDocument
from ..services.export import order_dot, order_hierarchy_dot, write_text
from .common import (
    documents,
    emit,
    output_flags,
    parse_order,
    parse_relation,
    resolve_output,
    save_json,
)

log = get_cli_logger("orders")

LABELS = "ABCDEFGH"


def _labels(n: int) -> str:
    if not 0 <= n <= len(LABELS):
        raise BAD_ARGUMENT(f"-n must be between 0 and {len(LABELS)}, got {n}")
    return LABELS[:n]


def _listing(args: argparse.Namespace, orders) -> int:
    if args.count:
        print(len(orders))
        return 0
    lines = [
        f"{order.encoding}\t{'definite' if is_definite(order) else 'indefinite'}\t{order}"
        for order in orders
    ]
    emit(args, lines, documents([PreorderDocument.from_order(o) for o in orders]))
    return 0


def run_enumerate(args: argparse.Namespace) -> int:
    orders = enumerate_preorders(_labels(args.n))
    log.info(f"📐 {len(orders)} preorders on {args.n} events")
    return _listing(args, orders)


def run_suborders(args: argparse.Namespace) -> int:
    bound = parse_order(args.of)
    orders = enumerate_preorders(bound.events, restrict_below=bound)
    log.info(f"📐 {len(orders)} sub-orders of {bound}")
    return _listing(args, orders)


def run_hasse(args: argparse.Namespace) -> int:
    order = parse_order(args.input)
    if args.dot:
        write_text(resolve_output(args.dot), order_dot(order))
    graph = hasse_diagram(order)
    payload = {
        "nodes": sorted(graph.nodes, key=lambda node: graph.nodes[node]["index"]),
        "edges": sorted(graph.edges),
    }
    emit(args, [f"{a} -> {b}" for a, b in payload["edges"]] or list(payload["nodes"]), payload)
    return 0


def run_construct(args: argparse.Namespace) -> int:
    events = [label.strip() for label in args.events.split(",") if label.strip()]
    data = None
    if args.data:
        data = parse_relation(args.data) if args.kind == "from_relation" else args.data.split(",")
    order = construct(args.kind, events, data)
    document = PreorderDocument.from_order(order)
    if args.out:
        save_json(args.out, document)
    emit(args, [str(order) or " ".join(order.labels)], document)
    return 0


def run_hierarchy(args: argparse.Namespace) -> int:
    orders = enumerate_preorders(_labels(args.n))
    graph = order_hierarchy(orders)
    if args.dot:
        write_text(resolve_output(args.dot), order_hierarchy_dot(graph))
    payload = {"orders": graph.number_of_nodes(), "covers": graph.number_of_edges()}
    emit(args, [f"orders={payload['orders']} covers={payload['covers']}"], payload)
    return 0


def run_lowersets(args: argparse.Namespace) -> int:
    lattice = lowersets(parse_order(args.of))
    sets = sorted(lattice.label_sets(include_empty=args.include_empty), key=lambda s: (len(s), sorted(s)))
    if args.count:
        print(len(sets))
        return 0
    rendered = ["{" + ",".join(sorted(s)) + "}" for s in sets]
    emit(args, rendered, [sorted(s) for s in sets])
    return 0


def register(subparsers) -> None:
    common = output_flags()
    orders = subparsers.add_parser("orders", help="causal orders on labelled events")
    sub = orders.add_subparsers(dest="action", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="all preorders on n events")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=run_enumerate)

    p = sub.add_parser("suborders", parents=[common], help="preorders contained in an order")
    p.add_argument("--of", required=True, metavar="ORDER")
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=run_suborders)

    p = sub.add_parser("hasse", parents=[common], help="Hasse diagram of an order")
    p.add_argument("--in", dest="input", required=True, metavar="ORDER")
    p.add_argument("--dot", metavar="PATH")
    p.set_defaults(func=run_hasse)

    p = sub.add_parser("construct", parents=[common], help="build an order document")
    p.add_argument("--kind", required=True, choices=["discrete", "indiscrete", "total", "from_relation"])
    p.add_argument("--events", required=True, help="comma separated labels")
    p.add_argument("--data", help="total: A,B,C; from_relation: A<B,B<C")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=run_construct)

    p = sub.add_parser("hierarchy", parents=[common], help="inclusion hierarchy of all orders")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--dot", metavar="PATH")
    p.set_defaults(func=run_hierarchy)

    p = sub.add_parser("lowersets", parents=[common], help="lattice of lowersets")
    p.add_argument("--of", required=True, metavar="ORDER")
    p.add_argument("--count", action="store_true", help="count non-empty lowersets")
    p.add_argument("--include-empty", action="store_true")
    p.set_defaults(func=run_lowersets)
