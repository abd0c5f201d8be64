"""
DOT and JSON artifacts for orders, spaces and hierarchies
"""
import json
import logging
from pathlib import Path
from typing import Any

import networkx as nx
from graphviz import Digraph
from pydantic import BaseModel

from ..core.bitset import iter_bits
from ..core.preorder import Preorder, hasse_diagram, is_definite
from ..core.space import HistorySpace, tips as tip_report
from .classify import HierarchyGraph, class_table

logger = logging.getLogger(__name__)

# tip colours, cycled by event index
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
EXTENDED_ONLY = "#bbbbbb"


def order_dot(order: Preorder, name: str = "order") -> str:
    graph = hasse_diagram(order)
    dot = Digraph(name=name, comment="Hasse diagram", graph_attr={"rankdir": "BT"})
    for node, data in sorted(graph.nodes(data=True), key=lambda item: item[1]["index"]):
        dot.node(node, node, shape="box" if len(data["events"]) > 1 else "ellipse")
    for a, b in sorted(graph.edges):
        dot.edge(a, b)
    return dot.source


def _covers(universe, codes: list[int]) -> list[tuple[int, int]]:
    below = nx.DiGraph()
    below.add_nodes_from(codes)
    for a in codes:
        for b in codes:
            if a != b and universe.leq(a, b):
                below.add_edge(a, b)
    return sorted(nx.transitive_reduction(below).edges)


def space_dot(space: HistorySpace, name: str = "space", extended: bool = True) -> str:
    """Hasse diagram of the (extended) histories.

    Histories are filled with the colour of their tip event when they have
    exactly one; extended-only histories are grey.
    """
    universe = space.universe
    codes = list(space.ext if extended else space.codes)
    tips = tip_report(space).tips
    own = set(space.codes)
    dot = Digraph(name=name, comment="space of input histories", graph_attr={"rankdir": "BT"})
    for code in codes:
        attrs = {"style": "filled"}
        if code not in own:
            attrs["fillcolor"] = EXTENDED_ONLY
        elif tips[code].bit_count() == 1:
            event = next(iter_bits(tips[code]))
            attrs["fillcolor"] = PALETTE[event % len(PALETTE)]
            attrs["fontcolor"] = "white"
        else:
            attrs["fillcolor"] = "white"
        dot.node(str(code), universe.text(code), **attrs)
    for a, b in _covers(universe, codes):
        dot.edge(str(a), str(b))
    return dot.source


def hierarchy_dot(hierarchy: HierarchyGraph, name: str = "hierarchy") -> str:
    """Class-level condensation; finer classes point at the classes they refine.

    Order-induced classes get a thick black border, non-tight ones a thin purple one.
    """
    table = class_table(hierarchy)
    dot = Digraph(name=name, comment="causally complete spaces", graph_attr={"rankdir": "BT"})
    for index, row in table.iterrows():
        attrs: dict[str, str] = {}
        if row["order_induced"]:
            attrs.update(penwidth="3", color="black")
        elif not row["tight"]:
            attrs.update(penwidth="1", color="purple")
        dot.node(str(index), f"{index}, {row['size']}", **attrs)
    for u, v in sorted(hierarchy.class_edges):
        dot.edge(str(u), str(v))
    return dot.source


def order_hierarchy_dot(graph: nx.DiGraph, name: str = "orders") -> str:
    dot = Digraph(name=name, comment="hierarchy of causal orders", graph_attr={"rankdir": "BT"})
    for node, data in sorted(graph.nodes(data=True)):
        order: Preorder = data["order"]
        dot.node(str(node), str(order) or "-", style="solid" if is_definite(order) else "dashed")
    for a, b in sorted(graph.edges):
        dot.edge(str(a), str(b))
    return dot.source


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info(f"💾 wrote {path}")
    return path


def to_json(payload: BaseModel | Any) -> str:
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=2)
    return json.dumps(payload, indent=2, sort_keys=True)
