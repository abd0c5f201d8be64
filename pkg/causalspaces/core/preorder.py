"""
Finite causal orders.

A causal order is a preorder on a finite set of labelled events. Relations are
stored as one bitmask per event: bit ``j`` of ``rows[i]`` is set iff
``events[i] <= events[j]``. Every constructor returns a reflexive-transitive
closure, so the preorder invariants hold for every value in circulation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import networkx as nx

from .bitset import iter_bits, mask_of
from .errors import BAD_ARGUMENT, OVERLAPPING_EVENTS, SIZE_GUARD, UNKNOWN_EVENT
from .settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EventSet:
    """Ordered set of distinct event labels; index i is the i-th label."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        for label in labels:
            if not isinstance(label, str) or not label:
                raise BAD_ARGUMENT(f"event labels must be non-empty strings, got {label!r}")
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise BAD_ARGUMENT(f"duplicate event labels: {dupes}")

    @classmethod
    def of(cls, *labels: str) -> EventSet:
        return cls(tuple(labels))

    @classmethod
    def coerce(cls, events: EventSet | Iterable[str] | str) -> EventSet:
        """Accept an EventSet, an iterable of labels, or a string of one-letter labels."""
        if isinstance(events, EventSet):
            return events
        if isinstance(events, str):
            return cls(tuple(events))
        return cls(tuple(events))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UNKNOWN_EVENT(label) from None

    def mask(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(label) for label in labels)

    def subset(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in iter_bits(mask))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index


class CausalRelation(str, Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    UNRELATED = "unrelated"
    INDEFINITE = "indefinite"
    EQUAL = "equal"


class Cones(NamedTuple):
    past: frozenset[str]
    future: frozenset[str]
    equiv_class: frozenset[str]


def _close(rows: Sequence[int]) -> tuple[int, ...]:
    """Reflexive-transitive closure of a bitmask relation (Warshall)."""
    closed = [row | (1 << i) for i, row in enumerate(rows)]
    for k, _ in enumerate(closed):
        bit = 1 << k
        row_k = closed[k]
        for i, row_i in enumerate(closed):
            if row_i & bit:
                closed[i] = row_i | row_k
    return tuple(closed)


def class_label(labels: Sequence[str]) -> str:
    """Display name of a causal equivalence class: ``A`` or ``{B,C}``."""
    if len(labels) == 1:
        return labels[0]
    return "{" + ",".join(labels) + "}"


@dataclass(frozen=True)
class Preorder:
    events: EventSet
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.events):
            raise BAD_ARGUMENT(
                f"relation has {len(self.rows)} rows for {len(self.events)} events"
            )
        if _close(self.rows) != tuple(self.rows):
            raise BAD_ARGUMENT("relation is not reflexive and transitive")

    # --- constructors -------------------------------------------------------

    @classmethod
    def _closed(cls, events: EventSet, rows: Sequence[int]) -> Preorder:
        return cls(events, _close(rows))

    @classmethod
    def discrete(cls, events: EventSet | Iterable[str] | str) -> Preorder:
        events = EventSet.coerce(events)
        return cls(events, tuple(1 << i for i in range(len(events))))

    @classmethod
    def indiscrete(cls, events: EventSet | Iterable[str] | str) -> Preorder:
        events = EventSet.coerce(events)
        return cls(events, (events.full_mask,) * len(events))

    @classmethod
    def total(cls, *blocks: str | Iterable[str]) -> Preorder:
        """Total order on blocks; a block with several labels is an indefinite class.

        ``Preorder.total("A", {"B", "C"}, "D")`` is A -> {B,C} -> D.
        """
        groups = [
            (block,) if isinstance(block, str) else tuple(sorted(block)) for block in blocks
        ]
        return sequential_compose([cls.indiscrete(group) for group in groups])

    @classmethod
    def from_relation(
        cls, events: EventSet | Iterable[str] | str, pairs: Iterable[tuple[str, str]]
    ) -> Preorder:
        events = EventSet.coerce(events)
        rows = [0] * len(events)
        for a, b in pairs:
            rows[events.index(a)] |= 1 << events.index(b)
        return cls._closed(events, rows)

    @classmethod
    def fork(cls, root: str, *leaves: str) -> Preorder:
        return cls.from_relation([root, *leaves], [(root, leaf) for leaf in leaves])

    @classmethod
    def wedge(cls, *sources_and_sink: str) -> Preorder:
        *sources, sink = sources_and_sink
        return cls.from_relation([*sources, sink], [(s, sink) for s in sources])

    @classmethod
    def diamond(cls, bottom: str, left: str, right: str, top: str) -> Preorder:
        return cls.from_relation(
            [bottom, left, right, top],
            [(bottom, left), (bottom, right), (left, top), (right, top)],
        )

    # --- views --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.events)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.events.labels

    @property
    def reach(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(
            tuple(bool(row >> j & 1) for j in range(self.n)) for row in self.rows
        )

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """cols[j] has bit i iff events[i] <= events[j] (the causal past of j)."""
        cols = [0] * self.n
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    @cached_property
    def encoding(self) -> int:
        """Row-major bit encoding, first matrix entry most significant."""
        value = 0
        for row in self.rows:
            for j in range(self.n):
                value = (value << 1) | (row >> j & 1)
        return value

    def leq(self, a: str, b: str) -> bool:
        return bool(self.rows[self.events.index(a)] >> self.events.index(b) & 1)

    def past_mask(self, i: int) -> int:
        return self.cols[i]

    def class_mask(self, i: int) -> int:
        return self.rows[i] & self.cols[i]

    def rows_in(self, target: EventSet) -> list[int]:
        """This relation re-indexed into a larger event set (labels must be present)."""
        position = [target.index(label) for label in self.labels]
        rows = [1 << i for i in range(len(target))]
        for i, row in enumerate(self.rows):
            rows[position[i]] = mask_of(position[j] for j in iter_bits(row))
        return rows

    def __str__(self) -> str:
        graph = hasse_diagram(self)
        if graph.number_of_edges() == 0:
            return " ".join(sorted(graph.nodes, key=lambda c: graph.nodes[c]["index"]))
        return ", ".join(f"{a}->{b}" for a, b in sorted(graph.edges))


# --- relations and algebra -------------------------------------------------------


def construct(
    kind: str,
    events: EventSet | Iterable[str] | str,
    data: Iterable | None = None,
) -> Preorder:
    """Build a preorder of the given kind on ``events``."""
    events = EventSet.coerce(events)
    if kind == "discrete":
        return Preorder.discrete(events)
    if kind == "indiscrete":
        return Preorder.indiscrete(events)
    if kind == "total":
        sequence = list(events.labels if data is None else data)
        if sorted(sequence) != sorted(events.labels):
            raise BAD_ARGUMENT(
                f"total sequence {sequence} is not a permutation of {list(events.labels)}"
            )
        return _total_on(events, sequence)
    if kind == "from_relation":
        return Preorder.from_relation(events, data or ())
    raise BAD_ARGUMENT(f"unknown preorder kind {kind!r}")


def _total_on(events: EventSet, sequence: Sequence[str]) -> Preorder:
    rows = [0] * len(events)
    later = 0
    for label in reversed(sequence):
        i = events.index(label)
        later |= 1 << i
        rows[i] = later
    return Preorder(events, tuple(rows))


def classify_relation(order: Preorder, a: str, b: str) -> CausalRelation:
    i, j = order.events.index(a), order.events.index(b)
    if i == j:
        return CausalRelation.EQUAL
    forward = order.rows[i] >> j & 1
    backward = order.rows[j] >> i & 1
    if forward and backward:
        return CausalRelation.INDEFINITE
    if forward:
        return CausalRelation.PRECEDES
    if backward:
        return CausalRelation.SUCCEEDS
    return CausalRelation.UNRELATED


def is_definite(order: Preorder) -> bool:
    return all(order.class_mask(i) == 1 << i for i in range(order.n))


def cones(order: Preorder, event: str) -> Cones:
    i = order.events.index(event)
    past, future = order.cols[i], order.rows[i]
    subset = order.events.subset
    return Cones(frozenset(subset(past)), frozenset(subset(future)), frozenset(subset(past & future)))


def equivalence_classes(order: Preorder) -> list[tuple[str, ...]]:
    """Causal equivalence classes, ordered by their first event."""
    seen = 0
    classes = []
    for i in range(order.n):
        if seen >> i & 1:
            continue
        members = order.class_mask(i)
        seen |= members
        classes.append(order.events.subset(members))
    return classes


def _union_events(orders: Sequence[Preorder]) -> EventSet:
    labels: dict[str, None] = {}
    for order in orders:
        labels.update(dict.fromkeys(order.labels))
    return EventSet(tuple(labels))


def join(orders: Sequence[Preorder]) -> Preorder:
    """Transitive closure of the union of the relations; events matched by label."""
    if not orders:
        raise BAD_ARGUMENT("join needs at least one order")
    events = _union_events(orders)
    rows = [0] * len(events)
    for order in orders:
        for i, row in enumerate(order.rows_in(events)):
            rows[i] |= row
    return Preorder._closed(events, rows)


def meet(orders: Sequence[Preorder]) -> Preorder:
    """Intersection of relations on a common event set."""
    if not orders:
        raise BAD_ARGUMENT("meet needs at least one order")
    events = orders[0].events
    for order in orders[1:]:
        if set(order.labels) != set(events.labels):
            raise BAD_ARGUMENT(
                f"meet requires a common event set, got {list(events.labels)} "
                f"and {list(order.labels)}"
            )
    rows = list(orders[0].rows)
    for order in orders[1:]:
        for i, row in enumerate(order.rows_in(events)):
            rows[i] &= row
    return Preorder(events, tuple(rows))


def _check_disjoint(label_sets: Iterable[Iterable[str]]) -> None:
    seen: set[str] = set()
    overlap: set[str] = set()
    for labels in label_sets:
        labels = set(labels)
        overlap |= seen & labels
        seen |= labels
    if overlap:
        raise OVERLAPPING_EVENTS(overlap)


def sequential_compose(orders: Sequence[Preorder]) -> Preorder:
    """Every event of an earlier order precedes every event of a later one."""
    if not orders:
        raise BAD_ARGUMENT("sequential composition needs at least one order")
    _check_disjoint(order.labels for order in orders)
    events = EventSet(tuple(label for order in orders for label in order.labels))
    rows: list[int] = []
    offset = 0
    for order in orders:
        offset += order.n
        later = events.full_mask & ~((1 << offset) - 1)
        start = offset - order.n
        rows.extend((row << start) | later for row in order.rows)
    return Preorder(events, tuple(rows))


def replacement(order: Preorder, family: Mapping[str, Preorder]) -> Preorder:
    """Replace each event w by the order family[w].

    Events of distinct blocks are related iff their blocks are related and
    distinct; events of the same block keep the block's own relation.
    """
    for label in family:
        order.events.index(label)
    blocks = [family.get(label) or Preorder.discrete([label]) for label in order.labels]
    _check_disjoint(block.labels for block in blocks)

    events = EventSet(tuple(label for block in blocks for label in block.labels))
    offsets = []
    offset = 0
    for block in blocks:
        offsets.append(offset)
        offset += block.n
    block_masks = [((1 << b.n) - 1) << o for b, o in zip(blocks, offsets)]

    rows: list[int] = []
    for w, (block, start) in enumerate(zip(blocks, offsets)):
        above = 0
        for v in iter_bits(order.rows[w] & ~(1 << w)):
            above |= block_masks[v]
        rows.extend((row << start) | above for row in block.rows)
    return Preorder._closed(events, rows)


def lex_product(order: Preorder, inner: Preorder) -> Preorder:
    """Replace every event ``a`` of ``order`` by a copy of ``inner`` labelled ``a.b``."""
    family = {
        a: Preorder(EventSet(tuple(f"{a}.{b}" for b in inner.labels)), inner.rows)
        for a in order.labels
    }
    return replacement(order, family)


def cartesian_product(left: Preorder, right: Preorder) -> Preorder:
    """Componentwise order on pairs, labelled ``(a,b)`` in row-major order."""
    m = right.n
    events = EventSet(tuple(f"({a},{b})" for a in left.labels for b in right.labels))
    rows = []
    for i in range(left.n):
        for j in range(m):
            rows.append(
                mask_of(i2 * m + j2 for i2 in iter_bits(left.rows[i]) for j2 in iter_bits(right.rows[j]))
            )
    return Preorder(events, tuple(rows))


def includes(smaller: Preorder, larger: Preorder) -> bool:
    """Event containment and relation containment."""
    if not set(smaller.labels) <= set(larger.labels):
        return False
    mapped = smaller.rows_in(larger.events)
    return all(row & ~big == 0 for row, big in zip(mapped, larger.rows))


def enumerate_preorders(
    events: EventSet | Iterable[str] | str,
    restrict_below: Preorder | None = None,
    *,
    max_events: int | None = None,
) -> list[Preorder]:
    """All preorders on ``events`` (below ``restrict_below`` if given), by encoding.

    Depth-first over the off-diagonal pairs: each undecided pair is first left
    out (and forbidden), then added with closure; a closure that produces a
    forbidden pair is pruned.
    """
    events = EventSet.coerce(events)
    n = len(events)
    limit = settings.MAX_PREORDER_EVENTS if max_events is None else max_events
    if restrict_below is None and n > limit:
        raise SIZE_GUARD(
            f"unrestricted preorder enumeration on {n} events exceeds the guard of {limit}"
        )

    full = events.full_mask
    if restrict_below is None:
        allowed = [full] * n
    else:
        missing = set(events.labels) - set(restrict_below.labels)
        if missing:
            raise BAD_ARGUMENT(f"events {sorted(missing)} are not in the bounding order")
        allowed = [
            mask_of(j for j in range(n) if restrict_below.leq(events.labels[i], events.labels[j]))
            for i in range(n)
        ]

    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    found: list[tuple[int, ...]] = []

    def walk(pos: int, rows: tuple[int, ...], forbidden: tuple[int, ...]) -> None:
        while pos < len(pairs):
            i, j = pairs[pos]
            if not ((rows[i] | forbidden[i]) >> j & 1):
                break
            pos += 1
        if pos == len(pairs):
            found.append(rows)
            return
        i, j = pairs[pos]
        excluded = list(forbidden)
        excluded[i] |= 1 << j
        walk(pos + 1, rows, tuple(excluded))

        grown = list(rows)
        grown[i] |= 1 << j
        closed = _close(grown)
        if all(row & ban == 0 for row, ban in zip(closed, forbidden)):
            walk(pos + 1, closed, forbidden)

    initial_forbidden = tuple(full & ~allowed[i] for i in range(n))
    walk(0, tuple(1 << i for i in range(n)), initial_forbidden)

    orders = [Preorder(events, rows) for rows in found]
    orders.sort(key=lambda o: o.encoding)
    logger.debug(f"enumerated {len(orders)} preorders on {n} events")
    return orders


def hasse_diagram(order: Preorder) -> nx.DiGraph:
    """Covering graph on causal equivalence classes.

    Nodes are class labels (``A`` or ``{B,C}``) carrying ``events`` and
    ``index`` attributes; edges point from lower to higher class.
    """
    classes = equivalence_classes(order)
    names = [class_label(members) for members in classes]
    strict = nx.DiGraph()
    for index, (name, members) in enumerate(zip(names, classes)):
        strict.add_node(name, events=frozenset(members), index=index)
    heads = [order.events.index(members[0]) for members in classes]
    for a, i in enumerate(heads):
        for b, j in enumerate(heads):
            if a != b and order.rows[i] >> j & 1:
                strict.add_edge(names[a], names[b])
    reduced = nx.transitive_reduction(strict)
    reduced.add_nodes_from(strict.nodes(data=True))
    return reduced


def quotient(order: Preorder) -> nx.DiGraph:
    """Reflexive-transitive order on classes, recovered from the Hasse diagram."""
    return nx.transitive_closure(hasse_diagram(order), reflexive=True)


@dataclass(frozen=True)
class LowersetLattice:
    """Downward-closed event subsets of an order, as bitmasks in increasing order.

    The empty lowerset is stored (index 0) and flagged as hidden from display.
    """

    order: Preorder
    sets: tuple[int, ...]
    empty_hidden: bool = True

    @property
    def nonempty(self) -> tuple[int, ...]:
        return tuple(mask for mask in self.sets if mask)

    @property
    def count_nonempty(self) -> int:
        return len(self.nonempty)

    def label_sets(self, include_empty: bool = False) -> list[frozenset[str]]:
        masks = self.sets if include_empty else self.nonempty
        return [frozenset(self.order.events.subset(mask)) for mask in masks]

    def __contains__(self, item: object) -> bool:
        if isinstance(item, int):
            return item in self.sets
        return self.order.events.mask(item) in self.sets  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.sets)


def lowersets(order: Preorder) -> LowersetLattice:
    found = {0}
    frontier = [0]
    while frontier:
        current = frontier.pop()
        for i in range(order.n):
            if current >> i & 1:
                continue
            grown = current | order.cols[i]
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    return LowersetLattice(order, tuple(sorted(found)))


def is_intersection_closed(sets: Iterable[frozenset[str]]) -> bool:
    family = set(sets)
    return all(a & b in family for a in family for b in family if a & b)


def is_union_closed(sets: Iterable[frozenset[str]]) -> bool:
    family = set(sets)
    return all(a | b in family for a in family for b in family)


def lowerset_family_union(lattices: Iterable[LowersetLattice]) -> set[frozenset[str]]:
    """Non-empty lowersets admitted by at least one of the lattices, as label sets."""
    union: set[frozenset[str]] = set()
    for lattice in lattices:
        union.update(lattice.label_sets())
    return union


def missing_intersections(sets: Iterable[frozenset[str]]) -> set[frozenset[str]]:
    """Non-empty pairwise intersections that are not themselves members."""
    family = set(sets)
    return {a & b for a in family for b in family if a & b and a & b not in family}


def order_hierarchy(orders: Sequence[Preorder]) -> nx.DiGraph:
    """Covering graph of the inclusion hierarchy; node i is orders[i]."""
    graph = nx.DiGraph()
    for i, order in enumerate(orders):
        graph.add_node(i, order=order, definite=is_definite(order))
    for i, small in enumerate(orders):
        for j, large in enumerate(orders):
            if i != j and includes(small, large):
                graph.add_edge(i, j)
    reduced = nx.transitive_reduction(graph)
    reduced.add_nodes_from(graph.nodes(data=True))
    return reduced
