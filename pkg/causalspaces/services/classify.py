"""
Exhaustive enumeration and classification of causally complete spaces
"""
from __future__ import annotations

import logging
import multiprocessing
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cache
from itertools import chain, islice
from typing import Iterator, Sequence

import networkx as nx
import pandas as pd

from ..core.bitset import iter_bits
from ..core.errors import BAD_ARGUMENT, CORRUPT_CHECKPOINT, SIZE_GUARD
from ..core.logging_config import get_search_logger, log_search_progress
from ..core.pfun import InputFamily, PartialFunction
from ..core.preorder import EventSet, Preorder, join as join_orders
from ..core.search import ClosureSearch, Path
from ..core.settings import settings
from ..core.space import (
    HistorySpace,
    cond_sequential,
    embed,
    fixed_definite_orders,
    induce,
    inducing_orders,
    is_tight,
)
from ..core.symmetry import CanonicalCode, SymmetryGroup, canonicalize, orbit, symmetry_group
from ..models.checkpoint import SearchCheckpoint
from ..models.report import StatsReport
from .search_store import CodeStore

logger = logging.getLogger(__name__)

__all__ = [
    "HierarchyGraph",
    "build_hierarchy",
    "canonicalize",
    "class_table",
    "enumerate_cc_bruteforce",
    "enumerate_cc_dfs",
    "expand_classes",
    "landmark_classes",
    "orbit",
    "stats",
]


# --- brute force ------------------------------------------------------------------


def enumerate_cc_bruteforce(
    family: InputFamily, *, max_optional: int | None = None
) -> list[HistorySpace]:
    """Every causally complete space, by testing all sets of optional histories.

    A candidate W holds all total assignments plus a subset of the non-empty,
    non-total partial functions; it is kept when every member on two or more
    events has a one-event restriction in W and W is join-closed.
    """
    universe = family.universe
    optional = [c for c in universe.nonempty() if universe.dom[c] != universe.full]
    limit = settings.MAX_BRUTEFORCE_OPTIONAL if max_optional is None else max_optional
    if len(optional) > limit:
        raise SIZE_GUARD(
            f"brute force over 2^{len(optional)} subsets exceeds the guard of 2^{limit}"
        )
    search_log = get_search_logger("brute")
    search_log.info(f"🧮 brute force over 2^{len(optional)} candidate sets")

    totals = sum(1 << t for t in universe.totals)
    chunks = []
    for start in range(0, len(optional), 8):
        block = optional[start : start + 8]
        table = [sum(1 << block[b] for b in iter_bits(v)) for v in range(1 << len(block))]
        chunks.append((start, (1 << len(block)) - 1, table))

    descent = []
    for k in universe.nonempty():
        if universe.card[k] < 2:
            continue
        dom = universe.dom[k]
        kids = sum(1 << universe.restrict[k][dom & ~(1 << i)] for i in iter_bits(dom))
        descent.append((1 << k, kids))

    codes = list(universe.nonempty())
    closure_pairs = []
    for a_index, a in enumerate(codes):
        for b in codes[a_index + 1 :]:
            if universe.leq(a, b) or universe.leq(b, a):
                continue
            z = universe.join(a, b)
            if z >= 0:
                closure_pairs.append(((1 << a) | (1 << b), 1 << z))

    found: list[HistorySpace] = []
    started = time.monotonic()
    for subset in range(1 << len(optional)):
        members = totals
        for start, width, table in chunks:
            members |= table[(subset >> start) & width]
        if any(members & k and not members & kids for k, kids in descent):
            continue
        if any(members & pair == pair and not members & z for pair, z in closure_pairs):
            continue
        found.append(HistorySpace(family, tuple(universe.prime(list(iter_bits(members))))))

    found.sort(key=lambda s: s.codes)
    log_search_progress(search_log, len(found), 1 << len(optional), time.monotonic() - started)
    return found


# --- depth-first search with symmetry reduction -------------------------------------


def _canonical_of(search: ClosureSearch, group: SymmetryGroup, members: int) -> CanonicalCode:
    return group.canonical_codes(search.universe.prime(list(iter_bits(members))))


@cache
def _worker_engine(labels: tuple[str, ...], inputs: tuple[tuple[int, ...], ...]):
    family = InputFamily(EventSet(labels), inputs)
    group = symmetry_group(family)
    return ClosureSearch(family, group=group), group


def _walk_branch(
    job: tuple[tuple[str, ...], tuple[tuple[int, ...], ...], Path],
) -> tuple[list[tuple[CanonicalCode, Path]], int]:
    """First occurrence of every canonical code in one branch, in walk order."""
    labels, inputs, prefix = job
    search, group = _worker_engine(labels, inputs)
    seen: set[CanonicalCode] = set()
    firsts: list[tuple[CanonicalCode, Path]] = []
    visited = 0
    for path, members in search.walk(prefix):
        visited += 1
        code = _canonical_of(search, group, members)
        if code not in seen:
            seen.add(code)
            firsts.append((code, path))
    return firsts, visited


def enumerate_cc_dfs(
    family: InputFamily,
    resume: CodeStore | None = None,
    *,
    jobs: int | None = None,
    limit: int | None = None,
    checkpoint_seconds: float | None = None,
    checkpoint_every: int | None = None,
) -> Iterator[CanonicalCode]:
    """Canonical codes of causally complete spaces, one per symmetry class.

    The stream order is the order of first discovery in a serial depth-first
    walk and does not depend on ``jobs``. With a store, codes already recorded
    are replayed first, new ones are appended, and the walk restarts from the
    store's checkpoint. ``limit`` stops after that many new codes.
    """
    jobs = settings.DEFAULT_JOBS if jobs is None else jobs
    interval = settings.CHECKPOINT_SECONDS if checkpoint_seconds is None else checkpoint_seconds
    every = settings.CHECKPOINT_EVERY if checkpoint_every is None else checkpoint_every
    if jobs < 1:
        raise BAD_ARGUMENT(f"jobs must be at least 1, got {jobs}")

    search_log = get_search_logger("dfs")
    group = symmetry_group(family)
    search = ClosureSearch(family, group=group)
    labels = list(family.events.labels)
    sizes = list(family.sizes)

    seen: set[CanonicalCode] = set()
    stream: list[CanonicalCode] = []
    checkpoint = SearchCheckpoint(events=labels, input_sizes=sizes)
    if resume is not None:
        previous = resume.load_checkpoint()
        if previous is None:
            resume.reset()
        else:
            if not previous.matches(labels, sizes):
                raise CORRUPT_CHECKPOINT(
                    f"checkpoint is for events {previous.events} with inputs "
                    f"{previous.input_sizes}, not {labels} with {sizes}"
                )
            stream = resume.truncate(previous.emitted)
            if stream:
                last = stream[-1]
                if previous.last_code is not None and list(last) != previous.last_code:
                    raise CORRUPT_CHECKPOINT("last record does not match the checkpoint")
                if group.canonical_codes(last) != last:
                    raise CORRUPT_CHECKPOINT("last record is not a canonical code")
            seen = set(stream)
            if len(seen) != len(stream):
                raise CORRUPT_CHECKPOINT("stream contains duplicate records")
            checkpoint = previous
            search_log.info(
                f"♻️ resuming at branch {previous.branch_index} with {len(stream)} records"
            )
        resume.open_append()

    yield from stream

    new_codes = 0
    visited = checkpoint.visited
    started = time.monotonic()
    last_save = started

    def save(branch_index: int, prefix: Path, leaf: Path | None, finished: bool = False) -> None:
        nonlocal last_save
        checkpoint.branch_index = branch_index
        checkpoint.branch_prefix = list(prefix)
        checkpoint.leaf_path = None if leaf is None else list(leaf)
        checkpoint.emitted = len(seen)
        checkpoint.visited = visited
        checkpoint.finished = finished
        checkpoint.last_code = list(stream[-1]) if stream else None
        if resume is not None:
            resume.save_checkpoint(checkpoint)
        last_save = time.monotonic()

    def emit(code: CanonicalCode) -> bool:
        nonlocal new_codes
        if code in seen:
            return False
        seen.add(code)
        stream.append(code)
        if resume is not None:
            resume.append(code)
        new_codes += 1
        return True

    def due() -> bool:
        if every and visited % every == 0:
            return True
        return time.monotonic() - last_save >= interval

    try:
        if checkpoint.finished:
            return
        start_index = checkpoint.branch_index
        pending_leaf = tuple(checkpoint.leaf_path) if checkpoint.leaf_path else None
        branches = enumerate(search.branches())
        handoff: tuple[int, Path] | None = None

        # serial walk; with jobs > 1 only an interrupted branch is finished here
        for index, prefix in branches:
            if index < start_index:
                continue
            if (
                index == start_index
                and checkpoint.branch_prefix
                and list(prefix) != checkpoint.branch_prefix
            ):
                raise CORRUPT_CHECKPOINT(f"branch {index} does not match the checkpoint prefix")
            leaf = pending_leaf if index == start_index else None
            if jobs > 1 and leaf is None:
                handoff = (index, prefix)
                break
            for path, members in search.walk(prefix, leaf):
                visited += 1
                code = _canonical_of(search, group, members)
                if emit(code):
                    yield code
                    if limit is not None and new_codes >= limit:
                        save(index, prefix, path)
                        return
                if due():
                    save(index, prefix, path)
                    log_search_progress(
                        search_log, len(seen), visited, time.monotonic() - started, index
                    )
            save(index + 1, (), None)

        if handoff is not None:
            remaining = chain([handoff], branches)
            search_log.info(f"🚀 fanning out from branch {handoff[0]} over {jobs} workers")
            with multiprocessing.Pool(processes=jobs) as pool:
                while window := list(islice(remaining, jobs * 4)):
                    work = [(tuple(labels), family.inputs, prefix) for _, prefix in window]
                    for (index, prefix), (firsts, count) in zip(
                        window, pool.imap(_walk_branch, work)
                    ):
                        visited += count
                        for code, path in firsts:
                            if emit(code):
                                yield code
                                if limit is not None and new_codes >= limit:
                                    save(index, prefix, path)
                                    return
                        save(index + 1, (), None)
                        log_search_progress(
                            search_log, len(seen), visited, time.monotonic() - started, index
                        )

        save(checkpoint.branch_index, (), None, finished=True)
        search_log.info(f"🏁 search finished: {len(seen)} classes, {visited} leaves")
    finally:
        if resume is not None:
            resume.close()


def expand_classes(family: InputFamily, codes: Sequence[CanonicalCode]) -> list[HistorySpace]:
    """All spaces of the given symmetry classes, sorted by code."""
    group = symmetry_group(family)
    spaces: set[tuple[int, ...]] = set()
    for code in codes:
        spaces.update(tuple(sorted(perm[c] for c in code)) for perm in group.code_perms)
    return [HistorySpace(family, codes) for codes in sorted(spaces)]


# --- hierarchy -------------------------------------------------------------------


@dataclass
class HierarchyGraph:
    """Covering graph of the refinement order on a set of spaces.

    Node i is ``spaces[i]``; an edge (u, v) says ``spaces[u]`` is a closest
    refinement of ``spaces[v]``. Nodes are numbered class by class, classes
    by canonical code.
    """

    family: InputFamily
    spaces: list[HistorySpace]
    edges: list[tuple[int, int]]
    class_of: list[int]
    classes: list[list[int]]
    class_codes: list[CanonicalCode]
    class_edges: set[tuple[int, int]] = field(default_factory=set)
    quotient_edges: set[tuple[int, int]] = field(default_factory=set)

    @property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for i, space in enumerate(self.spaces):
            graph.add_node(i, codes=space.codes, cls=self.class_of[i])
        graph.add_edges_from(self.edges)
        return graph

    @property
    def class_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for i, members in enumerate(self.classes):
            graph.add_node(i, size=len(members), code=self.class_codes[i])
        graph.add_edges_from(self.class_edges)
        return graph

    @property
    def maxima(self) -> list[int]:
        """Spaces with no coarser space in the set."""
        has_cover = {u for u, _ in self.edges}
        return [i for i in range(len(self.spaces)) if i not in has_cover]

    @property
    def discrepancy(self) -> set[tuple[int, int]]:
        """Projected covers that are not covers of the class-level order."""
        return self.class_edges - self.quotient_edges

    def class_sizes(self) -> list[int]:
        return [len(members) for members in self.classes]


def build_hierarchy(
    spaces: Sequence[HistorySpace], *, quotient_covers: bool = False
) -> HierarchyGraph:
    """Covers among ``spaces`` and their condensation by symmetry class.

    ``class_edges`` projects space-level covers onto classes; with
    ``quotient_covers`` the class edges are instead the covers of the
    class-level order (both sets are always computed).
    """
    if not spaces:
        raise BAD_ARGUMENT("cannot build a hierarchy of no spaces")
    family = spaces[0].family
    if any(s.family != family for s in spaces):
        raise BAD_ARGUMENT("all spaces must share one input family")
    if len({s.codes for s in spaces}) != len(spaces):
        raise BAD_ARGUMENT("spaces must be deduplicated")

    group = symmetry_group(family)
    keyed = sorted(
        ((group.canonical_codes(s.codes), s.codes, s) for s in spaces), key=lambda t: t[:2]
    )
    ordered = [s for _, _, s in keyed]
    class_codes: list[CanonicalCode] = []
    class_of: list[int] = []
    classes: list[list[int]] = []
    for node, (code, _, _) in enumerate(keyed):
        if not class_codes or class_codes[-1] != code:
            class_codes.append(code)
            classes.append([])
        class_of.append(len(class_codes) - 1)
        classes[-1].append(node)

    masks = [s.ext_mask for s in ordered]
    sizes = [m.bit_count() for m in masks]
    by_size = sorted(range(len(ordered)), key=lambda i: -sizes[i])
    edges: list[tuple[int, int]] = []
    for u, ext_u in enumerate(masks):
        accepted: list[int] = []
        for v in by_size:
            ext_v = masks[v]
            if v == u or ext_v == ext_u or ext_v & ~ext_u:
                continue
            if any(ext_v & ~masks[c] == 0 for c in accepted):
                continue
            accepted.append(v)
        edges.extend((u, v) for v in sorted(accepted))

    projected = {(class_of[u], class_of[v]) for u, v in edges}
    class_dag = nx.DiGraph()
    class_dag.add_nodes_from(range(len(classes)))
    class_dag.add_edges_from(projected)
    reduced = set(nx.transitive_reduction(class_dag).edges)

    hierarchy = HierarchyGraph(
        family=family,
        spaces=ordered,
        edges=edges,
        class_of=class_of,
        classes=classes,
        class_codes=class_codes,
        class_edges=reduced if quotient_covers else projected,
        quotient_edges=reduced,
    )
    logger.info(
        f"🌳 hierarchy: {len(ordered)} spaces, {len(edges)} covers, "
        f"{len(classes)} classes, {len(projected)} class edges"
    )
    return hierarchy


def class_table(hierarchy: HierarchyGraph) -> pd.DataFrame:
    """One row per symmetry class, using the first space of the class as representative."""
    maxima = set(hierarchy.maxima)
    rows = []
    for index, members in enumerate(hierarchy.classes):
        rep = hierarchy.spaces[members[0]]
        rows.append(
            {
                "class": index,
                "size": len(members),
                "code": ",".join(map(str, hierarchy.class_codes[index])),
                "histories": len(rep),
                "ext_size": len(rep.ext),
                "tight": is_tight(rep),
                "fixed_definite": bool(fixed_definite_orders(rep)),
                "order_induced": bool(inducing_orders(rep)),
                "maximal": members[0] in maxima,
            }
        )
    return pd.DataFrame(rows).set_index("class")


def stats(spaces: Sequence[HistorySpace] | HierarchyGraph) -> StatsReport:
    hierarchy = spaces if isinstance(spaces, HierarchyGraph) else build_hierarchy(spaces)
    table = class_table(hierarchy)
    orbit_sizes = Counter(int(size) for size in table["size"])
    return StatsReport(
        spaces=int(table["size"].sum()),
        classes=len(table),
        tight_classes=int(table["tight"].sum()),
        nontight_classes=int((~table["tight"]).sum()),
        no_fixed_definite_classes=int((~table["fixed_definite"]).sum()),
        order_induced_classes=int(table["order_induced"].sum()),
        maxima_classes=int(table["maximal"].sum()),
        maxima_spaces=len(hierarchy.maxima),
        orbit_sizes=dict(sorted(orbit_sizes.items())),
    )


def _landmark_spaces(family: InputFamily) -> dict[str, HistorySpace]:
    labels = family.events.labels
    spaces = {
        "discrete": induce(Preorder.discrete(family.events), family),
        "total": induce(Preorder.total(*labels), family),
    }
    if len(labels) == 3:
        a, b, c = labels
        spaces["fork"] = induce(Preorder.fork(a, b, c), family)
        spaces["wedge"] = induce(Preorder.wedge(a, b, c), family)
        spaces["total_point"] = induce(
            join_orders([Preorder.total(a, b), Preorder.discrete([c])]), family
        )
        head_family = family.restrict([a])
        head = induce(Preorder.discrete([a]), head_family)
        tail_family = family.restrict([b, c])
        branches = [
            induce(Preorder.total(b, c), tail_family),
            induce(Preorder.total(c, b), tail_family),
        ]
        keys = [PartialFunction.decode(head_family, code) for code in head.codes]
        # first input orders b before c, every other input orders c before b
        choice = {key: branches[0 if i == 0 else 1] for i, key in enumerate(keys)}
        spaces["switch"] = embed(cond_sequential(head, choice), family)
    return spaces


def landmark_classes(hierarchy: HierarchyGraph) -> dict[str, int]:
    """Class index of each structurally named space that occurs in the hierarchy."""
    group = symmetry_group(hierarchy.family)
    index = {code: i for i, code in enumerate(hierarchy.class_codes)}
    found = {}
    for name, space in _landmark_spaces(hierarchy.family).items():
        code = group.canonical_codes(space.codes)
        if code in index:
            found[name] = index[code]
    return found
