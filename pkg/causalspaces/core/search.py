"""
Depth-first search over join-closed sets of partial functions.

A solution is a set W of non-empty partial functions that contains every total
assignment, is closed under compatible joins, and in which every member on two
or more events has a one-event restriction in W. These are exactly the
extended spaces of causally complete spaces, so Prime(W) is one.

Optional (non-empty, non-total) codes are decided in order of decreasing
domain size, include before exclude. Joins of a new member with existing
members are always larger, hence already decided, which makes the closure
check local; excluding a code can only break the descent property of its
one-event extensions, which is tracked with a live-children counter.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .bitset import iter_bits
from .errors import CORRUPT_CHECKPOINT
from .pfun import InputFamily
from .symmetry import SymmetryGroup

logger = logging.getLogger(__name__)

UNDECIDED, OUT, IN = -1, 0, 1

Path = tuple[int, ...]


@dataclass
class _State:
    status: list[int]
    live: list[int]
    members: int = 0
    path: list[int] = field(default_factory=list)


class ClosureSearch:
    def __init__(
        self,
        family: InputFamily,
        forced: Iterable[int] = (),
        group: SymmetryGroup | None = None,
    ):
        universe = family.universe
        self.family = family
        self.universe = universe
        totals = set(universe.totals)
        self.forced = (set(forced) | totals) - {0}
        self.order: list[int] = sorted(
            (c for c in universe.nonempty() if c not in totals),
            key=lambda c: (-universe.card[c], c),
        )
        self.position = {c: i for i, c in enumerate(self.order)}
        self.forced_at = [c in self.forced for c in self.order]

        size = universe.size
        self.children: list[list[int]] = [[] for _ in range(size)]
        self.parents: list[list[int]] = [[] for _ in range(size)]
        for code in universe.nonempty():
            dom = universe.dom[code]
            if universe.card[code] < 2:
                continue
            for i in iter_bits(dom):
                child = universe.restrict[code][dom & ~(1 << i)]
                self.children[code].append(child)
                self.parents[child].append(code)

        self.joins: list[list[tuple[int, int]]] = [[] for _ in range(size)]
        for x in self.order:
            for y in self.order:
                if x == y or universe.leq(x, y) or universe.leq(y, x):
                    continue
                z = universe.join(x, y)
                if z >= 0:
                    self.joins[x].append((y, z))

        n = universe.n
        self.layer = sum(1 for c in self.order if universe.card[c] == n - 1) if n >= 2 else 0
        extra_forced = self.forced - totals
        self.layer_perms: list[list[int]] | None = None
        if group is not None and not extra_forced and self.layer:
            layer_codes = self.order[: self.layer]
            layer_pos = {c: i for i, c in enumerate(layer_codes)}
            self.layer_perms = [
                [layer_pos[perm[c]] for c in layer_codes] for perm in group.code_perms
            ]

    @property
    def depth(self) -> int:
        return len(self.order)

    def _fresh(self) -> _State:
        status = [UNDECIDED] * self.universe.size
        members = 0
        for t in self.universe.totals:
            status[t] = IN
            members |= 1 << t
        live = [len(kids) for kids in self.children]
        return _State(status, live, members)

    def _try(self, st: _State, pos: int, decision: int) -> bool:
        x = self.order[pos]
        status = st.status
        if decision == IN:
            for y, z in self.joins[x]:
                if status[y] == IN and status[z] != IN:
                    return False
            status[x] = IN
            st.members |= 1 << x
            return True
        if self.forced_at[pos]:
            return False
        parents = self.parents[x]
        live = st.live
        for k in parents:
            live[k] -= 1
        for k in parents:
            if live[k] == 0 and status[k] == IN:
                for j in parents:
                    live[j] += 1
                return False
        status[x] = OUT
        return True

    def _undo(self, st: _State, pos: int, decision: int) -> None:
        x = self.order[pos]
        st.status[x] = UNDECIDED
        if decision == IN:
            st.members &= ~(1 << x)
        else:
            for k in self.parents[x]:
                st.live[k] += 1

    def _canonical(self, path: list[int]) -> bool:
        chosen = [i for i in range(self.layer) if path[i] == IN]
        mask = sum(1 << i for i in chosen)
        for perm in self.layer_perms or ():
            image = 0
            for i in chosen:
                image |= 1 << perm[i]
            if image < mask:
                return False
        return True

    def _replay(self, st: _State, path: Iterable[int]) -> None:
        for decision in path:
            pos = len(st.path)
            if pos >= self.depth or decision not in (IN, OUT) or not self._try(st, pos, decision):
                raise CORRUPT_CHECKPOINT(f"decision path is not replayable at position {pos}")
            st.path.append(decision)

    def _search(self, prefix: Path, resume: Path | None, limit: int) -> Iterator[tuple[Path, int]]:
        st = self._fresh()
        self._replay(st, prefix)
        floor = len(prefix)
        backtrack = False
        if resume is not None:
            if tuple(resume[:floor]) != tuple(prefix) or len(resume) != limit:
                raise CORRUPT_CHECKPOINT("resume path does not extend the branch prefix")
            self._replay(st, resume[floor:])
            backtrack = True
        prune = self.layer_perms is not None and floor < self.layer <= limit
        path = st.path

        while True:
            if not backtrack:
                alive = True
                while True:
                    pos = len(path)
                    if prune and pos == self.layer and not self._canonical(path):
                        alive = False
                        break
                    if pos == limit:
                        break
                    if self._try(st, pos, IN):
                        path.append(IN)
                    elif self._try(st, pos, OUT):
                        path.append(OUT)
                    else:
                        alive = False
                        break
                if alive:
                    yield tuple(path), st.members
            backtrack = False
            while True:
                if len(path) <= floor:
                    return
                pos = len(path) - 1
                decision = path.pop()
                self._undo(st, pos, decision)
                if decision == IN and self._try(st, pos, OUT):
                    path.append(OUT)
                    break

    def branches(self) -> Iterator[Path]:
        """Decision prefixes over the (n-1)-event layer, symmetry-reduced, in DFS order."""
        for path, _ in self._search((), None, self.layer):
            yield path

    def walk(self, prefix: Path = (), resume: Path | None = None) -> Iterator[tuple[Path, int]]:
        """Every solution below ``prefix`` as (decision path, member bitmask).

        With ``resume`` (a full path previously yielded) the walk continues
        strictly after it.
        """
        return self._search(tuple(prefix), None if resume is None else tuple(resume), self.depth)

    def solutions(self) -> Iterator[int]:
        for branch in self.branches():
            for _, members in self.walk(branch):
                yield members
