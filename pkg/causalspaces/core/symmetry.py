"""
Event-input permutation symmetry.

The group acts on a family by permuting events of equal input-set size and,
independently at every event, permuting its inputs. Elements are materialised
as permutations of PFCodes, so acting on a space is a table lookup per history.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import cache
from itertools import permutations, product

from .errors import SIZE_GUARD
from .pfun import InputFamily
from .settings import settings
from .space import HistorySpace, align

logger = logging.getLogger(__name__)

CanonicalCode = tuple[int, ...]


@dataclass(frozen=True)
class GroupElement:
    event_perm: tuple[int, ...]               # event i goes to event_perm[i]
    input_perms: tuple[tuple[int, ...], ...]  # input v at event i goes to input_perms[i][v]


def group_order(family: InputFamily) -> int:
    sizes = family.sizes
    events = math.prod(math.factorial(c) for c in Counter(sizes).values())
    return events * math.prod(math.factorial(k) for k in sizes)


class SymmetryGroup:
    def __init__(self, family: InputFamily, max_order: int | None = None):
        limit = settings.MAX_GROUP_ORDER if max_order is None else max_order
        order = group_order(family)
        if order > limit:
            raise SIZE_GUARD(f"symmetry group of order {order} exceeds the guard of {limit}")
        self.family = family
        sizes = family.sizes
        n = len(sizes)
        event_perms = [
            p for p in permutations(range(n)) if all(sizes[p[i]] == sizes[i] for i in range(n))
        ]
        input_perms = [list(permutations(range(k))) for k in sizes]
        self.elements: list[GroupElement] = [
            GroupElement(sigma, pis) for sigma in event_perms for pis in product(*input_perms)
        ]
        self.code_perms: list[tuple[int, ...]] = [self._code_perm(g) for g in self.elements]
        logger.debug(f"materialised symmetry group of order {len(self.elements)}")

    def _code_perm(self, g: GroupElement) -> tuple[int, ...]:
        universe = self.family.universe
        image: list[int] = []
        for code in range(universe.size):
            values: list[int | None] = [None] * universe.n
            for i, v in enumerate(universe.values(code)):
                if v is not None:
                    values[g.event_perm[i]] = g.input_perms[i][v]
            image.append(universe.encode(values))
        return tuple(image)

    def __len__(self) -> int:
        return len(self.elements)

    def act(self, index: int, space: HistorySpace) -> HistorySpace:
        perm = self.code_perms[index]
        return HistorySpace(space.family, tuple(perm[c] for c in space.codes))

    def canonical_codes(self, codes: tuple[int, ...] | list[int]) -> CanonicalCode:
        """Lexicographically least sorted image of a code set over the group."""
        return min(tuple(sorted(perm[c] for c in codes)) for perm in self.code_perms)

    def canonicalize(self, space: HistorySpace) -> CanonicalCode:
        return self.canonical_codes(align(space, self.family).codes)

    def orbit(self, space: HistorySpace) -> list[HistorySpace]:
        """Images of ``space``, expressed over the group's family."""
        codes = align(space, self.family).codes
        images = {tuple(sorted(perm[c] for c in codes)) for perm in self.code_perms}
        return [HistorySpace(self.family, codes) for codes in sorted(images)]


@cache
def symmetry_group(family: InputFamily) -> SymmetryGroup:
    return SymmetryGroup(family)


def canonicalize(space: HistorySpace) -> CanonicalCode:
    return symmetry_group(space.family).canonicalize(space)


def orbit(space: HistorySpace) -> list[HistorySpace]:
    return symmetry_group(space.family).orbit(space)
