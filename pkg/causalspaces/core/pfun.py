"""
Partial functions from events to inputs.

Every partial function of an InputFamily has an integer code (PFCode): a
mixed-radix number with one digit per event, most significant first, where
digit 0 is "undefined" and digit v+1 is the v-th input of that event. The
``PFunUniverse`` of a family holds the code tables that the space and search
modules run on; ``PartialFunction`` is the value-level view.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Collection, Iterable, Iterator, Mapping, Sequence

from .bitset import iter_bits
from .errors import BAD_ARGUMENT, FAMILY_MISMATCH, OVERLAPPING_EVENTS, SIZE_GUARD
from .preorder import EventSet
from .settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InputFamily:
    events: EventSet
    inputs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "events", EventSet.coerce(self.events))
        inputs = tuple(tuple(values) for values in self.inputs)
        object.__setattr__(self, "inputs", inputs)
        if len(inputs) != len(self.events):
            raise BAD_ARGUMENT(
                f"{len(inputs)} input sets given for {len(self.events)} events"
            )
        for label, values in zip(self.events, inputs):
            if not values:
                raise BAD_ARGUMENT(f"event {label!r} has an empty input set")
            if len(set(values)) != len(values):
                raise BAD_ARGUMENT(f"event {label!r} has repeated input values {values}")
            if any(not isinstance(v, int) or v < 0 for v in values):
                raise BAD_ARGUMENT(f"inputs of {label!r} must be non-negative integers")

    @classmethod
    def uniform(cls, events: EventSet | Iterable[str] | str, k: int) -> InputFamily:
        events = EventSet.coerce(events)
        if k < 1:
            raise BAD_ARGUMENT(f"input sets need at least one value, got {k}")
        return cls(events, (tuple(range(k)),) * len(events))

    @classmethod
    def from_mapping(cls, inputs: Mapping[str, Sequence[int]]) -> InputFamily:
        return cls(EventSet(tuple(inputs)), tuple(tuple(v) for v in inputs.values()))

    @classmethod
    def union(cls, families: Sequence[InputFamily]) -> InputFamily:
        """Disjoint union; shared labels are an error."""
        seen: set[str] = set()
        for family in families:
            overlap = seen & set(family.events.labels)
            if overlap:
                raise OVERLAPPING_EVENTS(overlap)
            seen |= set(family.events.labels)
        return cls(
            EventSet(tuple(l for f in families for l in f.events.labels)),
            tuple(values for f in families for values in f.inputs),
        )

    @classmethod
    def merge(cls, families: Sequence[InputFamily]) -> InputFamily:
        """Union allowing shared labels; input sets of a shared label are united."""
        merged: dict[str, set[int]] = {}
        for family in families:
            for label, values in zip(family.events, family.inputs):
                merged.setdefault(label, set()).update(values)
        return cls.from_mapping({label: sorted(values) for label, values in merged.items()})

    def restrict(self, labels: Iterable[str]) -> InputFamily:
        keep = set(labels)
        pairs = [(l, v) for l, v in zip(self.events, self.inputs) if l in keep]
        return InputFamily(EventSet(tuple(l for l, _ in pairs)), tuple(v for _, v in pairs))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(values) for values in self.inputs)

    @property
    def code_count(self) -> int:
        return math.prod(k + 1 for k in self.sizes)

    def as_mapping(self) -> dict[str, list[int]]:
        return {label: list(values) for label, values in zip(self.events, self.inputs)}

    def same_as(self, other: InputFamily) -> bool:
        """Same events with the same input sets, in any order."""
        return {l: frozenset(v) for l, v in zip(self.events, self.inputs)} == {
            l: frozenset(v) for l, v in zip(other.events, other.inputs)
        }

    def value_index(self, label: str, value: int) -> int:
        values = self.inputs[self.events.index(label)]
        try:
            return values.index(value)
        except ValueError:
            raise BAD_ARGUMENT(f"{value!r} is not an input of event {label!r}") from None

    @cached_property
    def universe(self) -> PFunUniverse:
        return PFunUniverse(self)


class PFunUniverse:
    """Code tables for every partial function of a family."""

    def __init__(self, family: InputFamily, max_codes: int | None = None):
        limit = settings.MAX_UNIVERSE_CODES if max_codes is None else max_codes
        if family.code_count > limit:
            raise SIZE_GUARD(
                f"family has {family.code_count} partial functions, guard is {limit}"
            )
        self.family = family
        self.n = len(family.events)
        radices = [k + 1 for k in family.sizes]
        self.weights = [math.prod(radices[i + 1 :]) for i in range(self.n)]
        self.size = math.prod(radices)
        self.full = (1 << self.n) - 1

        self.digits: list[tuple[int, ...]] = list(product(*(range(r) for r in radices)))
        self.dom: list[int] = [
            sum(1 << i for i, d in enumerate(digits) if d) for digits in self.digits
        ]
        self.card: list[int] = [mask.bit_count() for mask in self.dom]
        self.restrict: list[list[int]] = [self._restrictions(d) for d in self.digits]
        self.by_dom: list[list[int]] = [[] for _ in range(1 << self.n)]
        for code, mask in enumerate(self.dom):
            self.by_dom[mask].append(code)
        self.totals: tuple[int, ...] = tuple(self.by_dom[self.full])
        logger.debug(f"built code tables: {self.size} partial functions on {self.n} events")

    def _restrictions(self, digits: tuple[int, ...]) -> list[int]:
        table = [0] * (1 << self.n)
        for mask in range(1, 1 << self.n):
            low = (mask & -mask).bit_length() - 1
            table[mask] = table[mask & (mask - 1)] + digits[low] * self.weights[low]
        return table

    def nonempty(self) -> range:
        return range(1, self.size)

    def leq(self, a: int, b: int) -> bool:
        return self.dom[a] & ~self.dom[b] == 0 and self.restrict[b][self.dom[a]] == a

    def compatible(self, a: int, b: int) -> bool:
        common = self.dom[a] & self.dom[b]
        return self.restrict[a][common] == self.restrict[b][common]

    def join(self, a: int, b: int) -> int:
        """Code of a v b, or -1 if incompatible."""
        common = self.dom[a] & self.dom[b]
        shared = self.restrict[a][common]
        if shared != self.restrict[b][common]:
            return -1
        return a + b - shared

    def meet(self, a: int, b: int) -> int:
        da, db = self.digits[a], self.digits[b]
        agree = sum(
            1 << i for i in iter_bits(self.dom[a] & self.dom[b]) if da[i] == db[i]
        )
        return self.restrict[a][agree]

    def closure(self, codes: Iterable[int]) -> set[int]:
        """Pairwise join saturation; the empty function is never added."""
        result = {c for c in codes if c}
        order = sorted(result)
        i = 0
        while i < len(order):
            x = order[i]
            for y in order[:i]:
                z = self.join(x, y)
                if z >= 0 and z not in result:
                    result.add(z)
                    order.append(z)
            i += 1
        return result

    def covered(self, code: int, among: Iterable[int]) -> int:
        """Union of the domains of members strictly below ``code``."""
        mask = 0
        dom = self.dom
        for other in among:
            if other != code and self.leq(other, code):
                mask |= dom[other]
        return mask

    def prime(self, codes: Collection[int]) -> list[int]:
        """Members that are not joins of other members, sorted."""
        return sorted(c for c in codes if c and self.covered(c, codes) != self.dom[c])

    def is_closed(self, codes: Collection[int]) -> bool:
        members = set(codes)
        return all(
            z < 0 or z in members
            for x in members
            for y in members
            for z in (self.join(x, y),)
        )

    def maximal(self, codes: Collection[int]) -> list[int]:
        return sorted(
            c for c in codes if not any(o != c and self.leq(c, o) for o in codes)
        )

    def values(self, code: int) -> tuple[int | None, ...]:
        """Assignment vector of input indices, None where undefined."""
        return tuple(d - 1 if d else None for d in self.digits[code])

    def encode(self, assignment: Sequence[int | None]) -> int:
        return sum(
            (0 if v is None else v + 1) * w for v, w in zip(assignment, self.weights)
        )

    def as_dict(self, code: int) -> dict[str, int]:
        family = self.family
        return {
            family.events.labels[i]: family.inputs[i][self.digits[code][i] - 1]
            for i in iter_bits(self.dom[code])
        }

    def text(self, code: int) -> str:
        if not code:
            return "∅"
        return ", ".join(f"{label}/{value}" for label, value in self.as_dict(code).items())

    def from_dict(self, mapping: Mapping[str, int]) -> int:
        family = self.family
        assignment: list[int | None] = [None] * self.n
        for label, value in mapping.items():
            assignment[family.events.index(label)] = family.value_index(label, value)
        return self.encode(assignment)


class JoinFailure(str, Enum):
    INCOMPATIBLE = "incompatible"


Incompatible = JoinFailure.INCOMPATIBLE


@dataclass(frozen=True)
class PartialFunction:
    family: InputFamily
    assignment: tuple[int | None, ...]

    def __post_init__(self):
        assignment = tuple(self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != len(self.family.events):
            raise BAD_ARGUMENT(
                f"assignment of length {len(assignment)} for {len(self.family.events)} events"
            )
        for label, size, value in zip(self.family.events, self.family.sizes, assignment):
            if value is not None and not 0 <= value < size:
                raise BAD_ARGUMENT(f"input index {value} out of range for event {label!r}")

    @classmethod
    def decode(cls, family: InputFamily, code: int) -> PartialFunction:
        if not 0 <= code < family.code_count:
            raise BAD_ARGUMENT(f"code {code} outside [0, {family.code_count})")
        return cls(family, family.universe.values(code))

    @classmethod
    def from_mapping(cls, family: InputFamily, mapping: Mapping[str, int]) -> PartialFunction:
        """Build from ``{label: input value}``."""
        return cls.decode(family, family.universe.from_dict(mapping))

    @classmethod
    def empty(cls, family: InputFamily) -> PartialFunction:
        return cls(family, (None,) * len(family.events))

    @property
    def code(self) -> int:
        return self.family.universe.encode(self.assignment)

    @property
    def dom(self) -> int:
        return sum(1 << i for i, v in enumerate(self.assignment) if v is not None)

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.family.events.subset(self.dom))

    def as_dict(self) -> dict[str, int]:
        return self.family.universe.as_dict(self.code)

    def __len__(self) -> int:
        return sum(v is not None for v in self.assignment)

    def __str__(self) -> str:
        return self.family.universe.text(self.code)


def _same_family(*functions: PartialFunction) -> InputFamily:
    family = functions[0].family
    for f in functions[1:]:
        if f.family != family:
            raise FAMILY_MISMATCH("partial functions belong to different input families")
    return family


def leq(f: PartialFunction, g: PartialFunction) -> bool:
    return _same_family(f, g).universe.leq(f.code, g.code)


def meet(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    family = _same_family(f, g)
    return PartialFunction.decode(family, family.universe.meet(f.code, g.code))


def compatible(f: PartialFunction, g: PartialFunction) -> bool:
    return _same_family(f, g).universe.compatible(f.code, g.code)


def restrict(f: PartialFunction, events: Iterable[str]) -> PartialFunction:
    mask = f.family.events.mask(events)
    return PartialFunction.decode(f.family, f.family.universe.restrict[f.code][mask & f.dom])


def join(
    functions: Iterable[PartialFunction], family: InputFamily | None = None
) -> PartialFunction | JoinFailure:
    """Compatible join of a collection; ``Incompatible`` if any pair disagrees.

    The join of nothing is the empty function, which needs ``family``.
    """
    functions = list(functions)
    if not functions:
        if family is None:
            raise BAD_ARGUMENT("the empty join needs an input family")
        return PartialFunction.empty(family)
    family = _same_family(*functions)
    universe = family.universe
    acc = 0
    for f in functions:
        acc = universe.join(acc, f.code)
        if acc < 0:
            return Incompatible
    return PartialFunction.decode(family, acc)


def _codes(functions: Iterable[PartialFunction]) -> tuple[InputFamily | None, list[int]]:
    functions = list(functions)
    if not functions:
        return None, []
    family = _same_family(*functions)
    return family, [f.code for f in functions]


def closure(functions: Iterable[PartialFunction]) -> frozenset[PartialFunction]:
    family, codes = _codes(functions)
    if family is None:
        return frozenset()
    return frozenset(
        PartialFunction.decode(family, c) for c in family.universe.closure(codes)
    )


def prime_elements(functions: Iterable[PartialFunction]) -> frozenset[PartialFunction]:
    family, codes = _codes(functions)
    if family is None:
        return frozenset()
    return frozenset(
        PartialFunction.decode(family, c) for c in family.universe.prime(set(codes))
    )


def all_partial_functions(
    family: InputFamily, include_empty: bool = False
) -> Iterator[PartialFunction]:
    start = 0 if include_empty else 1
    for code in range(start, family.code_count):
        yield PartialFunction.decode(family, code)


def total_assignments(family: InputFamily) -> list[PartialFunction]:
    return [PartialFunction.decode(family, c) for c in family.universe.totals]
