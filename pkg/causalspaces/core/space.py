"""
Spaces of input histories.

A HistorySpace is a finite join-prime set of non-empty partial functions over
an InputFamily, stored as sorted PFCodes. Extended histories, tips, causal
completeness and tightness are all computed on codes through the family's
PFunUniverse.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cache, cached_property
from itertools import product
from typing import Iterable, Iterator, Literal, Mapping, Sequence

from .bitset import iter_bits
from .errors import BAD_ARGUMENT, FAMILY_MISMATCH, INCONSISTENT, NOT_FOUND, OVERLAPPING_EVENTS
from .pfun import InputFamily, PartialFunction, PFunUniverse
from .preorder import Preorder, enumerate_preorders, is_definite, lowersets

logger = logging.getLogger(__name__)

HistoryLike = PartialFunction | Mapping[str, int]


@dataclass(frozen=True)
class HistorySpace:
    family: InputFamily
    codes: tuple[int, ...]

    def __post_init__(self):
        codes = tuple(sorted(set(self.codes)))
        object.__setattr__(self, "codes", codes)
        universe = self.family.universe
        for code in codes:
            if not 0 < code < universe.size:
                raise BAD_ARGUMENT(
                    f"history code {code} is not a non-empty partial function of the family"
                )
        if universe.prime(codes) != list(codes):
            joins = sorted(set(codes) - set(universe.prime(codes)))
            raise BAD_ARGUMENT(
                "histories are not join-prime: "
                + "; ".join(universe.text(c) for c in joins)
            )

    @classmethod
    def from_histories(
        cls, family: InputFamily, histories: Iterable[HistoryLike]
    ) -> HistorySpace:
        universe = family.universe
        codes = []
        for history in histories:
            if isinstance(history, PartialFunction):
                if history.family != family:
                    raise FAMILY_MISMATCH("history belongs to a different input family")
                codes.append(history.code)
            else:
                codes.append(universe.from_dict(history))
        return cls(family, tuple(codes))

    @classmethod
    def empty(cls, family: InputFamily) -> HistorySpace:
        return cls(family, ())

    @property
    def universe(self) -> PFunUniverse:
        return self.family.universe

    @property
    def histories(self) -> tuple[PartialFunction, ...]:
        return tuple(PartialFunction.decode(self.family, c) for c in self.codes)

    @property
    def events(self) -> tuple[str, ...]:
        """Events appearing in some history, in family order."""
        mask = 0
        for code in self.codes:
            mask |= self.universe.dom[code]
        return self.family.events.subset(mask)

    @property
    def inputs(self) -> dict[str, tuple[int, ...]]:
        """Inputs appearing at each event, in family order."""
        seen: dict[str, set[int]] = {}
        for code in self.codes:
            for label, value in self.universe.as_dict(code).items():
                seen.setdefault(label, set()).add(value)
        return {
            label: tuple(v for v in values if v in seen[label])
            for label, values in zip(self.family.events, self.family.inputs)
            if label in seen
        }

    @cached_property
    def ext(self) -> tuple[int, ...]:
        return tuple(sorted(self.universe.closure(self.codes)))

    @cached_property
    def ext_mask(self) -> int:
        mask = 0
        for code in self.ext:
            mask |= 1 << code
        return mask

    def text(self) -> list[str]:
        return [self.universe.text(c) for c in self.codes]

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[PartialFunction]:
        return iter(self.histories)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, PartialFunction):
            return item.family == self.family and item.code in self.codes
        if isinstance(item, Mapping):
            return self.universe.from_dict(item) in self.codes
        return False


@dataclass(frozen=True)
class ExtendedSpace:
    base: HistorySpace
    ext: tuple[int, ...]
    maximal: tuple[int, ...]

    @property
    def histories(self) -> tuple[PartialFunction, ...]:
        return tuple(PartialFunction.decode(self.base.family, c) for c in self.ext)

    @property
    def extended_only(self) -> tuple[int, ...]:
        base = set(self.base.codes)
        return tuple(c for c in self.ext if c not in base)

    def __len__(self) -> int:
        return len(self.ext)


@dataclass(frozen=True)
class TipReport:
    space: HistorySpace
    tips: Mapping[int, int]  # extended history code -> tip event mask

    def tips_of(self, history: HistoryLike | int) -> frozenset[str]:
        code = _code_of(self.space.family, history)
        if code not in self.tips:
            raise NOT_FOUND(f"{self.space.universe.text(code)} is not an extended history")
        return frozenset(self.space.family.events.subset(self.tips[code]))

    def tip_of(self, history: HistoryLike | int) -> str:
        """The tip event of a history of a causally complete space."""
        tips = self.tips_of(history)
        if len(tips) != 1:
            raise BAD_ARGUMENT(f"history has {len(tips)} tip events, not exactly one")
        return next(iter(tips))


def _code_of(family: InputFamily, history: HistoryLike | int) -> int:
    if isinstance(history, int):
        return history
    if isinstance(history, PartialFunction):
        return history.code
    return family.universe.from_dict(history)


def align(space: HistorySpace, family: InputFamily) -> HistorySpace:
    """``space`` over ``family``, which may list the same events in another order."""
    if space.family == family:
        return space
    if not space.family.same_as(family):
        raise FAMILY_MISMATCH("spaces must share the same input family")
    return embed(space, family)


def embed(space: HistorySpace, family: InputFamily) -> HistorySpace:
    """The same histories expressed over a larger (or reordered) family."""
    source, target = space.universe, family.universe
    return HistorySpace(family, tuple(target.from_dict(source.as_dict(c)) for c in space.codes))


# --- construction ------------------------------------------------------------


def induce(order: Preorder, family: InputFamily) -> HistorySpace:
    """All input assignments on the causal past of each event."""
    if set(order.labels) != set(family.events.labels):
        raise BAD_ARGUMENT(
            f"order events {list(order.labels)} differ from family events "
            f"{list(family.events.labels)}"
        )
    universe = family.universe
    codes: set[int] = set()
    for i in range(order.n):
        past = family.events.mask(order.events.subset(order.cols[i]))
        codes.update(universe.by_dom[past])
    return HistorySpace(family, tuple(codes))


def ext_hist(order: Preorder, family: InputFamily) -> tuple[int, ...]:
    """Codes of all assignments on non-empty lowersets of ``order``."""
    universe = family.universe
    codes: list[int] = []
    for lowerset in lowersets(order).nonempty:
        codes.extend(universe.by_dom[family.events.mask(order.events.subset(lowerset))])
    return tuple(sorted(codes))


def discrete_space(family: InputFamily) -> HistorySpace:
    return induce(Preorder.discrete(family.events), family)


def indiscrete_space(family: InputFamily) -> HistorySpace:
    return induce(Preorder.indiscrete(family.events), family)


def extend(space: HistorySpace) -> ExtendedSpace:
    universe = space.universe
    return ExtendedSpace(space, space.ext, tuple(universe.maximal(space.ext)))


def is_join_prime(functions: Iterable[PartialFunction]) -> bool:
    functions = list(functions)
    if not functions:
        return True
    universe = functions[0].family.universe
    codes = {f.code for f in functions}
    return universe.prime(codes) == sorted(codes)


def is_join_closed(functions: Iterable[PartialFunction]) -> bool:
    functions = list(functions)
    if not functions:
        return True
    return functions[0].family.universe.is_closed({f.code for f in functions})


# --- hierarchy -----------------------------------------------------------------


def free_choice(space: HistorySpace) -> bool:
    """Maximal extended histories are exactly the total assignments of the family."""
    universe = space.universe
    if universe.n == 0:
        return True
    mask = space.ext_mask
    return all(mask >> t & 1 for t in universe.totals)


def _history_keys(space: HistorySpace) -> set[frozenset[tuple[str, int]]]:
    return {frozenset(space.universe.as_dict(c).items()) for c in space.ext}


def space_leq(finer: HistorySpace, coarser: HistorySpace) -> bool:
    """``finer <= coarser`` iff Ext(finer) contains Ext(coarser)."""
    if finer.family == coarser.family:
        return coarser.ext_mask & ~finer.ext_mask == 0
    return _history_keys(coarser) <= _history_keys(finer)


def space_join(a: HistorySpace, b: HistorySpace) -> HistorySpace:
    """Closest common coarsening: Prime(Ext(a) & Ext(b))."""
    family = a.family
    common = set(a.ext) & set(align(b, family).ext)
    return HistorySpace(family, tuple(family.universe.prime(common)))


def space_meet(a: HistorySpace, b: HistorySpace) -> HistorySpace:
    """Closest common refinement: Prime(Ext(a) | Ext(b))."""
    family = a.family
    universe = family.universe
    ext = set(a.ext) | set(align(b, family).ext)
    return HistorySpace(family, tuple(universe.prime(universe.closure(ext))))


# --- composition ---------------------------------------------------------------


def _maximal_or_empty(space: HistorySpace) -> list[int]:
    # the empty space behaves as the unit of sequential composition
    if not space.codes:
        return [0]
    return space.universe.maximal(space.ext)


def parallel(a: HistorySpace, b: HistorySpace) -> HistorySpace:
    family = InputFamily.union([a.family, b.family])
    return HistorySpace(family, embed(a, family).codes + embed(b, family).codes)


def sequential(first: HistorySpace, then: HistorySpace) -> HistorySpace:
    """A copy of ``then`` after every maximal extended history of ``first``."""
    family = InputFamily.union([first.family, then.family])
    universe = family.universe
    base = embed(first, family).codes
    maxima = [universe.from_dict(first.universe.as_dict(k)) for k in _maximal_or_empty(first)]
    after = embed(then, family).codes
    return HistorySpace(family, base + tuple(k + h for k in maxima for h in after))


def cond_sequential(
    first: HistorySpace,
    family_map: Mapping[PartialFunction, HistorySpace],
) -> HistorySpace:
    """Conditional sequential composition, keyed by the maximal extended histories of ``first``."""
    maxima = _maximal_or_empty(first)
    keyed: dict[int, HistorySpace] = {}
    for key, child in family_map.items():
        if key.family != first.family:
            raise FAMILY_MISMATCH("family keys must be histories of the first space's family")
        keyed[key.code] = child
    missing = [k for k in maxima if k not in keyed]
    if missing:
        raise NOT_FOUND(
            "missing family key for maximal history "
            + "; ".join(first.universe.text(k) for k in missing)
        )
    extra = sorted(set(keyed) - set(maxima))
    if extra:
        raise BAD_ARGUMENT(
            "family keys are not maximal extended histories: "
            + "; ".join(first.universe.text(k) for k in extra)
        )
    own = set(first.family.events.labels)
    for child in keyed.values():
        overlap = own & set(child.family.events.labels)
        if overlap:
            raise OVERLAPPING_EVENTS(overlap)

    family = InputFamily.merge([first.family, *(keyed[k].family for k in maxima)])
    universe = family.universe
    codes = list(embed(first, family).codes)
    for k in maxima:
        head = universe.from_dict(first.universe.as_dict(k))
        codes.extend(head + h for h in embed(keyed[k], family).codes)
    return HistorySpace(family, tuple(codes))


# --- tips, completeness, tightness ----------------------------------------------


def _tip_masks(universe: PFunUniverse, ext: Sequence[int]) -> dict[int, int]:
    return {h: universe.dom[h] & ~universe.covered(h, ext) for h in ext}


def tips(space: HistorySpace) -> TipReport:
    return TipReport(space, _tip_masks(space.universe, space.ext))


def _descends(space: HistorySpace) -> bool:
    universe = space.universe
    mask = space.ext_mask
    for k in space.ext:
        dom = universe.dom[k]
        if universe.card[k] < 2:
            continue
        row = universe.restrict[k]
        if not any(mask >> row[dom & ~(1 << i)] & 1 for i in iter_bits(dom)):
            return False
    return True


CompletenessMethod = Literal["tips", "descent", "both"]


def is_causally_complete(space: HistorySpace, method: CompletenessMethod = "both") -> bool:
    """Free choice and exactly one tip per input history.

    ``descent`` uses the equivalent test: every extended history on two or more
    events has a one-event restriction that is again extended. ``both`` runs
    the two and raises if they disagree.
    """
    if not free_choice(space):
        return False
    by_tips = by_descent = None
    if method in ("tips", "both"):
        report = _tip_masks(space.universe, space.ext)
        by_tips = all(report[h].bit_count() == 1 for h in space.codes)
    if method in ("descent", "both"):
        by_descent = _descends(space)
    if method == "both" and by_tips != by_descent:
        raise INCONSISTENT(
            f"tip test says {by_tips}, descent test says {by_descent} for {space.text()}"
        )
    return bool(by_tips if by_tips is not None else by_descent)


TightnessMode = Literal["all", "maximal"]


def is_tight(space: HistorySpace, mode: TightnessMode = "all") -> bool:
    """Each event of each extended history is the tip of exactly one history below it."""
    universe = space.universe
    report = _tip_masks(universe, space.ext)
    targets = space.ext if mode == "all" else universe.maximal(space.ext)
    for k in targets:
        for event in iter_bits(universe.dom[k]):
            witnesses = sum(
                1
                for h in space.codes
                if report[h] >> event & 1 and universe.leq(h, k)
            )
            if witnesses != 1:
                return False
    return True


# --- orders behind a space ------------------------------------------------------


@cache
def _induced_spaces(family: InputFamily) -> tuple[tuple[Preorder, int, tuple[int, ...]], ...]:
    """(order, ext mask, codes) for every order on the family's events, by encoding."""
    rows = []
    for order in enumerate_preorders(family.events):
        space = induce(order, family)
        rows.append((order, space.ext_mask, space.codes))
    return tuple(rows)


def fixed_definite_orders(space: HistorySpace) -> list[Preorder]:
    """Definite orders whose induced space lies above ``space``."""
    mask = space.ext_mask
    return [
        order
        for order, ext_mask, _ in _induced_spaces(space.family)
        if is_definite(order) and ext_mask & ~mask == 0
    ]


def inducing_orders(space: HistorySpace) -> list[Preorder]:
    """Orders whose induced space is exactly ``space``."""
    return [order for order, _, codes in _induced_spaces(space.family) if codes == space.codes]


# --- switch spaces ----------------------------------------------------------------


def count_switch_spaces(n: int, k: int) -> int:
    """Number of causal switch spaces on n events with k inputs each."""
    if n < 0 or k < 1:
        raise BAD_ARGUMENT(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    return math.prod(j ** (k ** (n - j)) for j in range(1, n + 1))


def count_switch_spaces_family(family: InputFamily) -> int:
    sizes = family.sizes

    @cache
    def count(mask: int) -> int:
        if not mask:
            return 1
        return sum(count(mask & ~(1 << i)) ** sizes[i] for i in iter_bits(mask))

    return count((1 << len(sizes)) - 1)


def switch_spaces(family: InputFamily) -> list[HistorySpace]:
    """Causal switch spaces, built by conditional sequential composition.

    A first event is chosen, then for each of its inputs an independent switch
    space on the remaining events; the empty family has the empty space.
    """

    @cache
    def build(labels: tuple[str, ...]) -> tuple[HistorySpace, ...]:
        sub = family.restrict(labels)
        if not labels:
            return (HistorySpace.empty(sub),)
        spaces: list[HistorySpace] = []
        for first in labels:
            head_family = family.restrict([first])
            head = discrete_space(head_family)
            maxima = [PartialFunction.decode(head_family, c) for c in head.codes]
            rest = tuple(label for label in labels if label != first)
            for choice in product(build(rest), repeat=len(maxima)):
                composed = cond_sequential(head, dict(zip(maxima, choice)))
                spaces.append(embed(composed, sub))
        return tuple(spaces)

    result = sorted(set(build(family.events.labels)), key=lambda s: s.codes)
    logger.debug(f"built {len(result)} switch spaces on {len(family.events)} events")
    return result
