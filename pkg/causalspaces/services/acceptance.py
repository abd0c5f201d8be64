"""
Acceptance runner - recomputes the published counts end to end
Each check logs one PASS/FAIL line; `quick` skips the exhaustive 3-event runs
"""
import logging
import random
import time
from typing import Callable

from ..core.pfun import InputFamily
from ..core.preorder import (
    Preorder,
    enumerate_preorders,
    includes,
    is_definite,
    is_intersection_closed,
    join,
    lowerset_family_union,
    lowersets,
    meet,
    missing_intersections,
)
from ..core.completions import causal_completions
from ..core.space import (
    count_switch_spaces,
    discrete_space,
    induce,
    inducing_orders,
    is_causally_complete,
    is_tight,
    space_meet,
    switch_spaces,
)
from ..models.report import CheckResult, CheckStatus
from .classify import (
    build_hierarchy,
    enumerate_cc_bruteforce,
    enumerate_cc_dfs,
    expand_classes,
    stats,
)

logger = logging.getLogger(__name__)


class AcceptanceRunner:
    def __init__(self, quick: bool = False, seed: int = 0):
        self.quick = quick
        self.rng = random.Random(seed)
        self.results: list[CheckResult] = []

    def log_test(self, step: str, status: CheckStatus, details: str = "") -> None:
        result = CheckResult(name=step, status=status, details=details)
        self.results.append(result)
        icon = {"PASS": "✅", "FAIL": "❌"}.get(status.value, "ℹ️")
        print(f"[{result.timestamp}] {icon} {step}: {details}")

    def expect(self, step: str, actual, expected) -> bool:
        if actual == expected:
            self.log_test(step, CheckStatus.PASS, f"{actual}")
            return True
        self.log_test(step, CheckStatus.FAIL, f"expected {expected}, got {actual}")
        return False

    def guarded(self, step: str, check: Callable[[], None], exhaustive: bool = False) -> None:
        if exhaustive and self.quick:
            self.log_test(step, CheckStatus.SKIP, "exhaustive check skipped in quick mode")
            return
        started = time.monotonic()
        try:
            check()
        except Exception as e:
            logger.exception(f"check {step} crashed")
            self.log_test(step, CheckStatus.FAIL, f"{type(e).__name__}: {e}")
            return
        logger.debug(f"{step} took {time.monotonic() - started:.2f}s")

    # --- orders ---------------------------------------------------------------

    def check_preorder_counts(self) -> None:
        counts = [len(enumerate_preorders("ABCDE"[:n])) for n in (2, 3, 4)]
        self.expect("PREORDER_COUNTS", counts, [4, 29, 355])

    def check_preorder_count_5(self) -> None:
        self.expect("PREORDER_COUNT_5", len(enumerate_preorders("ABCDE")), 6942)

    def check_diamond(self) -> None:
        diamond = Preorder.diamond("A", "B", "C", "D")
        subs = enumerate_preorders(diamond.events, restrict_below=diamond)
        self.expect("DIAMOND_SUBORDERS", (len(subs), all(map(is_definite, subs))), (25, True))

    def check_lowersets(self) -> None:
        orders = enumerate_preorders("ABC")
        lattices = {o.encoding: set(lowersets(o).label_sets()) for o in orders}
        failures = 0
        for a in orders:
            for b in orders:
                la, lb = lattices[a.encoding], lattices[b.encoding]
                if includes(a, b) != (lb <= la):
                    failures += 1
                if la & lb != set(lowersets(join([a, b])).label_sets()):
                    failures += 1
        self.expect("LOWERSET_INCLUSION_INTERSECTION", failures, 0)

        first = Preorder.from_relation("ABCD", [("A", "C"), ("C", "B"), ("C", "D")])
        second = Preorder.from_relation("ABCD", [("B", "C"), ("C", "A"), ("C", "D")])
        union = lowerset_family_union([lowersets(first), lowersets(second)])
        missing = sorted("".join(sorted(s)) for s in missing_intersections(union))
        self.expect("LOWERSET_UNION", (is_intersection_closed(union), missing), (False, ["C", "CD"]))
        self.expect(
            "LOWERSET_MEET",
            frozenset("C") in lowersets(meet([first, second])).label_sets(),
            True,
        )

    # --- spaces ---------------------------------------------------------------

    def check_induced_counts(self) -> None:
        family = InputFamily.uniform("ABC", 2)
        orders = {
            "total": Preorder.total("A", "B", "C"),
            "wedge": Preorder.wedge("A", "B", "C"),
            "fork": Preorder.fork("A", "B", "C"),
            "total_point": join([Preorder.total("A", "B"), Preorder.discrete("C")]),
            "discrete": Preorder.discrete("ABC"),
        }
        counts = {name: len(induce(order, family)) for name, order in orders.items()}
        counts["discrete_ext"] = len(discrete_space(family).ext)
        self.expect(
            "INDUCED_COUNTS",
            counts,
            {"total": 14, "wedge": 12, "fork": 10, "total_point": 8, "discrete": 6, "discrete_ext": 26},
        )

    def check_completions(self) -> None:
        family = InputFamily.uniform("ABC", 2)
        space = induce(Preorder.total("A", {"B", "C"}), family)
        completions = causal_completions(space)
        switches = set(switch_spaces(family))
        induced = sum(1 for c in completions if any(map(is_definite, inducing_orders(c))))
        switch_only = sum(1 for c in completions if c in switches and not inducing_orders(c))
        self.expect("COMPLETIONS", (len(completions), induced, switch_only), (4, 2, 2))

    def check_theta3(self) -> None:
        family = InputFamily.uniform("ABC", 2)
        left = induce(join([Preorder.total("A", "B"), Preorder.discrete("C")]), family)
        right = induce(join([Preorder.discrete("A"), Preorder.total("C", "B")]), family)
        theta = space_meet(left, right)
        self.expect("NON_TIGHT_MEET", (is_causally_complete(theta), is_tight(theta)), (True, False))

    def check_switch_counts(self) -> None:
        enumerated = [len(switch_spaces(InputFamily.uniform("ABCD"[:n], 2))) for n in range(1, 5)]
        closed = [count_switch_spaces(n, 2) for n in range(1, 5)]
        self.expect("SWITCH_COUNTS", (enumerated, closed), ([1, 2, 12, 576], [1, 2, 12, 576]))

    # --- classification -------------------------------------------------------

    def check_small_enumeration(self) -> None:
        counts = []
        for n in (1, 2):
            family = InputFamily.uniform("AB"[:n], 2)
            spaces = enumerate_cc_bruteforce(family)
            codes = list(enumerate_cc_dfs(family))
            counts.append((len(spaces), len(codes), spaces == expand_classes(family, codes)))
        self.expect("ENUMERATION_SMALL", counts, [(1, 1, True), (7, 3, True)])

        family = InputFamily.uniform("AB", 2)
        hierarchy = build_hierarchy(enumerate_cc_bruteforce(family))
        maxima = {hierarchy.spaces[i] for i in hierarchy.maxima}
        self.expect("CANOPY_2", maxima == set(switch_spaces(family)), True)

    def check_full_classification(self) -> None:
        family = InputFamily.uniform("ABC", 2)
        brute = enumerate_cc_bruteforce(family)
        codes = list(enumerate_cc_dfs(family))
        dfs = expand_classes(family, codes)
        self.expect("ENUMERATION_3", (len(brute), len(codes), brute == dfs), (2644, 102, True))

        hierarchy = build_hierarchy(brute)
        report = stats(hierarchy)
        self.expect(
            "STATS_3",
            (
                report.tight_classes,
                report.nontight_classes,
                report.no_fixed_definite_classes,
                report.order_induced_classes,
                report.maxima_spaces,
                report.maxima_classes,
            ),
            (44, 58, 13, 5, 12, 2),
        )
        self.expect(
            "ORBITS_3",
            (report.orbit_sizes.get(48), 24 in report.orbit_sizes, report.orbit_sizes.get(1)),
            (27, True, 1),
        )
        maxima = {hierarchy.spaces[i] for i in hierarchy.maxima}
        self.expect("CANOPY_3", maxima == set(switch_spaces(family)), True)

        disagreements = sum(
            1
            for s in brute
            if is_causally_complete(s, "tips") != is_causally_complete(s, "descent")
        )
        self.expect("COMPLETENESS_AGREEMENT", disagreements, 0)

        known = set(brute)
        pairs = [(self.rng.choice(brute), self.rng.choice(brute)) for _ in range(500)]
        outside = sum(1 for a, b in pairs if space_meet(a, b) not in known)
        self.expect("MEET_CLOSURE", outside, 0)

    def run(self) -> bool:
        print("🔬 causal spaces acceptance run" + (" (quick)" if self.quick else ""))
        self.guarded("PREORDER_COUNTS", self.check_preorder_counts)
        self.guarded("PREORDER_COUNT_5", self.check_preorder_count_5, exhaustive=True)
        self.guarded("DIAMOND_SUBORDERS", self.check_diamond)
        self.guarded("LOWERSETS", self.check_lowersets)
        self.guarded("INDUCED_COUNTS", self.check_induced_counts)
        self.guarded("COMPLETIONS", self.check_completions)
        self.guarded("NON_TIGHT_MEET", self.check_theta3)
        self.guarded("SWITCH_COUNTS", self.check_switch_counts)
        self.guarded("ENUMERATION_SMALL", self.check_small_enumeration)
        self.guarded("CLASSIFICATION_3", self.check_full_classification, exhaustive=True)

        passed = sum(1 for r in self.results if r.status == CheckStatus.PASS)
        failed = sum(1 for r in self.results if r.status == CheckStatus.FAIL)
        print(f"\n📊 {passed} passed, {failed} failed, {len(self.results) - passed - failed} skipped")
        return failed == 0
