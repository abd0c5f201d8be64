"""
Spaces of input histories: induction, hierarchy, composition, tips,
completeness, tightness and switch spaces.
"""
import random
from itertools import combinations

import pytest

from causalspaces.core.completions import causal_completions
from causalspaces.core.errors import CausalError
from causalspaces.core.pfun import InputFamily, PartialFunction
from causalspaces.core.preorder import Preorder, enumerate_preorders, includes, is_definite, join
from causalspaces.core.space import (
    HistorySpace,
    count_switch_spaces,
    count_switch_spaces_family,
    cond_sequential,
    discrete_space,
    ext_hist,
    extend,
    fixed_definite_orders,
    free_choice,
    indiscrete_space,
    induce,
    inducing_orders,
    is_causally_complete,
    is_join_closed,
    is_join_prime,
    is_tight,
    parallel,
    sequential,
    space_join,
    space_leq,
    space_meet,
    switch_spaces,
    tips,
)


def hist(order: Preorder, k: int = 2) -> HistorySpace:
    return induce(order, InputFamily.uniform(order.events, k))


def free_choice_spaces(family: InputFamily) -> list[HistorySpace]:
    """Every join-prime space over ``family`` that satisfies free choice."""
    universe = family.universe
    codes = list(universe.nonempty())
    spaces = []
    for size in range(1, len(codes) + 1):
        for subset in combinations(codes, size):
            if universe.prime(subset) == list(subset):
                space = HistorySpace(family, subset)
                if free_choice(space):
                    spaces.append(space)
    return spaces


class TestInduce:
    @pytest.mark.parametrize(
        "order, count",
        [
            (Preorder.total("A", "B", "C"), 14),
            (Preorder.wedge("A", "B", "C"), 12),
            (Preorder.fork("A", "B", "C"), 10),
            (join([Preorder.total("A", "B"), Preorder.discrete("C")]), 8),
            (Preorder.discrete("ABC"), 6),
        ],
    )
    def test_history_counts(self, binary3, order, count):
        assert len(induce(order, binary3)) == count

    def test_discrete_extended_space(self, binary3):
        space = discrete_space(binary3)
        assert len(space.ext) == 26
        assert len(extend(space).maximal) == 8

    def test_diamond_extended_space(self):
        assert len(hist(Preorder.diamond("A", "B", "C", "D")).ext) == 34

    def test_ext_hist_matches_closure(self, binary3):
        for order in enumerate_preorders("ABC"):
            assert ext_hist(order, binary3) == induce(order, binary3).ext

    def test_indiscrete_space_is_totals(self, binary3):
        assert len(indiscrete_space(binary3)) == 8

    def test_events_must_match(self, binary3):
        with pytest.raises(CausalError):
            induce(Preorder.total("A", "B"), binary3)

    def test_rejects_non_prime_histories(self, binary2):
        with pytest.raises(CausalError) as exc:
            HistorySpace.from_histories(binary2, [{"A": 0}, {"B": 0}, {"A": 0, "B": 0}])
        assert exc.value.code == "BAD_ARGUMENT"

    def test_prime_and_closed_predicates(self, binary2):
        a0, b0 = (PartialFunction.from_mapping(binary2, m) for m in ({"A": 0}, {"B": 0}))
        both = PartialFunction.from_mapping(binary2, {"A": 0, "B": 0})
        assert is_join_prime([a0, b0])
        assert not is_join_prime([a0, b0, both])
        assert is_join_closed([a0, b0, both])
        assert not is_join_closed([a0, b0])


class TestHierarchy:
    def test_free_choice(self, binary2):
        assert free_choice(discrete_space(binary2))
        partial = HistorySpace.from_histories(binary2, [{"A": 0}, {"B": 0}])
        assert not free_choice(partial)

    def test_free_choice_covers_every_event(self, binary2):
        only_a = HistorySpace.from_histories(binary2, [{"A": 0}, {"A": 1}])
        assert not free_choice(only_a)

    def test_leq_reverses_ext_inclusion(self, binary3):
        total = induce(Preorder.total("A", "B", "C"), binary3)
        discrete = discrete_space(binary3)
        assert space_leq(discrete, total)
        assert not space_leq(total, discrete)

    def test_join_and_meet(self, binary2):
        ab = hist(Preorder.total("A", "B"))
        ba = hist(Preorder.total("B", "A"))
        assert ba.family != binary2 and ba.family.same_as(binary2)
        assert space_join(ab, ba) == indiscrete_space(binary2)
        assert not is_causally_complete(space_join(ab, ba))
        assert space_meet(ab, ba) == discrete_space(binary2)
        assert space_meet(ba, ab).family == ba.family

    def test_join_needs_the_same_events(self, binary2):
        other = discrete_space(InputFamily.uniform("AC", 2))
        with pytest.raises(CausalError) as exc:
            space_join(discrete_space(binary2), other)
        assert exc.value.code == "FAMILY_MISMATCH"

    def test_lattice_bounds(self, complete_spaces_2):
        for a in complete_spaces_2:
            for b in complete_spaces_2:
                met, joined = space_meet(a, b), space_join(a, b)
                assert space_leq(met, a) and space_leq(met, b)
                assert space_leq(a, joined) and space_leq(b, joined)

    def test_meet_closure_of_complete_spaces(self, complete_spaces_2):
        known = set(complete_spaces_2)
        for a in complete_spaces_2:
            for b in complete_spaces_2:
                assert space_meet(a, b) in known

    def test_order_reflection(self, binary3):
        orders = enumerate_preorders("ABC")
        spaces = {o.encoding: induce(o, binary3) for o in orders}
        for a in orders:
            for b in orders:
                assert includes(a, b) == space_leq(spaces[a.encoding], spaces[b.encoding])

    def test_join_of_induced_spaces_is_induced_by_order_join(self, binary3):
        orders = enumerate_preorders("ABC")
        spaces = {o.encoding: induce(o, binary3) for o in orders}
        for a in orders:
            for b in orders:
                joined = space_join(spaces[a.encoding], spaces[b.encoding])
                assert joined == induce(join([a, b]), binary3)

    def test_tight_meet_criterion(self, binary3):
        orders = enumerate_preorders("ABC")
        spaces = {o.encoding: induce(o, binary3) for o in orders}
        for a in orders:
            for b in orders:
                nested = all(
                    a.cols[i] & ~b.cols[i] == 0 or b.cols[i] & ~a.cols[i] == 0
                    for i in range(a.n)
                )
                met = space_meet(spaces[a.encoding], spaces[b.encoding])
                assert is_tight(met) == nested, (str(a), str(b))


class TestComposition:
    def test_parallel_of_totals(self):
        left = hist(Preorder.total("A", "B"))
        right = hist(Preorder.total("C", "D"))
        composed = parallel(left, right)
        assert composed == hist(join([Preorder.total("A", "B"), Preorder.total("C", "D")]))

    def test_sequential_matches_order_composition(self):
        composed = sequential(hist(Preorder.discrete("AB")), hist(Preorder.discrete("C")))
        expected = hist(Preorder.from_relation("ABC", [("A", "C"), ("B", "C")]))
        assert composed == expected

    def test_sequential_with_empty_first(self, binary1):
        then = discrete_space(binary1)
        empty = HistorySpace.empty(InputFamily.uniform("", 2))
        assert sequential(empty, then) == then

    def test_parallel_needs_disjoint_events(self, binary2):
        with pytest.raises(CausalError) as exc:
            parallel(discrete_space(binary2), discrete_space(binary2))
        assert exc.value.code == "OVERLAPPING_EVENTS"

    def test_conditional_sequential_switch(self, binary1):
        head = discrete_space(binary1)
        tail_family = InputFamily.uniform("BC", 2)
        bc = induce(Preorder.total("B", "C"), tail_family)
        cb = induce(Preorder.total("C", "B"), tail_family)
        a0, a1 = (PartialFunction.decode(binary1, c) for c in head.codes)
        switch = cond_sequential(head, {a0: bc, a1: cb})
        assert is_causally_complete(switch)
        assert len(switch) == 2 + 2 * 6
        assert not inducing_orders(switch)

    def test_conditional_sequential_needs_every_key(self, binary1):
        head = discrete_space(binary1)
        a0 = PartialFunction.decode(binary1, head.codes[0])
        with pytest.raises(CausalError) as exc:
            cond_sequential(head, {a0: discrete_space(InputFamily.uniform("B", 2))})
        assert exc.value.code == "NOT_FOUND"

    @pytest.mark.slow
    def test_composition_preserves_choice_completeness_and_tightness(self, binary2):
        left = free_choice_spaces(binary2)
        right = free_choice_spaces(InputFamily.uniform("CD", 2))
        rng = random.Random(11)
        for _ in range(1000):
            a, b = rng.choice(left), rng.choice(right)
            complete = is_causally_complete(a) and is_causally_complete(b)
            tight = complete and is_tight(a) and is_tight(b)
            for composed in (parallel(a, b), sequential(a, b)):
                assert free_choice(composed)
                if complete:
                    assert is_causally_complete(composed)
                if tight:
                    assert is_tight(composed)

    def test_conditional_sequential_preserves_completeness_and_tightness(
        self, complete_spaces_2
    ):
        tail_family = InputFamily.uniform("CD", 2)
        tails = [HistorySpace(tail_family, s.codes) for s in complete_spaces_2]
        rng = random.Random(5)
        for _ in range(300):
            head = rng.choice(complete_spaces_2)
            keys = [PartialFunction.decode(head.family, k) for k in extend(head).maximal]
            composed = cond_sequential(head, {k: rng.choice(tails) for k in keys})
            assert free_choice(composed)
            assert is_causally_complete(composed)
            assert is_tight(composed)


class TestCompletionsOfCompositions:
    def test_parallel(self, binary2):
        left = indiscrete_space(binary2)
        right = discrete_space(InputFamily.uniform("C", 2))
        expected = {
            parallel(a, b) for a in causal_completions(left) for b in causal_completions(right)
        }
        assert set(causal_completions(parallel(left, right))) == expected
        assert len(expected) == 2

    def test_sequential(self, binary2):
        first = indiscrete_space(binary2)
        then = discrete_space(InputFamily.uniform("C", 2))
        expected = {
            sequential(a, b) for a in causal_completions(first) for b in causal_completions(then)
        }
        assert set(causal_completions(sequential(first, then))) == expected
        assert len(expected) == 2

    def test_conditional_sequential(self, binary1):
        head = discrete_space(binary1)
        tail_family = InputFamily.uniform("BC", 2)
        children = [
            induce(Preorder.indiscrete("BC"), tail_family),
            induce(Preorder.total("B", "C"), tail_family),
        ]
        keys = [PartialFunction.decode(binary1, c) for c in head.codes]
        composed = cond_sequential(head, dict(zip(keys, children)))
        expected = {
            cond_sequential(h, {keys[0]: x, keys[1]: y})
            for h in causal_completions(head)
            for x in causal_completions(children[0])
            for y in causal_completions(children[1])
        }
        assert set(causal_completions(composed)) == expected
        assert len(expected) == 2


class TestTipsAndCompleteness:
    def test_total_order_tips(self):
        space = hist(Preorder.total("A", "B"))
        report = tips(space)
        assert report.tip_of({"A": 0}) == "A"
        assert report.tip_of({"A": 1, "B": 0}) == "B"

    def test_indefinite_space_has_two_tips(self, indefinite_space):
        report = tips(indefinite_space)
        assert report.tips_of({"A": 0, "B": 0, "C": 1}) == {"B", "C"}
        assert free_choice(indefinite_space)
        assert not is_causally_complete(indefinite_space)

    def test_not_an_extended_history(self):
        with pytest.raises(CausalError) as exc:
            tips(hist(Preorder.total("A", "B"))).tips_of({"B": 0})
        assert exc.value.code == "NOT_FOUND"

    def test_order_induced_completeness(self, binary3):
        for order in enumerate_preorders("ABC"):
            assert is_causally_complete(induce(order, binary3)) == is_definite(order)

    def test_methods_agree(self, complete_spaces_2, indefinite_space):
        for space in [*complete_spaces_2, indefinite_space]:
            assert is_causally_complete(space, "tips") == is_causally_complete(space, "descent")

    def test_non_free_choice_is_not_complete(self, binary2):
        partial = HistorySpace.from_histories(binary2, [{"A": 0}, {"B": 0}])
        assert not is_causally_complete(partial)


class TestTightness:
    def test_order_induced_spaces_are_tight(self, binary3):
        for order in enumerate_preorders("ABC"):
            if is_definite(order):
                assert is_tight(induce(order, binary3))

    def test_theta3(self, theta3):
        assert is_causally_complete(theta3)
        assert not is_tight(theta3)

    def test_fixed_definite_orders(self, theta3):
        assert fixed_definite_orders(theta3)
        total = induce(Preorder.total("A", "B", "C"), theta3.family)
        assert Preorder.total("A", "B", "C").encoding in {
            o.encoding for o in fixed_definite_orders(total)
        }
        assert [o.encoding for o in inducing_orders(total)] == [
            Preorder.total("A", "B", "C").encoding
        ]


class TestSwitchSpaces:
    @pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 2), (3, 12), (4, 576)])
    def test_closed_form(self, n, count):
        assert count_switch_spaces(n, 2) == count

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_enumeration_matches_count(self, n):
        family = InputFamily.uniform("ABC"[:n], 2)
        spaces = switch_spaces(family)
        assert len(spaces) == count_switch_spaces(n, 2)
        assert all(is_causally_complete(s) for s in spaces)
        assert all(s.universe.is_closed(s.ext) and set(s.ext) == set(s.codes) for s in spaces)

    @pytest.mark.slow
    def test_four_events(self):
        assert len(switch_spaces(InputFamily.uniform("ABCD", 2))) == 576

    def test_mixed_input_sizes(self):
        family = InputFamily.from_mapping({"A": [0, 1, 2], "B": [0, 1]})
        assert count_switch_spaces_family(family) == len(switch_spaces(family)) == 2
        family = InputFamily.from_mapping({"A": [0, 1, 2], "B": [0, 1], "C": [0]})
        assert count_switch_spaces_family(family) == len(switch_spaces(family))

    def test_count_rejects_bad_arguments(self):
        with pytest.raises(CausalError):
            count_switch_spaces(2, 0)
