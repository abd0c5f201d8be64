"""
End-to-end enumeration and classification of causally complete spaces.

The three-event runs take a while and are marked slow.
"""
import random

import pytest

from causalspaces.core.errors import CausalError
from causalspaces.core.pfun import InputFamily
from causalspaces.core.space import (
    discrete_space,
    is_causally_complete,
    is_tight,
    space_meet,
    switch_spaces,
)
from causalspaces.core.symmetry import symmetry_group
from causalspaces.services.classify import (
    build_hierarchy,
    class_table,
    enumerate_cc_bruteforce,
    enumerate_cc_dfs,
    expand_classes,
    landmark_classes,
    stats,
)


def canonical_set(spaces):
    group = symmetry_group(spaces[0].family)
    return {group.canonical_codes(s.codes) for s in spaces}


class TestSmallFamilies:
    def test_single_event(self):
        family = InputFamily.uniform("A", 2)
        spaces = enumerate_cc_bruteforce(family)
        assert spaces == [discrete_space(family)]
        assert list(enumerate_cc_dfs(family)) == [canonical_set(spaces).pop()]

    def test_two_events(self, binary2, complete_spaces_2):
        assert len(complete_spaces_2) == 7
        codes = list(enumerate_cc_dfs(binary2))
        assert len(codes) == 3
        assert set(codes) == canonical_set(complete_spaces_2)
        assert expand_classes(binary2, codes) == complete_spaces_2

    def test_mixed_sizes_agree(self):
        family = InputFamily.from_mapping({"A": [0, 1, 2], "B": [0, 1]})
        spaces = enumerate_cc_bruteforce(family)
        assert all(is_causally_complete(s) for s in spaces)
        codes = list(enumerate_cc_dfs(family))
        assert set(codes) == canonical_set(spaces)
        assert expand_classes(family, codes) == spaces

    def test_bruteforce_guard(self):
        with pytest.raises(CausalError) as exc:
            enumerate_cc_bruteforce(InputFamily.uniform("ABCD", 2))
        assert exc.value.code == "SIZE_GUARD"

    def test_parallel_stream_matches_serial(self, binary2):
        serial = list(enumerate_cc_dfs(binary2, jobs=1))
        assert list(enumerate_cc_dfs(binary2, jobs=2)) == serial

    def test_bad_jobs(self, binary2):
        with pytest.raises(CausalError) as exc:
            list(enumerate_cc_dfs(binary2, jobs=0))
        assert exc.value.code == "BAD_ARGUMENT"


class TestTwoEventHierarchy:
    def test_layers(self, complete_spaces_2):
        hierarchy = build_hierarchy(complete_spaces_2)
        graph = hierarchy.graph
        bottom = [n for n in graph if graph.in_degree(n) == 0]
        assert [hierarchy.spaces[n] for n in bottom] == [discrete_space(complete_spaces_2[0].family)]
        assert len(hierarchy.maxima) == 2
        assert {hierarchy.spaces[n] for n in hierarchy.maxima} == set(
            switch_spaces(complete_spaces_2[0].family)
        )
        middle = [n for n in graph if n not in bottom and n not in hierarchy.maxima]
        assert len(middle) == 4
        for n in middle:
            assert list(graph.predecessors(n)) == bottom
            assert len(list(graph.successors(n))) == 1
            assert next(graph.successors(n)) in hierarchy.maxima
        assert len(hierarchy.classes[hierarchy.class_of[middle[0]]]) == 4

    def test_classes(self, complete_spaces_2):
        hierarchy = build_hierarchy(complete_spaces_2)
        assert len(hierarchy.classes) == 3
        assert sum(hierarchy.class_sizes()) == 7
        assert hierarchy.class_codes == sorted(hierarchy.class_codes)
        table = class_table(hierarchy)
        assert table["maximal"].sum() == 1

    def test_landmarks(self, complete_spaces_2):
        found = landmark_classes(build_hierarchy(complete_spaces_2))
        assert set(found) == {"discrete", "total"}
        assert found["discrete"] != found["total"]

    def test_rejects_bad_input(self, complete_spaces_2):
        with pytest.raises(CausalError):
            build_hierarchy([])
        with pytest.raises(CausalError):
            build_hierarchy([complete_spaces_2[0], complete_spaces_2[0]])


@pytest.mark.slow
class TestThreeEvents:
    def test_enumeration(self, binary3, complete_spaces_3):
        assert len(complete_spaces_3) == 2644
        codes = list(enumerate_cc_dfs(binary3))
        assert len(codes) == 102
        assert set(codes) == canonical_set(complete_spaces_3)
        assert expand_classes(binary3, codes) == complete_spaces_3

    def test_stats(self, hierarchy_3):
        report = stats(hierarchy_3)
        assert report.spaces == 2644
        assert report.classes == 102
        assert report.tight_classes == 44
        assert report.nontight_classes == 58
        assert report.no_fixed_definite_classes == 13
        assert report.order_induced_classes == 5
        assert report.maxima_classes == 2
        assert report.maxima_spaces == 12

    def test_orbit_sizes(self, hierarchy_3):
        sizes = stats(hierarchy_3).orbit_sizes
        assert sizes[48] == 27
        assert sizes[1] == 1
        assert 24 in sizes
        assert all(48 % size == 0 for size in sizes)
        assert sum(size * count for size, count in sizes.items()) == 2644

    def test_canopy_is_switch_spaces(self, hierarchy_3, binary3):
        maxima = {hierarchy_3.spaces[n] for n in hierarchy_3.maxima}
        assert maxima == set(switch_spaces(binary3))

    def test_landmarks(self, hierarchy_3):
        found = landmark_classes(hierarchy_3)
        assert set(found) == {"discrete", "total", "fork", "wedge", "total_point", "switch"}
        assert len(set(found.values())) == 6
        maximal = {hierarchy_3.class_of[n] for n in hierarchy_3.maxima}
        assert {found["total"], found["switch"]} == maximal

    def test_completeness_methods_and_tightness_modes_agree(self, complete_spaces_3):
        for space in complete_spaces_3:
            assert is_causally_complete(space, "tips")
            assert is_causally_complete(space, "descent")
            assert is_tight(space, "all") == is_tight(space, "maximal")

    def test_meet_closure(self, complete_spaces_3):
        known = set(complete_spaces_3)
        rng = random.Random(0)
        for _ in range(500):
            a, b = rng.choice(complete_spaces_3), rng.choice(complete_spaces_3)
            assert space_meet(a, b) in known

    def test_quotient_covers(self, complete_spaces_3, hierarchy_3):
        quotient = build_hierarchy(complete_spaces_3, quotient_covers=True)
        assert quotient.class_edges == hierarchy_3.quotient_edges
        assert quotient.class_edges <= hierarchy_3.class_edges
