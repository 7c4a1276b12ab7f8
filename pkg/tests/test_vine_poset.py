"""Classification and structural operations on graded posets."""

import random
from itertools import chain, combinations

import pytest

from matvines import (PosetInputError, VineClass, VinePoset, build_standard,
                      c_vine, classify, classify_via_principal_ideals,
                      complete_union, cond_sets, count_ideals, d_vine,
                      find_sampling_order, from_forest_sequence, hat,
                      is_sampling_order, iter_ideals, join_and_paths,
                      marginalize, poset_isomorphism, psi, root_poset_a,
                      to_forest_sequence, truncate, union_of)
from matvines.vine_poset import structurally_equal
from conftest import five_vertex_graph


def brute_force_ideal_count(p, mode):
    """Powerset oracle for ideal counting."""
    nodes = list(p.nodes)
    total = 0
    for r in range(len(nodes) + 1):
        for subset in combinations(nodes, r):
            chosen = set(subset)
            if not all(set(p.covers_of[v]) <= chosen for v in chosen):
                continue
            # downward closure under covers implies closure under <=
            if mode == "full_support" and not set(p.minimals) <= chosen:
                continue
            total += 1
    return total


def brute_force_join(p, x, y):
    uppers = [v for v in p.nodes if p.leq(x, v) and p.leq(y, v)]
    least = [u for u in uppers if all(p.leq(u, w) for w in uppers)]
    return least[0] if least else None


class TestClassify:
    def test_d_vine_is_regular(self):
        c = classify(d_vine(4))
        assert c.kind == VineClass.R_VINE

    def test_two_isolated_minimals_are_locally_regular_only(self):
        p = VinePoset.build([("1", 1, []), ("2", 1, [])])
        assert classify(p).kind == VineClass.LR_VINE

    def test_triple_cover_is_not_a_vine(self):
        p = VinePoset.build([("1", 1, []), ("2", 1, []), ("3", 1, []),
                             ("top", 2, ["1", "2", "3"])])
        c = classify(p)
        assert c.kind == VineClass.NOT_VINE
        assert c.witness.subject == ("top",)

    def test_bad_rank_is_not_graded(self):
        p = VinePoset.build([("1", 2, [])])
        assert classify(p).kind == VineClass.NOT_GRADED

    def test_rank_jump_is_not_graded(self):
        p = VinePoset.build([("1", 1, []), ("2", 1, []), ("top", 3, ["1", "2"])])
        assert classify(p).kind == VineClass.NOT_GRADED

    def test_proximity_failure_is_vine_only(self):
        # two rank-2 nodes over disjoint minimal pairs, covered by a common node
        p = VinePoset.build([
            ("1", 1, []), ("2", 1, []), ("3", 1, []), ("4", 1, []),
            ("a", 2, ["1", "2"]), ("b", 2, ["3", "4"]),
            ("top", 3, ["a", "b"])])
        c = classify(p)
        assert c.kind == VineClass.VINE
        assert c.witness.tag == "Proximity"

    def test_level_cycle_is_not_a_vine(self):
        p = VinePoset.build([
            ("1", 1, []), ("2", 1, []), ("3", 1, []),
            ("a", 2, ["1", "2"]), ("b", 2, ["2", "3"]), ("c", 2, ["1", "3"]),
            ("x", 3, ["a", "b"]), ("y", 3, ["b", "c"]), ("z", 3, ["a", "c"])])
        assert classify(p).kind == VineClass.NOT_VINE

    def test_empty_poset_is_vacuously_regular(self):
        assert classify(VinePoset.build([])).kind == VineClass.R_VINE

    def test_cross_classifier_agreement_on_fixtures(self):
        fixtures = [d_vine(4), c_vine(4), truncate(c_vine(4), 3, "lower"),
                    psi(five_vertex_graph()), VinePoset.build([]),
                    VinePoset.build([("1", 1, []), ("2", 1, [])])]
        for p in fixtures:
            assert classify(p).kind == classify_via_principal_ideals(p).kind


class TestForestSequence:
    def test_single_tree_round_trip(self):
        f = to_forest_sequence(d_vine(2))
        assert f.elements == ("1", "2")
        assert f.forests == ((frozenset({"1", "2"}),),)
        back = from_forest_sequence(f)
        assert classify(back).kind == VineClass.R_VINE
        assert to_forest_sequence(back) == f

    def test_isolated_element(self):
        p = VinePoset.build([("1", 1, [])])
        f = to_forest_sequence(p)
        assert f.forests == ()
        assert from_forest_sequence(f).nodes == ("1",)

    def test_d_vine_round_trip_up_to_renaming(self):
        for dim in range(1, 6):
            p = d_vine(dim)
            f = to_forest_sequence(p)
            back = from_forest_sequence(f)
            assert poset_isomorphism(back, p) is not None
            assert to_forest_sequence(back) == f

    def test_membership_violation_rejected(self):
        from matvines import ForestSequence
        bad = ForestSequence(("1", "2"), ((frozenset({"1", "3"}),),))
        with pytest.raises(PosetInputError):
            from_forest_sequence(bad)


class TestUnionsAndCondSets:
    def test_top_of_d_vine(self):
        p = d_vine(4)
        assert union_of(p, "14|23", 3) == frozenset(["1", "2", "3", "4"])
        conditioned, conditioning = cond_sets(p, "14|23")
        assert conditioned == frozenset(["1", "4"])
        assert conditioning == frozenset(["2", "3"])

    def test_minimal_node_zero_fold(self):
        p = d_vine(3)
        assert union_of(p, "2", 0) == frozenset(["2"])

    def test_five_vertex_conditioned_pair(self):
        p = psi(five_vertex_graph())
        node = next(v for v in p.nodes
                    if p.covers_of[v]
                    and cond_sets(p, v)[0] == frozenset(["v1", "v3"]))
        assert complete_union(p, node) == frozenset(["v1", "v3", "v4"])

    def test_c_vine_rank3_node(self):
        p = c_vine(4)
        conditioned, conditioning = cond_sets(p, "23|1")
        assert conditioned == frozenset(["2", "3"])
        assert conditioning == frozenset(["1"])

    def test_rank2_nodes_have_empty_conditioning(self):
        p = d_vine(4)
        conditioned, conditioning = cond_sets(p, "12")
        assert conditioned == frozenset(["1", "2"])
        assert conditioning == frozenset()

    def test_minimal_rejected(self):
        with pytest.raises(PosetInputError):
            cond_sets(d_vine(3), "1")

    def test_out_of_range_fold(self):
        with pytest.raises(PosetInputError):
            union_of(d_vine(3), "12", 2)

    def test_size_laws_on_locally_regular_vines(self):
        for p in (d_vine(5), c_vine(5), truncate(c_vine(5), 3, "lower"),
                  psi(five_vertex_graph())):
            for v in p.nodes:
                r = p.rank_of[v]
                for k in range(r):
                    assert len(union_of(p, v, k)) == k + 1
                if p.covers_of[v]:
                    conditioned, conditioning = cond_sets(p, v)
                    assert len(conditioned) == 2
                    assert len(conditioning) == r - 2

    def test_distinct_conditioned_sets(self):
        for p in (d_vine(5), c_vine(5), psi(five_vertex_graph())):
            seen = set()
            for v in p.nodes:
                if p.covers_of[v]:
                    key = cond_sets(p, v)[0]
                    assert key not in seen
                    seen.add(key)

    def test_union_inclusion_implies_order(self):
        for p in (d_vine(4), c_vine(4), psi(five_vertex_graph())):
            for a in p.nodes:
                for b in p.nodes:
                    if complete_union(p, a) <= complete_union(p, b):
                        assert p.leq(a, b)


class TestJoinAndPaths:
    def test_d_vine_tower(self):
        result = join_and_paths(d_vine(4), "1", "4")
        assert result.join == "14|23"
        assert result.paths == (("1", "2", "3", "4"), ("12", "23", "34"),
                                ("13|2", "24|3"), ("14|23",))

    def test_adjacent_minimals(self):
        result = join_and_paths(d_vine(4), "2", "3")
        assert result.join == "23"
        assert result.paths == (("2", "3"), ("23",))

    def test_disconnected_minimals(self):
        p = VinePoset.build([("1", 1, []), ("2", 1, [])])
        assert join_and_paths(p, "1", "2") is None

    def test_missing_join_in_truncation(self):
        p = truncate(d_vine(4), 3, "lower")
        assert join_and_paths(p, "1", "4") is None

    def test_agrees_with_brute_force(self):
        rng = random.Random(3)
        posets = [d_vine(5), c_vine(5), truncate(c_vine(5), 3, "lower"),
                  psi(five_vertex_graph())]
        for p in posets:
            for i, j in combinations(p.minimals, 2):
                by_paths = join_and_paths(p, i, j)
                by_bounds = brute_force_join(p, i, j)
                if by_bounds is None:
                    assert by_paths is None
                else:
                    assert by_paths is not None
                    assert by_paths.join == by_bounds
                    conditioned, _ = cond_sets(p, by_bounds)
                    assert conditioned == frozenset([i, j])

    def test_non_minimal_rejected(self):
        with pytest.raises(PosetInputError):
            join_and_paths(d_vine(3), "12", "3")


class TestTruncate:
    def test_lower_truncation_keeps_ranks(self):
        p = truncate(d_vine(4), 2, "lower")
        assert set(p.nodes) == {"1", "2", "3", "4", "12", "23", "34"}
        assert classify(p).kind == VineClass.LR_VINE

    def test_full_lower_truncation_is_identity(self):
        p = d_vine(4)
        assert structurally_equal(truncate(p, 4, "lower"), p)

    def test_upper_truncation_of_d_vine_is_regular(self):
        p = truncate(d_vine(4), 2, "upper")
        c = classify(p)
        assert c.kind == VineClass.R_VINE
        assert p.rank == 3
        assert p.dimension == 3

    def test_upper_truncation_shifts_ranks(self):
        p = truncate(d_vine(4), 3, "upper")
        assert {p.rank_of[v] for v in p.nodes} == {1, 2}
        assert set(p.minimals) == {"13|2", "24|3"}

    def test_lower_truncations_of_locally_regular_vines_stay_lr(self):
        base = psi(five_vertex_graph())
        for k in range(1, base.rank + 1):
            assert classify(truncate(base, k, "lower")).kind >= VineClass.LR_VINE

    def test_upper_truncations_of_regular_vines_stay_regular(self):
        for k in range(1, 6):
            assert classify(truncate(d_vine(5), k, "upper")).kind == VineClass.R_VINE

    def test_out_of_range(self):
        with pytest.raises(PosetInputError):
            truncate(d_vine(3), 4, "lower")
        with pytest.raises(PosetInputError):
            truncate(d_vine(3), 1, "sideways")


class TestMarginalize:
    def test_c_vine_loses_gradedness(self):
        q, graded = marginalize(c_vine(4), "2")
        assert not graded
        assert "34|12" in q.nodes

    def test_d_vine_stays_regular(self):
        q, graded = marginalize(d_vine(4), "4")
        assert graded
        assert classify(q).kind == VineClass.R_VINE
        assert poset_isomorphism(q, d_vine(3)) is not None

    def test_single_node_vine(self):
        q, graded = marginalize(d_vine(1), "1")
        assert graded
        assert q.nodes == ()

    def test_non_minimal_rejected(self):
        with pytest.raises(PosetInputError):
            marginalize(d_vine(3), "12")


class TestSamplingOrders:
    def test_truncated_c_vine_accepts_the_known_order(self):
        p = truncate(c_vine(4), 3, "lower")
        assert is_sampling_order(p, ("1", "3", "4", "2")).ok

    def test_truncated_c_vine_rejects_a_bad_order(self):
        p = truncate(c_vine(4), 3, "lower")
        # removing 1 first strands the rank-3 nodes above missing supports
        verdict = is_sampling_order(p, ("2", "3", "4", "1"))
        assert not verdict.ok

    def test_single_node(self):
        assert is_sampling_order(d_vine(1), ("1",)).ok

    def test_find_always_succeeds_on_lr_vines(self):
        rng = random.Random(9)
        posets = [d_vine(4), c_vine(5), truncate(c_vine(4), 3, "lower"),
                  psi(five_vertex_graph())]
        for p in posets:
            order = find_sampling_order(p)
            assert order is not None
            assert is_sampling_order(p, order).ok

    def test_non_permutation_rejected(self):
        with pytest.raises(PosetInputError):
            is_sampling_order(d_vine(3), ("1", "2"))


class TestIdeals:
    def test_d_vine3_all(self):
        assert count_ideals(d_vine(3), "all") == 14

    def test_chain_of_three(self):
        chain3 = VinePoset.build([("a", 1, []), ("b", 2, ["a"]), ("c", 3, ["b"])])
        assert count_ideals(chain3, "all") == 4

    def test_c_vine3_both_modes(self):
        p = c_vine(3)
        assert count_ideals(p, "full_support") == 5
        assert count_ideals(p, "all") == 14

    def test_matches_brute_force(self):
        for p in (d_vine(3), c_vine(3), truncate(c_vine(4), 3, "lower"),
                  VinePoset.build([("1", 1, []), ("2", 1, [])])):
            for mode in ("all", "full_support"):
                assert count_ideals(p, mode) == brute_force_ideal_count(p, mode)

    def test_stream_is_sorted_and_consistent(self):
        p = c_vine(3)
        order = sorted(p.nodes, key=lambda v: (p.rank_of[v], (len(v), v)))
        ideals = list(iter_ideals(p, "all"))
        assert len(ideals) == count_ideals(p, "all")
        assert ideals[0] == ()
        assert len(set(ideals)) == len(ideals)
        vectors = [tuple(int(v in set(ideal)) for v in order) for ideal in ideals]
        assert vectors == sorted(vectors)
        for ideal in ideals:
            chosen = set(ideal)
            assert all(set(p.covers_of[v]) <= chosen for v in chosen)

    def test_every_ideal_of_an_lr_vine_is_lr(self):
        p = d_vine(4)
        for ideal in iter_ideals(p, "all"):
            sub = VinePoset.build(
                [(v, p.rank_of[v], p.covers_of[v]) for v in ideal])
            assert classify(sub).kind >= VineClass.LR_VINE

    def test_principal_ideals_of_lr_vines_are_regular(self):
        p = psi(five_vertex_graph())
        for v in p.nodes:
            sub = VinePoset.build(
                [(u, p.rank_of[u], p.covers_of[u]) for u in p.down_set(v)])
            assert classify(sub).kind == VineClass.R_VINE


class TestBuilders:
    def test_d_vine4_matches_figure(self):
        p = d_vine(4)
        assert set(p.nodes) == {"1", "2", "3", "4", "12", "23", "34",
                                "13|2", "24|3", "14|23"}
        assert set(p.covers_of["13|2"]) == {"12", "23"}
        assert set(p.covers_of["14|23"]) == {"13|2", "24|3"}

    def test_c_vine4_matches_figure(self):
        p = c_vine(4)
        assert set(p.nodes) == {"1", "2", "3", "4", "12", "13", "14",
                                "23|1", "24|1", "34|12"}
        assert set(p.covers_of["34|12"]) == {"23|1", "24|1"}

    def test_dimension_one_agreement(self):
        assert structurally_equal(c_vine(1), d_vine(1))
        assert d_vine(1).nodes == ("1",)

    def test_root_poset_is_isomorphic_to_the_path_vine(self):
        for dim in range(1, 6):
            iso = poset_isomorphism(root_poset_a(dim), d_vine(dim))
            assert iso is not None

    def test_root_poset_explicit_map(self):
        # the complete-union map realizes the isomorphism explicitly
        dim = 4
        p = d_vine(dim)
        r = root_poset_a(dim)
        mapping = {}
        for v in p.nodes:
            coords = sorted(int(x) for x in complete_union(p, v))
            mapping[v] = "a" + "+a".join(str(c) for c in coords)
        assert set(mapping.values()) == set(r.nodes)
        for a in p.nodes:
            for b in p.nodes:
                assert p.leq(a, b) == r.leq(mapping[a], mapping[b])

    def test_kind_dispatch_and_bounds(self):
        assert structurally_equal(build_standard("d_vine", 3), d_vine(3))
        with pytest.raises(PosetInputError):
            build_standard("d_vine", 0)
        with pytest.raises(PosetInputError):
            build_standard("mystery", 3)

    def test_regular_vine_level_sizes(self):
        for dim in range(1, 7):
            for p in (d_vine(dim), c_vine(dim)):
                assert len(p.nodes) == dim * (dim + 1) // 2
                for level in range(1, dim + 1):
                    assert len(p.levels[level]) == dim + 1 - level


class TestHat:
    def test_d_vine_nodes_are_their_unions(self):
        p = d_vine(4)
        assert structurally_equal(hat(p), p)

    def test_single_node(self):
        p = d_vine(1)
        assert hat(p).nodes == ("1",)

    def test_idempotent_up_to_isomorphism(self):
        p = psi(five_vertex_graph())
        h = hat(p)
        assert poset_isomorphism(hat(h), h) is not None
