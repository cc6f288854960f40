from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jmg.errors import InputError
from jmg.graphs import parse_graph
from jmg.linalg import RationalMatrix, commutator, is_projection, numerical_rank
from jmg.realize import (
    METHOD_RANK_ONE_RESTRICTED,
    Realization,
    enumerate_partitions,
    extend_outcomes,
    fork_obstruction,
    lift_to_pvms,
    lower_bound_graph,
    make_faithful,
    pvm_realization_from_json_obj,
    pvm_realization_to_json_obj,
    rank_one_gram,
    realization_from_json_obj,
    realization_to_json_obj,
    realize_direct_sum,
    realize_rank_one,
    restrict_to_span,
    verify_realization,
)

from helpers import all_graphs, bell_numbers_by_triangle, graph_from_mask

FORK = parse_graph("3; 0-1, 0-2")
TRIANGLE = parse_graph("3; 0-1, 0-2, 1-2")
HALF = Fraction(1, 2)


def graphs_strategy(max_n=6):
    return st.integers(0, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    ).map(lambda t: graph_from_mask(*t))


class TestDirectSum:
    def test_two_vertex_edgeless(self):
        r = realize_direct_sum(parse_graph("2;"))
        assert r.space_dim == 2
        assert r.projections[0] == RationalMatrix.from_rows([[1, 0], [0, 0]])
        assert r.projections[1] == RationalMatrix.from_rows([[HALF, HALF], [HALF, HALF]])
        assert not commutator(r.projections[0], r.projections[1]).is_zero()

    def test_fork(self):
        r = realize_direct_sum(FORK)
        assert r.space_dim == 2
        assert r.projections[0].is_zero()
        assert verify_realization(FORK, r).passed

    def test_triangle_degenerate(self):
        r = realize_direct_sum(TRIANGLE)
        assert r.space_dim == 1
        assert all(p.is_zero() for p in r.projections.values())
        assert verify_realization(TRIANGLE, r).passed

    @settings(max_examples=80, deadline=None)
    @given(graphs_strategy())
    def test_dimension_and_pattern(self, g):
        r = realize_direct_sum(g)
        n_missing = g.vertex_count * (g.vertex_count - 1) // 2 - len(g.edges)
        assert r.space_dim == max(1, 2 * n_missing)
        assert all(is_projection(p) for p in r.projections.values())
        assert verify_realization(g, r).passed


class TestRankOne:
    def test_fork_vectors_and_inner_products(self):
        r = realize_rank_one(FORK)
        assert r.space_dim == 4
        vec = r.vectors
        assert vec[0] == (1, 0, 0, 0)
        assert vec[1] == (0, 1, 0, 1)
        assert vec[2] == (0, 0, 1, 1)
        dot = lambda u, v: sum(a * b for a, b in zip(u, v))
        assert dot(vec[1], vec[2]) == 1
        assert dot(vec[0], vec[1]) == 0
        assert verify_realization(FORK, r).passed

    def test_triangle_standard_basis(self):
        r = realize_rank_one(TRIANGLE)
        assert r.space_dim == 3
        assert verify_realization(TRIANGLE, r).passed
        assert all(
            commutator(r.projections[x], r.projections[y]).is_zero()
            for x in range(3)
            for y in range(3)
        )

    def test_edgeless_pair_neither_commutes_nor_coincides(self):
        g = parse_graph("2;")
        r = realize_rank_one(g)
        assert r.space_dim == 3
        dot = sum(a * b for a, b in zip(r.vectors[0], r.vectors[1]))
        norms = [sum(c * c for c in r.vectors[x]) for x in (0, 1)]
        assert dot == 1 and norms == [2, 2]  # strict Cauchy-Schwarz: not parallel
        assert r.projections[0] != r.projections[1]
        assert not commutator(r.projections[0], r.projections[1]).is_zero()

    @settings(max_examples=60, deadline=None)
    @given(graphs_strategy())
    def test_inner_product_dichotomy(self, g):
        r = realize_rank_one(g)
        n = g.vertex_count
        assert r.space_dim == n + (n * (n - 1) // 2 - len(g.edges))
        for x in range(n):
            for y in range(x + 1, n):
                dot = sum(a * b for a, b in zip(r.vectors[x], r.vectors[y]))
                assert dot == (0 if g.adjacent(x, y) else 1)


class TestRestrictToSpan:
    def test_fork(self):
        rr = restrict_to_span(realize_rank_one(FORK))
        assert rr.space_dim == 3
        assert rr.method == METHOD_RANK_ONE_RESTRICTED
        assert verify_realization(FORK, rr).passed

    def test_triangle(self):
        rr = restrict_to_span(realize_rank_one(TRIANGLE))
        assert rr.space_dim == 3
        for p in rr.projections.values():
            assert np.linalg.norm(p @ p - p) < 1e-9

    def test_edgeless_three(self):
        g = parse_graph("3;")
        r = realize_rank_one(g)
        assert r.space_dim == 6
        gram = rank_one_gram(r)
        assert gram == RationalMatrix.from_rows([[3, 1, 1], [1, 3, 1], [1, 1, 3]])
        assert numerical_rank(gram) == 3
        rr = restrict_to_span(r)
        assert rr.space_dim == 3
        assert verify_realization(g, rr).passed

    def test_requires_vectors(self):
        r = realize_direct_sum(FORK)
        with pytest.raises(InputError):
            restrict_to_span(r)

    @settings(max_examples=40, deadline=None)
    @given(graphs_strategy())
    def test_dimension_bound_and_pattern(self, g):
        rr = restrict_to_span(realize_rank_one(g))
        assert rr.space_dim <= g.vertex_count
        assert verify_realization(g, rr).passed


class TestMakeFaithful:
    def test_triangle_direct_sum_becomes_distinct(self):
        base = realize_direct_sum(TRIANGLE)
        assert base.projections[0] == base.projections[1]  # all zero, indistinct
        f = make_faithful(base)
        assert f.space_dim == 4
        ps = [f.projections[x] for x in range(3)]
        assert ps[0] != ps[1] and ps[0] != ps[2] and ps[1] != ps[2]
        assert verify_realization(TRIANGLE, f).passed

    def test_fork_direct_sum(self):
        f = make_faithful(realize_direct_sum(FORK))
        assert f.space_dim == 5
        assert f.projections[0] != f.projections[1]
        assert verify_realization(FORK, f).passed

    def test_rejects_float_regime(self):
        rr = restrict_to_span(realize_rank_one(FORK))
        with pytest.raises(InputError):
            make_faithful(rr)

    @settings(max_examples=40, deadline=None)
    @given(graphs_strategy())
    def test_pattern_preserved(self, g):
        base = realize_rank_one(g)
        f = make_faithful(base)
        assert f.space_dim == base.space_dim + g.vertex_count
        assert all(is_projection(p) for p in f.projections.values())
        assert verify_realization(g, f).passed

    def test_failing_base_still_fails(self):
        # verification verdicts survive the augmentation in both directions
        r = realize_direct_sum(FORK)
        pin = RationalMatrix.from_rows([[1, 0], [0, 0]])
        broken = Realization(FORK, 2, r.method, {0: r.projections[0], 1: pin, 2: pin})
        assert not verify_realization(FORK, broken).passed
        assert not verify_realization(FORK, make_faithful(broken)).passed


class TestLiftToPvms:
    def test_fork_blocks(self):
        pv = lift_to_pvms(realize_direct_sum(FORK))
        p_y = pv.pvms[1]
        p_z = pv.pvms[2]
        assert p_y[0] == RationalMatrix.from_rows([[1, 0], [0, 0]])
        assert p_y[1] == RationalMatrix.from_rows([[0, 0], [0, 1]])
        assert p_z[0] == RationalMatrix.from_rows([[HALF, HALF], [HALF, HALF]])
        assert p_z[1] == RationalMatrix.from_rows([[HALF, -HALF], [-HALF, HALF]])
        assert not commutator(p_y[0], p_z[0]).is_zero()
        assert verify_realization(FORK, pv).passed

    def test_elements_sum_and_orthogonality(self):
        pv = lift_to_pvms(realize_rank_one(FORK))
        pv.validate_exact()

    def test_triangle_all_compatible(self):
        pv = lift_to_pvms(realize_direct_sum(TRIANGLE))
        assert verify_realization(TRIANGLE, pv).passed

    @settings(max_examples=30, deadline=None)
    @given(graphs_strategy(5))
    def test_pattern_matches_base(self, g):
        pv = lift_to_pvms(realize_direct_sum(g))
        pv.validate_exact()
        assert verify_realization(g, pv).passed


class TestExtendOutcomes:
    def test_fork_three_outcomes(self):
        pv = extend_outcomes(realize_direct_sum(FORK), {0: 3, 1: 3, 2: 3})
        assert pv.space_dim == 5
        assert all(len(pv.pvms[x]) == 3 for x in range(3))
        pv.validate_exact()
        assert verify_realization(FORK, pv).passed

    def test_all_twos_match_lift(self):
        base = realize_direct_sum(FORK)
        a = extend_outcomes(base, {x: 2 for x in range(3)})
        b = lift_to_pvms(base)
        assert a.space_dim == b.space_dim
        assert all(a.pvms[x] == b.pvms[x] for x in range(3))

    def test_single_vertex_four_outcomes(self):
        g = parse_graph("1;")
        pv = extend_outcomes(realize_direct_sum(g), {0: 4})
        assert pv.space_dim == 3
        elements = pv.pvms[0]
        assert len(elements) == 4
        assert elements[0].is_zero()
        assert elements[1] == RationalMatrix.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
        assert elements[2] == RationalMatrix.from_rows([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
        assert elements[3] == RationalMatrix.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
        pv.validate_exact()

    def test_rejects_small_count(self):
        with pytest.raises(InputError, match="< 2"):
            extend_outcomes(realize_direct_sum(FORK), {0: 1, 1: 2, 2: 2})

    def test_rejects_missing_vertex(self):
        with pytest.raises(InputError, match="missing"):
            extend_outcomes(realize_direct_sum(FORK), {0: 2, 1: 2})

    @settings(max_examples=20, deadline=None)
    @given(graphs_strategy(4), st.integers(0, 3**4 - 1))
    def test_pattern_and_counts(self, g, code):
        counts = {}
        for x in range(g.vertex_count):
            counts[x] = 2 + (code // (3**x)) % 3
        pv = extend_outcomes(realize_rank_one(g), counts)
        assert pv.space_dim == g.vertex_count + (
            g.vertex_count * (g.vertex_count - 1) // 2 - len(g.edges)
        ) + sum(c - 2 for c in counts.values())
        assert all(len(pv.pvms[x]) == counts[x] for x in counts)
        pv.validate_exact()
        assert verify_realization(g, pv).passed


class TestVerifyRealization:
    def test_mutation_detected(self):
        r = realize_direct_sum(FORK)
        pin = RationalMatrix.from_rows([[1, 0], [0, 0]])
        broken = Realization(FORK, 2, r.method, {0: r.projections[0], 1: pin, 2: pin})
        report = verify_realization(FORK, broken)
        assert not report.passed
        assert [v.pair for v in report.violations] == [(1, 2)]
        assert report.violations[0].expected == "non-commute"

    def test_vertex_mismatch(self):
        r = realize_direct_sum(FORK)
        with pytest.raises(InputError, match="vertex sets differ"):
            verify_realization(parse_graph("4;"), r)

    def test_triangle_rank_one_passes(self):
        assert verify_realization(TRIANGLE, realize_rank_one(TRIANGLE)).passed


class TestPartitions:
    def test_d1(self):
        assert [p.blocks for p in enumerate_partitions(1)] == [((1,),)]

    def test_d2_order(self):
        assert [p.blocks for p in enumerate_partitions(2)] == [((1, 2),), ((1,), (2,))]

    def test_d3_count(self):
        assert len(enumerate_partitions(3)) == 5

    def test_blocks_partition_ground_set(self):
        for d in range(1, 7):
            for p in enumerate_partitions(d):
                flat = [x for block in p.blocks for x in block]
                assert sorted(flat) == list(range(1, d + 1))
                assert all(list(block) == sorted(block) for block in p.blocks)
                assert [b[0] for b in p.blocks] == sorted(b[0] for b in p.blocks)

    def test_counts_match_triangle_recurrence(self):
        bells = bell_numbers_by_triangle(8)
        assert [len(enumerate_partitions(d)) for d in range(1, 9)] == bells

    def test_guard(self):
        with pytest.raises(InputError, match="guard"):
            enumerate_partitions(11)


class TestLowerBoundGraph:
    @pytest.mark.parametrize("d,actions,controls", [(1, 2, 1), (2, 3, 2), (3, 6, 3)])
    def test_sizes(self, d, actions, controls):
        lb = lower_bound_graph(d)
        assert len(lb.action_vertices) == actions
        assert len(lb.control_vertices) == controls
        assert lb.graph.vertex_count == actions + controls
        assert lb.partition_count + 1 == actions

    def test_action_clique_and_control_independence(self):
        lb = lower_bound_graph(3)
        g = lb.graph
        for i in lb.action_vertices:
            for j in lb.action_vertices:
                assert g.adjacent(i, j)
        for i in lb.control_vertices:
            for j in lb.control_vertices:
                if i != j:
                    assert not g.adjacent(i, j)

    def test_distinct_control_neighborhoods(self):
        for d in (1, 2, 3):
            lb = lower_bound_graph(d)
            hoods = [
                frozenset(c for c in lb.control_vertices if lb.graph.adjacent(a, c))
                for a in lb.action_vertices
            ]
            assert len(set(hoods)) == len(hoods)

    def test_bitstrings_drive_adjacency(self):
        lb = lower_bound_graph(2)
        for a, bits in zip(lb.action_vertices, lb.bitstrings):
            for k, c in enumerate(lb.control_vertices):
                assert lb.graph.adjacent(a, c) == (bits[k] == "1")

    def test_guard(self):
        with pytest.raises(InputError):
            lower_bound_graph(0)
        with pytest.raises(InputError):
            lower_bound_graph(9)


class TestForkObstruction:
    def test_derivation(self):
        rep = fork_obstruction()
        assert rep.derivation_valid
        assert rep.forced_pair == (1, 2)
        assert any("p_y = 1 - p_x = p_z" in s for s in rep.steps)
        assert rep.cliques == ((0, 1), (0, 2))


class TestJsonFormats:
    def test_realization_round_trip(self):
        r = realize_rank_one(FORK)
        back = realization_from_json_obj(realization_to_json_obj(r))
        assert back.space_dim == r.space_dim
        assert back.method == r.method
        assert all(back.projections[x] == r.projections[x] for x in range(3))
        assert all(back.vectors[x] == r.vectors[x] for x in range(3))

    def test_restricted_round_trip(self):
        rr = restrict_to_span(realize_rank_one(FORK))
        back = realization_from_json_obj(realization_to_json_obj(rr))
        assert back.space_dim == rr.space_dim
        for x in range(3):
            assert np.allclose(back.projections[x], rr.projections[x])

    def test_pvm_realization_round_trip(self):
        pv = lift_to_pvms(realize_direct_sum(FORK))
        back = pvm_realization_from_json_obj(pvm_realization_to_json_obj(pv))
        assert back.space_dim == pv.space_dim
        assert all(back.pvms[x] == pv.pvms[x] for x in range(3))

    def test_bad_method_rejected(self):
        obj = realization_to_json_obj(realize_direct_sum(FORK))
        obj["method"] = "mystery"
        with pytest.raises(InputError, match="method"):
            realization_from_json_obj(obj)
