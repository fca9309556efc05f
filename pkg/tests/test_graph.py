"""Metric graph model: validation, components, reduction, edits."""

import math

import pytest

from entrograph import (ComponentKind, Dart, MetricGraph, NonPositiveLength,
                        UnknownVertex, add_edge, add_vertex, components,
                        delete_edge, delete_vertex, first_betti, reduce,
                        same_graph, validate)
from helpers import c4, complete4, cycle, path3, rose, segment, theta


def test_validate_well_formed_c4():
    assert validate(c4()) == ()


def test_validate_reports_nonpositive_length():
    g = MetricGraph(("x", "y"), (
        Dart(0, "x", "y", 0.0, 1), Dart(1, "y", "x", 0.0, 0)))
    report = validate(g)
    assert any("length" in line for line in report)


def test_validate_reports_reversal_fixed_point():
    g = MetricGraph(("x", "y"), (
        Dart(0, "x", "y", 1.0, 0), Dart(1, "y", "x", 1.0, 1)))
    report = validate(g)
    assert any("fixed point" in line for line in report)


def test_validate_reports_unknown_endpoint_and_bad_involution():
    g = MetricGraph(("x",), (
        Dart(0, "x", "w", 1.0, 1), Dart(1, "w", "x", 1.0, 0)))
    assert any("unknown head" in line for line in validate(g))
    h = MetricGraph(("x", "y", "z"), (
        Dart(0, "x", "y", 1.0, 1), Dart(1, "y", "x", 1.0, 0),
        Dart(2, "y", "z", 1.0, 1), Dart(3, "z", "y", 1.0, 2)))
    assert validate(h)


def test_from_edges_rejects_bad_input():
    with pytest.raises(UnknownVertex):
        MetricGraph.from_edges(["x"], [("x", "w", 1.0)])
    with pytest.raises(NonPositiveLength):
        MetricGraph.from_edges(["x", "y"], [("x", "y", -1.0)])
    with pytest.raises(NonPositiveLength):
        MetricGraph.from_edges(["x", "y"], [("x", "y", math.inf)])


def test_degree_counts_loops_twice():
    g = MetricGraph.from_edges(["v", "w"], [("v", "v", 1.0), ("v", "w", 2.0)])
    assert g.degree("v") == 3
    assert g.degree("w") == 1


def test_components_connected_identity():
    g = complete4()
    comps = components(g)
    assert len(comps) == 1
    assert same_graph(comps[0][0], g)
    assert comps[0][1] == {v: v for v in "abcd"}


def test_components_two_triangles():
    g = MetricGraph.from_edges(
        ["a", "b", "c", "p", "q", "r"],
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0),
         ("p", "q", 1.0), ("q", "r", 1.0), ("r", "p", 1.0)])
    comps = components(g)
    assert len(comps) == 2
    assert all(len(comp.vertices) == 3 for comp, _ in comps)
    assert all(validate(comp) == () for comp, _ in comps)


def test_components_empty_graph():
    assert components(MetricGraph.from_edges([], [])) == []


def test_first_betti():
    assert first_betti(cycle(3)) == (1,)
    assert first_betti(complete4()) == (3,)
    tree = MetricGraph.from_edges(
        list("abcde"),
        [("a", "b", 1.0), ("b", "c", 1.0), ("b", "d", 1.0), ("d", "e", 1.0)])
    assert first_betti(tree) == (0,)


def test_reduce_tree_is_trivial_and_empty():
    res = reduce(path3(1.0, 2.0))
    assert res.kinds == (ComponentKind.TRIVIAL,)
    assert res.graph.vertices == ()
    assert res.graph.darts == ()


def test_reduce_c4_to_single_loop_of_length_4():
    res = reduce(c4())
    assert res.kinds == (ComponentKind.SINGLE_CYCLE,)
    assert len(res.graph.vertices) == 1
    edges = res.graph.edge_list()
    assert len(edges) == 1
    u, v, length = edges[0]
    assert u == v
    assert length == pytest.approx(4.0)
    survivor = res.graph.vertices[0]
    assert res.vertex_map[survivor] == survivor


def test_reduce_k4_unchanged():
    g = complete4()
    res = reduce(g)
    assert res.kinds == (ComponentKind.HYPERBOLIC,)
    assert same_graph(res.graph, g)


def test_reduce_strips_hanging_tree_from_core():
    g = add_vertex(complete4(), [("a", 0.7)], new_id="leaf")
    res = reduce(g)
    assert res.kinds == (ComponentKind.HYPERBOLIC,)
    assert same_graph(res.graph, complete4())


def test_reduce_idempotent():
    g = MetricGraph.from_edges(
        ["a", "b", "c", "d", "e"],
        [("a", "b", 1.0), ("b", "c", 2.0), ("c", "a", 0.5),
         ("c", "d", 1.0), ("d", "a", 1.0), ("d", "e", 3.0)])
    once = reduce(g)
    twice = reduce(once.graph)
    assert same_graph(once.graph, twice.graph)
    assert once.kinds == twice.kinds


def test_reduce_betti_invariant_for_hyperbolic():
    g = add_vertex(complete4(), [("a", 1.0)], new_id="leaf")
    assert first_betti(g) == first_betti(reduce(g).graph)


def test_reduce_mixed_disjoint_graph():
    g = MetricGraph.from_edges(
        ["t1", "t2", "c1", "c2", "c3", "k"],
        [("t1", "t2", 1.0),
         ("c1", "c2", 1.0), ("c2", "c3", 1.0), ("c3", "c1", 1.5),
         ("k", "k", 1.0), ("k", "k", 2.0)])
    res = reduce(g)
    assert res.kinds == (ComponentKind.SINGLE_CYCLE, ComponentKind.HYPERBOLIC,
                         ComponentKind.TRIVIAL)
    assert first_betti(res.graph) == (1, 2)


def test_add_edge_chord():
    g = add_edge(c4(), "a", "c", 1.0)
    assert g.edge_count == 5
    assert c4().edge_count == 4  # input unchanged


def test_add_edge_loop_allowed():
    g = add_edge(c4(), "a", "a", 2.0)
    assert validate(g) == ()
    assert g.degree("a") == 4


def test_add_edge_errors():
    with pytest.raises(NonPositiveLength):
        add_edge(c4(), "a", "c", -1.0)
    with pytest.raises(UnknownVertex):
        add_edge(c4(), "a", "nope", 1.0)


def test_add_edge_delete_round_trip():
    g = c4()
    g2 = add_edge(g, "a", "c", 1.0)
    new_dart = g2.darts[-1]
    assert same_graph(delete_edge(g2, new_dart.id), g)


def test_add_vertex_three_spokes():
    g = add_vertex(c4(), [("a", 1.0), ("b", 1.0), ("c", 1.0)])
    assert len(g.vertices) == 5
    assert g.edge_count == 7
    assert validate(g) == ()


def test_add_vertex_single_attachment_reduces_away():
    g = add_vertex(c4(), [("a", 1.0)])
    assert validate(g) == ()
    res = reduce(g)
    assert res.kinds == (ComponentKind.SINGLE_CYCLE,)


def test_add_vertex_errors():
    with pytest.raises(UnknownVertex):
        add_vertex(c4(), [("missing", 1.0)])
    with pytest.raises(ValueError):
        add_vertex(c4(), [])
    with pytest.raises(NonPositiveLength):
        add_vertex(c4(), [("a", 0.0)])


def test_add_vertex_fresh_id_avoids_collision():
    g = MetricGraph.from_edges(["v0", "v1"], [("v0", "v1", 1.0)])
    g2 = add_vertex(g, [("v0", 1.0)])
    assert len(set(g2.vertices)) == 3


def test_delete_vertex():
    g = delete_vertex(complete4(), "a")
    assert set(g.vertices) == {"b", "c", "d"}
    assert g.edge_count == 3


def test_rose_and_theta_shapes():
    r = rose(2)
    assert r.degree("v") == 4
    assert len(r.darts) == 4
    t = theta()
    assert t.degree("x") == 3
    assert segment().degree("x") == 1
