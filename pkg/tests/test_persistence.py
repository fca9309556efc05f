"""Persistent entropy curves and their strategy independence."""

import math

import pytest

from entrograph import (EntropyCurve, MetricGraph, StepStrategy,
                        UnknownFormat, add_edge, curve_from_json,
                        delete_edge, export_curve, filter_at,
                        generate_graph, persistent_entropy, same_graph,
                        thresholds, volume_entropy)
from helpers import c4, complete4


def k4_with_long_chord():
    return MetricGraph.from_edges(
        list("abcd"),
        [("a", "b", 1.0), ("a", "c", 1.0), ("a", "d", 1.0),
         ("b", "c", 1.0), ("b", "d", 1.0), ("c", "d", 2.0)])


def test_thresholds_dedup_and_order():
    g = MetricGraph.from_edges(
        ["a", "b", "c", "d", "e"],
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 2.0),
         ("d", "e", 3.5)])
    assert thresholds(g) == (1.0, 2.0, 3.5)
    assert thresholds(complete4()) == (1.0,)
    assert thresholds(MetricGraph.from_edges([], [])) == ()


def test_filter_at_boundaries():
    g = k4_with_long_chord()
    assert filter_at(g, 0.5).edge_count == 0
    assert same_graph(filter_at(g, 2.0), g)
    assert same_graph(filter_at(g, 100.0), g)
    three = MetricGraph.from_edges(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 3.0)])
    assert filter_at(three, 2.0).edge_count == 2


def test_k4_variant_curve_matches_direct_solves():
    g = k4_with_long_chord()
    curve = persistent_entropy(g, strategy="direct")
    assert [s.epsilon for s in curve.steps] == [1.0, 2.0]
    h1 = volume_entropy(filter_at(g, 1.0)).h
    h2 = volume_entropy(g).h
    assert curve.steps[0].h == pytest.approx(h1, abs=1e-10)
    assert curve.steps[1].h == pytest.approx(h2, abs=1e-10)


def test_tree_curve_identically_zero():
    g = MetricGraph.from_edges(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 1.5), ("c", "d", 2.25)])
    curve = persistent_entropy(g, strategy="auto")
    assert [s.h for s in curve.steps] == [0.0, 0.0, 0.0]


def test_c4_with_long_chord_auto_takes_incremental_edge():
    g = add_edge(c4(), "a", "c", 3.0)
    auto = persistent_entropy(g, strategy="auto")
    direct = persistent_entropy(g, strategy="direct")
    assert auto.steps[-1].strategy is StepStrategy.INCREMENTAL_EDGE
    for sa, sd in zip(auto.steps, direct.steps):
        assert abs(sa.h - sd.h) <= 1e-7


def test_vertex_step_taken_when_new_hub_appears():
    g = c4()
    g = add_edge(g, "a", "c", 1.0)  # hyperbolic base, all lengths 1
    hub_edges = [("e", "a", 2.0), ("e", "b", 2.0), ("e", "c", 2.0)]
    g = MetricGraph.from_edges(
        g.vertices + ("e",), g.edge_list() + tuple(hub_edges))
    inc = persistent_entropy(g, strategy="incremental")
    direct = persistent_entropy(g, strategy="direct")
    assert inc.steps[-1].strategy is StepStrategy.INCREMENTAL_VERTEX
    for sa, sd in zip(inc.steps, direct.steps):
        assert abs(sa.h - sd.h) <= 1e-7


def test_vertex_step_parallel_batch_to_one_target():
    # three equal-length parallel edges from a fresh vertex to a vertex
    # of a hyperbolic component arrive in one filtration step
    g = MetricGraph.from_edges(
        ["v", "w"],
        [("v", "v", 1.0), ("v", "v", 1.0),
         ("w", "v", 2.0), ("w", "v", 2.0), ("w", "v", 2.0)])
    inc = persistent_entropy(g, strategy="incremental")
    direct = persistent_entropy(g, strategy="direct")
    assert inc.steps[-1].strategy is StepStrategy.INCREMENTAL_VERTEX
    for sa, sd in zip(inc.steps, direct.steps):
        assert abs(sa.h - sd.h) <= 1e-7


def test_strategy_independence_and_monotonicity_seeded():
    for seed in (1, 2, 3, 4, 5):
        g = generate_graph(seed, 5, 9)
        curves = {name: persistent_entropy(g, strategy=name)
                  for name in ("direct", "incremental", "auto")}
        hs = {k: [s.h for s in c.steps] for k, c in curves.items()}
        assert hs["direct"] == sorted(hs["direct"])  # monotone
        for name in ("incremental", "auto"):
            assert max(abs(a - b)
                       for a, b in zip(hs["direct"], hs[name])) <= 1e-7
        assert hs["direct"][-1] == pytest.approx(volume_entropy(g).h,
                                                 abs=1e-9)


def test_curve_epsilons_are_exactly_the_thresholds():
    g = generate_graph(7, 5, 8)
    curve = persistent_entropy(g)
    assert tuple(s.epsilon for s in curve.steps) == thresholds(g)
    assert curve.thresholds == thresholds(g)


def test_delete_and_readd_longest_edge_reproduces_tail():
    g = k4_with_long_chord()
    curve = persistent_entropy(g, strategy="direct")
    longest = max(g.edge_darts(), key=lambda d: d.length)
    trimmed = delete_edge(g, longest.id)
    rebuilt = add_edge(trimmed, longest.tail, longest.head, longest.length)
    curve2 = persistent_entropy(rebuilt, strategy="direct")
    for s1, s2 in zip(curve.steps[-2:], curve2.steps[-2:]):
        assert s1.epsilon == s2.epsilon
        assert abs(s1.h - s2.h) <= 1e-10


def test_export_csv_shapes():
    empty = persistent_entropy(MetricGraph.from_edges(["a"], []))
    assert export_curve(empty, "csv").decode() == \
        "epsilon,h,strategy,iterations,ms\n"
    two = persistent_entropy(k4_with_long_chord())
    lines = export_curve(two, "csv").decode().strip().split("\n")
    assert len(lines) == 3
    assert lines[0] == "epsilon,h,strategy,iterations,ms"


def test_export_json_round_trip():
    curve = persistent_entropy(k4_with_long_chord(), strategy="auto")
    data = export_curve(curve, "json")
    back = curve_from_json(data)
    assert isinstance(back, EntropyCurve)
    assert back.thresholds == curve.thresholds
    for a, b in zip(back.steps, curve.steps):
        assert (a.epsilon, a.h, a.strategy, a.iterations) == \
            (b.epsilon, b.h, b.strategy, b.iterations)
        assert a.ms == pytest.approx(b.ms)


def test_export_unknown_format():
    curve = persistent_entropy(c4())
    with pytest.raises(UnknownFormat):
        export_curve(curve, "yaml")


def test_curve_h_uses_max_over_components():
    g = MetricGraph.from_edges(
        ["v", "p", "q"],
        [("v", "v", 1.0), ("v", "v", 1.0), ("p", "q", 2.0)])
    curve = persistent_entropy(g)
    assert curve.steps[0].h == pytest.approx(math.log(3.0), abs=1e-9)
    assert curve.steps[1].h == pytest.approx(math.log(3.0), abs=1e-9)
