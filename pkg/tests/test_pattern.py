"""Patterns: matching semantics, dominance, renaming, canonical text."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gonorm import (
    ANON_EDGE_VAR,
    Direction,
    EdgeOnlyPattern,
    Graph,
    NodeEdgePattern,
    NodePattern,
    ObjectVar,
    PropVar,
    Relation,
    attrs,
    canonicalize,
    edge_pattern,
    evaluate,
    more_general_than,
    node_edge_pattern,
    node_pattern,
    relation_from_maps,
    rename_map,
    rename_variable,
    render_pattern,
    scope_key,
    variable_roles,
)
from gonorm.pattern import row_sort_key, value_sort_key, var_sort_key

from oracles import generalize, naive_matches, random_graph, random_pattern, specialize


def playground() -> Graph:
    g = Graph()
    g.add_node({"A"}, {"k": 1}, node_id="n1")
    g.add_node({"A", "B"}, {"k": 2, "m": "x"}, node_id="n2")
    g.add_node({"B"}, {}, node_id="n3")
    g.add_edge("n1", "n2", {"R"}, {"w": 5}, edge_id="e1")
    g.add_edge("n2", "n1", {"R", "S"}, {}, edge_id="e2")
    g.add_edge("n3", "n3", {"S"}, {"w": 6}, edge_id="e3")
    return g


# -- constructors and variable bookkeeping ---------------------------------

def test_constructors_freeze_sets():
    p = node_pattern("x", ["A", "A"], ["k"])
    assert p.labels == frozenset({"A"}) and p.keys == frozenset({"k"})
    assert edge_pattern("", {"R"}, ()).var == ANON_EDGE_VAR
    ne = node_edge_pattern("x", {"A"}, (), "", {"R"}, (), Direction.OUT)
    assert ne.edge_var == ANON_EDGE_VAR


def test_attrs_and_roles():
    ne = node_edge_pattern("x", {"A"}, {"k"}, "y", {"R"}, {"w"}, Direction.IN)
    assert attrs(ne) == frozenset({ObjectVar("x"), PropVar("x", "k"),
                                   ObjectVar("y"), PropVar("y", "w")})
    assert variable_roles(ne) == {"x": "node", "y": "edge"}
    assert variable_roles(node_pattern("v")) == {"v": "node"}
    assert variable_roles(edge_pattern("e")) == {"e": "edge"}


def test_sort_keys_handle_mixed_value_types():
    values = [1, "a", True, 2.5, "b", 0]
    assert sorted(values, key=value_sort_key)  # no TypeError
    rows = [(1, "a"), ("a", 1)]
    assert sorted(rows, key=row_sort_key)  # heterogeneous rows stay orderable
    assert var_sort_key(ObjectVar("x")) < var_sort_key(PropVar("x", "k"))


# -- evaluation semantics --------------------------------------------------

def test_node_pattern_label_superset_and_keys():
    g = playground()
    rel = evaluate(node_pattern("x", {"A"}, {"k"}), g)
    assert {m[ObjectVar("x")] for m in rel.as_maps()} == {"n1", "n2"}
    rel = evaluate(node_pattern("x", {"A", "B"}, ()), g)
    assert {m[ObjectVar("x")] for m in rel.as_maps()} == {"n2"}
    rel = evaluate(node_pattern("x", (), {"m"}), g)
    assert {m[ObjectVar("x")] for m in rel.as_maps()} == {"n2"}
    row = evaluate(node_pattern("x", {"A"}, {"k", "m"}), g).as_maps()
    assert row == [{ObjectVar("x"): "n2", PropVar("x", "k"): 2, PropVar("x", "m"): "x"}]


def test_edge_only_pattern_matches_each_edge_once():
    g = playground()
    rel = evaluate(edge_pattern("y", {"R"}, ()), g)
    assert {m[ObjectVar("y")] for m in rel.as_maps()} == {"e1", "e2"}
    assert len(rel) == 2  # orientation never duplicates an edge match
    rel = evaluate(edge_pattern("y", {"R", "S"}, ()), g)
    assert {m[ObjectVar("y")] for m in rel.as_maps()} == {"e2"}
    rel = evaluate(edge_pattern("y", (), {"w"}), g)
    assert {m[ObjectVar("y")] for m in rel.as_maps()} == {"e1", "e3"}


def test_node_edge_pattern_direction():
    g = playground()
    out = evaluate(node_edge_pattern("x", {"A"}, (), "y", {"R"}, (), Direction.OUT), g)
    assert {(m[ObjectVar("x")], m[ObjectVar("y")]) for m in out.as_maps()} == \
        {("n1", "e1"), ("n2", "e2")}
    into = evaluate(node_edge_pattern("x", {"A"}, (), "y", {"R"}, (), Direction.IN), g)
    assert {(m[ObjectVar("x")], m[ObjectVar("y")]) for m in into.as_maps()} == \
        {("n2", "e1"), ("n1", "e2")}


def test_node_edge_pattern_self_loop_counts_once_per_row():
    g = playground()
    rel = evaluate(node_edge_pattern("x", {"B"}, (), "y", {"S"}, {"w"}, Direction.OUT), g)
    assert [(m[ObjectVar("x")], m[ObjectVar("y")], m[PropVar("y", "w")])
            for m in rel.as_maps()] == [("n3", "e3", 6)]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_evaluate_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    pattern = random_pattern(rng)
    expected = {frozenset(row.items()) for row in naive_matches(g, pattern)}
    actual = {frozenset(row.items()) for row in evaluate(pattern, g).as_maps()}
    assert actual == expected


# -- relations -------------------------------------------------------------

def test_relation_project_and_schema():
    rel = relation_from_maps(
        [ObjectVar("x"), PropVar("x", "k")],
        [{ObjectVar("x"): "n1", PropVar("x", "k"): 1},
         {ObjectVar("x"): "n2", PropVar("x", "k"): 1}],
    )
    assert rel.schema == frozenset({ObjectVar("x"), PropVar("x", "k")})
    small = rel.project([PropVar("x", "k")])
    assert small.rows == frozenset({(1,)})
    with pytest.raises(KeyError):
        rel.project([ObjectVar("zz")])


# -- dominance -------------------------------------------------------------

def test_more_general_than_table():
    node_a = node_pattern("x", {"A"}, {"k"})
    node_wide = node_pattern("v", {"A"}, ())
    ne = node_edge_pattern("x", {"A", "B"}, {"k"}, "y", {"R"}, {"w"}, Direction.OUT)
    ne_in = node_edge_pattern("x", {"A", "B"}, {"k"}, "y", {"R"}, {"w"}, Direction.IN)
    edge = edge_pattern("y", {"R"}, ())
    edge_wide = edge_pattern("z", (), ())

    assert more_general_than(node_a, node_a)
    assert more_general_than(node_wide, node_a)
    assert not more_general_than(node_a, node_wide)  # keys grow downward only
    assert more_general_than(node_a, ne)
    assert not more_general_than(ne, node_a)  # an edge requirement never relaxes
    assert more_general_than(ne, ne)
    assert not more_general_than(ne, ne_in)  # orientation must agree
    assert more_general_than(edge_wide, edge)
    assert not more_general_than(edge, node_a)
    assert not more_general_than(node_wide, edge)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_generated_dominance_pairs(seed):
    rng = random.Random(seed)
    specific = random_pattern(rng)
    general = generalize(rng, specific)
    assert more_general_than(general, specific)
    narrowed = specialize(rng, specific)
    assert more_general_than(specific, narrowed)


# -- renaming and canonical text -------------------------------------------

def test_rename_map_is_positional_by_role():
    src = node_edge_pattern("a", {"A"}, {"k"}, "b", {"R"}, (), Direction.OUT)
    dst = node_edge_pattern("x", {"A"}, {"k"}, "y", {"R"}, (), Direction.OUT)
    assert rename_map(src, dst) == {"a": "x", "b": "y"}
    assert rename_map(node_pattern("n"), dst) == {"n": "x"}
    mapping = rename_map(src, dst)
    assert rename_variable(PropVar("a", "k"), mapping) == PropVar("x", "k")
    assert rename_variable(ObjectVar("b"), mapping) == ObjectVar("y")
    assert rename_variable(ObjectVar("other"), mapping) == ObjectVar("other")


def test_canonicalize_and_scope_key_ignore_variable_names():
    p = node_edge_pattern("course", {"A"}, {"k"}, "t", {"R"}, (), Direction.IN)
    q = node_edge_pattern("x", {"A"}, {"k"}, "y", {"R"}, (), Direction.IN)
    assert canonicalize(p) == q
    assert scope_key(p) == scope_key(q)
    assert scope_key(p) != scope_key(
        node_edge_pattern("x", {"A"}, {"k"}, "y", {"R"}, (), Direction.OUT))


def test_render_pattern_exact_forms():
    assert render_pattern(node_pattern("x", {"B", "A"}, {"b", "a"})) == "(x:{A,B}:{a,b})"
    assert render_pattern(edge_pattern("", {"R"}, ())) == "()-[:{R}:{}]->()"
    assert render_pattern(edge_pattern("y", {"R"}, {"k"})) == "()-[y:{R}:{k}]->()"
    out = node_edge_pattern("x", {"A"}, (), "y", {"R"}, (), Direction.OUT)
    assert render_pattern(out) == "(x:{A}:{})-[y:{R}:{}]->()"
    into = node_edge_pattern("x", {"A"}, (), "y", {"R"}, (), Direction.IN)
    assert render_pattern(into) == "()-[y:{R}:{}]->(x:{A}:{})"
