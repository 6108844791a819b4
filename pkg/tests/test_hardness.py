from itertools import combinations, product

import pytest

from subfree.acceptance import clause_gadget_tileable, splitter_traces, variable_tilings
from subfree.graph import complete_graph, cycle_graph, path_graph
from subfree.hardness import (
    SPLITTER_PORTS, MalformedFormula, TooLarge, build_clause_gadget, build_L, build_splitter,
    build_variable_gadget, check_1in3, iter_tilings, make_formula, p4_deletion_instance,
    parse_dimacs, reduce_formula, solve_1in3, triangle_factor,
)
from subfree.layering import Infeasible, bfs_layering, solve
from conftest import two_triangles


def test_l_gadget_counts():
    L = build_L()
    assert (L.graph.n, L.graph.m) == (9, 14)
    assert L.graph.degree(L.port("g")) == 2


def test_splitter_counts():
    sp = build_splitter()
    assert (sp.graph.n, sp.graph.m) == (28, 47)
    assert sorted(sp.ports) == sorted(SPLITTER_PORTS)


def test_clause_gadget_counts():
    assert build_clause_gadget().graph.n == 15


@pytest.mark.parametrize("occ, n", [((True,), 30), ((False,), 30), ((True, False), 60)])
def test_variable_gadget_counts(occ, n):
    assert build_variable_gadget(occ).graph.n == n


def test_splitter_dichotomy():
    assert splitter_traces() == {frozenset({"g"}), frozenset({"h", "h1", "h2", "h3"})}


@pytest.mark.parametrize("occ", [o for ell in (1, 2) for o in product((True, False), repeat=ell)])
def test_variable_gadget_has_two_tilings(occ):
    assert sorted(variable_tilings(occ)) == [(False, True), (True, False)]


@pytest.mark.parametrize("removed", [I for r in range(4) for I in combinations((1, 2, 3), r)])
def test_clause_gadget_needs_two_false(removed):
    assert clause_gadget_tileable(removed) == (len(removed) == 2)


def test_single_clause_reduction_has_factor():
    g, report = reduce_formula(make_formula(3, [(1, 2, 3)]))
    assert triangle_factor(g) is not None
    assert report["clauses"][0]["clause"] == 1


def test_repeated_variable_rejected():
    with pytest.raises(MalformedFormula):
        make_formula(2, [(1, 1, 2)])


def test_solve_1in3_examples():
    assert solve_1in3(make_formula(3, [(1, 2, 3)])) == (True, False, False)
    inst = make_formula(4, [(1, 2, 3), (1, 2, 4)])
    sol = solve_1in3(inst)
    assert sol == (True, False, False, False) and check_1in3(inst, sol)
    inst = make_formula(3, [(1, 2, 3), (-1, -2, -3)])
    assert solve_1in3(inst) is None
    assert not any(check_1in3(inst, a) for a in product((True, False), repeat=3))


def test_solve_1in3_bound():
    with pytest.raises(TooLarge):
        solve_1in3(make_formula(30, [(1, 2, 3)]))


@pytest.mark.parametrize("g, present", [
    (complete_graph(3), True), (cycle_graph(4), False), (complete_graph(4), False),
    (two_triangles(), True),
])
def test_triangle_factor(g, present):
    tiles = triangle_factor(g)
    assert (tiles is not None) == present
    if tiles:
        assert sorted(v for t in tiles for v in t) == list(range(g.n))


def test_iter_tilings_counts_each_once():
    # K3 with nothing optional has a single tiling; optional vertices allow the empty one
    assert len(list(iter_tilings(complete_graph(3)))) == 1
    assert len(list(iter_tilings(complete_graph(3), [0, 1, 2]))) == 2


@pytest.mark.parametrize("g, answer", [
    (complete_graph(3), True), (cycle_graph(4), False), (two_triangles(), True),
])
def test_p4_instances(g, answer):
    fam, k = p4_deletion_instance(g)
    assert k == 0
    assert solve(g, bfs_layering(g), fam, k).answer == answer
    assert (triangle_factor(g) is not None) == answer


def test_p4_instance_negative_budget():
    _, k = p4_deletion_instance(path_graph(3))
    assert isinstance(k, Infeasible)


def test_dimacs_parsing_and_errors():
    inst = parse_dimacs("c comment\np cnf 3 1\n1 -2 3 0\n")
    assert inst.clauses == ((1, -2, 3),)
    assert parse_dimacs(inst.to_dimacs()).clauses == inst.clauses
    for text, msg in [("p cnf 3 1\n1 2 0\n", "2 literals"),
                      ("1 2 3 0\n", "line 1"),
                      ("p cnf 3 2\n1 2 3 0\n", "announces 2"),
                      ("p cnf 3 1\n1 x 3 0\n", "line 2")]:
        with pytest.raises(MalformedFormula, match=msg):
            parse_dimacs(text)


def test_rotation_orders_validated():
    text = "p cnf 3 1\n1 2 3 0\n"
    inst = parse_dimacs(text, {"var_order": [[1], [1], [1]], "clause_order": [[3, 1, 2]]})
    assert inst.clause_vars(1) == [3, 1, 2]
    with pytest.raises(MalformedFormula):
        parse_dimacs(text, {"clause_order": [[1, 2, 4]]})
