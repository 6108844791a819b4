import random

import pytest

from subfree.dp import dp_solve
from subfree.generators import random_dp_instance
from subfree.graph import build_graph, empty_graph, is_family_free, make_family, path_graph
from subfree.oracle import oracle_solve, subset_solve
from subfree.treewidth import InvalidDecomposition, compute_td, make_td
from conftest import two_triangles


def _dp(g, patterns, k):
    return dp_solve(g, compute_td(g), make_family(patterns), k)


def test_triangle_one_deletion(k3):
    out = _dp(k3, [k3], 1)
    assert out.answer and out.cost == 1
    assert is_family_free(k3, make_family([k3]), out.witness)


def test_k4_needs_two(k4, k3):
    assert not _dp(k4, [k3], 1).answer
    out = _dp(k4, [k3], 2)
    assert out.answer and out.cost == 2


def test_p4_in_p4(p4):
    assert not _dp(p4, [p4], 0).answer
    out = _dp(p4, [p4], 1)
    assert out.answer and out.cost == 1


def test_disconnected_pattern():
    tt = two_triangles()
    assert not _dp(tt, [tt], 0).answer
    assert _dp(tt, [tt], 1).cost == 1


def test_edgeless_pattern_is_never_removable():
    host = path_graph(3)
    assert not _dp(host, [empty_graph(2)], 2).answer
    assert not oracle_solve(host, make_family([empty_graph(2)]), 2).answer


def test_large_budget_still_minimum(k4, k3):
    out = _dp(k4, [k3], 10)
    assert out.cost == 2


def test_invalid_td_rejected(k3):
    with pytest.raises(InvalidDecomposition):
        dp_solve(k3, make_td([{0, 1}]), make_family([k3]), 1)


def test_report_json(k3):
    rep = _dp(k3, [k3], 1).to_json()
    assert rep["answer"] == "yes" and rep["cost"] == 1 and len(rep["witness"]) == 1
    assert oracle_solve(k3, make_family([k3]), 0).to_json() == {
        "answer": "no", "cost": None, "witness": None}


def test_oracle_examples(k3, k4):
    assert oracle_solve(k3, make_family([k3]), 1).answer
    assert not oracle_solve(k4, make_family([k3]), 1).answer
    assert not subset_solve(k4, make_family([k3]), 1).answer


def test_oracle_witness_is_minimum():
    g = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    out = oracle_solve(g, make_family([build_graph(3, [(0, 1), (1, 2), (0, 2)])]), 3)
    assert out.cost == 2


def test_dp_matches_oracle_on_seeded_sample():
    rng = random.Random(99)
    for _ in range(40):
        g, fam, k = random_dp_instance(rng, max_n=9)
        want = oracle_solve(g, fam, k)
        got = dp_solve(g, compute_td(g), fam, k)
        assert (got.answer, got.cost) == (want.answer, want.cost)
        assert subset_solve(g, fam, k).cost == want.cost
