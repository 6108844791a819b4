import random

import pytest

from subfree.generators import random_embedding, random_graph
from subfree.graph import build_graph, complete_graph, cycle_graph, empty_graph, path_graph
from subfree.treewidth import (
    InvalidDecomposition, InvalidEmbedding, LayerOutOfRange, compute_td, elimination_width,
    embedding_from_json, exact_order, make_embedding, make_nice, make_td, min_fill_order,
    td_from_json, td_from_order, validate_td, window_td,
)


def test_single_bag_triangle(k3):
    td = make_td([{0, 1, 2}])
    assert validate_td(k3, td) == []
    assert td.width == 2


def test_path_two_bags():
    p3 = path_graph(3)
    td = make_td([{0, 1}, {1, 2}], [(0, 1)])
    assert validate_td(p3, td) == []
    assert td.width == 1


def test_uncovered_edge_reported():
    problems = validate_td(path_graph(3), make_td([{0, 1}, {2}], [(0, 1)]))
    assert any("(1, 2)" in p for p in problems)


def test_disconnected_occurrence_reported():
    td = make_td([{0, 1}, {1, 2}, {0, 2}], [(0, 1), (1, 2)])
    assert validate_td(complete_graph(3), td)


def test_bag_tree_must_be_a_tree():
    td = make_td([{0, 1}, {1, 2}], [])
    assert validate_td(path_graph(3), td)


@pytest.mark.parametrize("g, width", [
    (complete_graph(4), 3),
    (cycle_graph(5), 2),
    (build_graph(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]), 1),
    (empty_graph(3), 0),
])
def test_compute_td_widths(g, width):
    td = compute_td(g)
    assert validate_td(g, td) == []
    assert td.width == width


def test_k4_is_a_single_bag(k4):
    assert len(compute_td(k4).bags) == 1


def test_heuristic_and_exact_orders_agree_on_grid():
    grid = build_graph(9, [(i, i + 1) for i in range(9) if i % 3 != 2] +
                       [(i, i + 3) for i in range(6)])
    assert elimination_width(grid, exact_order(grid)) == 3
    assert elimination_width(grid, min_fill_order(grid)) >= 3
    assert validate_td(grid, td_from_order(grid, min_fill_order(grid))) == []


def test_nice_form_of_single_bag(k3):
    nice = make_nice(k3, make_td([{0, 1, 2}]))
    assert nice.count("introduce") == 3
    assert nice.count("edge") == 3
    assert nice.count("forget") == 3
    assert nice.width == 2


def test_nice_form_of_empty_graph():
    nice = make_nice(empty_graph(0), compute_td(empty_graph(0)))
    assert len(nice.nodes) == 1 and nice.nodes[0].kind == "leaf"


def test_nice_form_introduces_each_edge_once():
    p3 = path_graph(3)
    nice = make_nice(p3, make_td([{0, 1}, {1, 2}], [(0, 1)]))
    assert validate_td(p3, nice.as_td()) == []
    introduced = [nd.edge for nd in nice.nodes if nd.kind == "edge"]
    assert sorted(introduced) == sorted(p3.edges)


def test_make_nice_rejects_invalid():
    with pytest.raises(InvalidDecomposition):
        make_nice(path_graph(3), make_td([{0, 1}, {2}], [(0, 1)]))


def test_td_json_round_trip():
    g = random_graph(random.Random(3), 8, 0.4)
    td = compute_td(g)
    again = td_from_json(td.to_json())
    assert validate_td(g, again) == [] and again.width == td.width


def test_td_json_needs_bags():
    with pytest.raises(InvalidDecomposition):
        td_from_json({"nodes": 1})


def _path_along_layers(n):
    g = path_graph(n)
    return g, make_embedding(g, empty_graph(1), n, [(0, i + 1) for i in range(n)])


def test_window_on_path_factor():
    g, embed = _path_along_layers(5)
    td = window_td(embed, [0, 1, 2], (1, 3))
    sub, _ = g.induced([0, 1, 2])
    assert validate_td(sub, td) == []
    assert td.width <= 2


def test_single_layer_window_keeps_factor_width():
    rng = random.Random(11)
    g, embed = random_embedding(rng, 4, 6, 14)
    w = embed.h_td.width
    for layer in range(1, 7):
        verts = [v for v in range(g.n) if embed.layer(v) == layer]
        if verts:
            assert window_td(embed, verts, (layer, layer)).width <= w


def test_random_three_layer_windows():
    rng = random.Random(5)
    for _ in range(20):
        g, embed = random_embedding(rng, 4, 8, 16)
        w = embed.h_td.width
        lo = rng.randint(1, 6)
        verts = [v for v in range(g.n) if lo <= embed.layer(v) <= lo + 2]
        sub, _ = g.induced(verts)
        td = window_td(embed, verts, (lo, lo + 2))
        assert validate_td(sub, td) == []
        assert td.width <= 3 * (w + 1) - 1


def test_window_rejects_vertex_outside_interval():
    g, embed = _path_along_layers(5)
    with pytest.raises(LayerOutOfRange):
        window_td(embed, [0, 4], (1, 3))


def test_embedding_rejects_long_edge():
    g = path_graph(2)
    with pytest.raises(InvalidEmbedding):
        make_embedding(g, empty_graph(1), 3, [(0, 1), (0, 3)])


def test_embedding_json_round_trip():
    g, embed = random_embedding(random.Random(2), 3, 5, 9)
    again = embedding_from_json(g, embed.to_json())
    assert again.placement == embed.placement and again.path_length == embed.path_length


def test_embedding_json_names_missing_field():
    with pytest.raises(InvalidEmbedding, match="map"):
        embedding_from_json(path_graph(2), {"h": {"n": 1, "edges": []}, "path_len": 2})
