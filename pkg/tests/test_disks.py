import math
import random

import pytest

from subfree.disks import (
    DegenerateInput, MinorModel, arrangement_stats, blow_up, blow_up_product_map,
    build_arrangement, disk_layering, disks_from_json, face_levels, intersection_graph,
    make_disks, minor_model, ply, raw_levels, stats_json, validate_disks, validate_minor_model,
)
from subfree.generators import random_disk_set
from subfree.graph import GraphError, complete_graph, path_graph

ONE = make_disks([(0, 0, 1)])
APART = make_disks([(0, 0, 1), (5, 0, 1)])
CROSS = make_disks([(0, 0, 1), (1, 0, 1)])


def test_identical_pair_flagged():
    assert validate_disks(make_disks([(0, 0, 1), (0, 0, 1)])) == ["identical pair: disks 0 and 1"]


def test_tangency_flagged():
    assert validate_disks(make_disks([(0, 0, 1), (2, 0, 1)])) == ["tangency: disks 0 and 1"]


def test_generic_triple_is_clean():
    assert validate_disks(make_disks([(0, 0, 1), (1, 0, 1), ("0.5", "0.7", 1)])) == []


def test_degenerate_input_refused():
    with pytest.raises(DegenerateInput):
        build_arrangement(make_disks([(0, 0, 1), (2, 0, 1)]))


def test_one_disk_arrangement():
    arr = build_arrangement(ONE)
    assert len(arr.faces) == 2
    assert arr.adjacency == ((0, 1),)


def test_two_disjoint_disks():
    arr = build_arrangement(APART)
    assert len(arr.faces) == 3
    assert all(arr.outer in e for e in arr.adjacency) and len(arr.adjacency) == 2


def test_two_crossing_disks_form_a_four_cycle():
    arr = build_arrangement(CROSS)
    assert len(arr.faces) == 4
    depth = {f.depth: i for i, f in enumerate(arr.faces)}
    outer, a, b, lens = depth[()], depth[(0,)], depth[(1,)], depth[(0, 1)]
    adj = set(arr.adjacency)
    norm = lambda x, y: (min(x, y), max(x, y))
    assert adj == {norm(outer, a), norm(outer, b), norm(a, lens), norm(b, lens)}
    assert arr.euler_ok()


def test_stats_examples():
    assert arrangement_stats(build_arrangement(ONE)) == (1, 0)
    assert arrangement_stats(build_arrangement(CROSS)) == (2, 1)
    assert stats_json(build_arrangement(CROSS)) == {"faces": 4, "ply": 2, "local_radius": 1}


def test_nested_disks():
    arr = build_arrangement(make_disks([(0, 0, 10), (0, 0, 1)]))
    assert arr.euler_ok()
    assert [f.depth for f in arr.faces] == [(), (0,), (0, 1)]
    assert arr.adjacency == ((0, 1), (1, 2))
    assert stats_json(arr) == {"faces": 3, "ply": 2, "local_radius": 1}


def test_intersection_graph_examples():
    assert intersection_graph(APART).m == 0
    assert intersection_graph(CROSS).m == 1
    chain = make_disks([(0, 0, 1), (1.5, 0, 1), (3, 0, 1)])
    assert intersection_graph(chain) == path_graph(3)


def test_blow_up_one_disk():
    g, clique_of = blow_up(build_arrangement(ONE))
    assert g.n == 2 and g.m == 1


def test_lens_clique_has_two_vertices():
    arr = build_arrangement(CROSS)
    _, clique_of = blow_up(arr)
    lens = next(i for i, f in enumerate(arr.faces) if len(f.depth) == 2)
    assert len(clique_of[lens]) == 2


def test_single_disk_minor_model():
    arr = build_arrangement(ONE)
    model = minor_model(ONE, arr)
    inside = next(i for i, f in enumerate(arr.faces) if f.depth)
    assert model.branch_sets == (tuple(blow_up(arr)[1][inside]),)


def test_crossing_minor_model_splits_the_lens():
    arr = build_arrangement(CROSS)
    host, clique_of = blow_up(arr)
    model = minor_model(CROSS, arr)
    lens = next(i for i, f in enumerate(arr.faces) if len(f.depth) == 2)
    assert [len(bs) for bs in model.branch_sets] == [2, 2]
    assert all(len(set(bs) & set(clique_of[lens])) == 1 for bs in model.branch_sets)
    assert validate_minor_model(intersection_graph(CROSS), host, model) == []


def test_identity_minor_model():
    g = complete_graph(4)
    model = MinorModel(tuple((v,) for v in range(4)), 0)
    assert validate_minor_model(g, g, model) == []


def test_broken_minor_model_reported():
    g = path_graph(3)
    bad = MinorModel(((0,), (2,), (1,)), 0)
    assert validate_minor_model(g, g, bad)


def test_disk_layering_examples():
    assert disk_layering(ONE, build_arrangement(ONE)).layer_of == (1,)
    assert disk_layering(CROSS, build_arrangement(CROSS)).layer_of == (1, 1)


def test_random_disk_sets():
    rng = random.Random(10)
    for _ in range(15):
        ds = random_disk_set(rng, rng.randint(2, 14))
        arr = build_arrangement(ds)
        assert arr.euler_ok()
        p, rho = arrangement_stats(arr)
        if math.isfinite(rho):
            assert p <= 2 * rho + 1
            lam = raw_levels(arr)
            for u, v in intersection_graph(ds).edges:
                assert abs(lam[u] - lam[v]) <= 4 * rho
            minor_model(ds, arr)
        host, clique_of = blow_up(arr)
        assert host.n == sum(max(len(f.depth), 1) for f in arr.faces)
        assert ply(arr) == max(len(f.depth) for f in arr.faces)
        assert face_levels(arr)[arr.outer] == 0


def test_blow_up_product_map():
    phi, ok = blow_up_product_map(path_graph(3), 2)
    assert ok and len(phi) == 6


def test_json_input_and_errors():
    ds = disks_from_json('[{"x": "0.5", "y": 0, "r": "1/2"}]')
    assert ds.to_json() == [{"x": "0.5", "y": "0", "r": "0.5"}]
    with pytest.raises(GraphError, match="disk 0"):
        disks_from_json('[{"x": 0, "y": 0}]')
    with pytest.raises(GraphError, match="radius"):
        disks_from_json('[{"x": 0, "y": 0, "r": 0}]')
