from itertools import combinations

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from subfree.disks import (
    DegenerateInput, blow_up_product_map, build_arrangement, make_disks, ply, validate_disks,
)
from subfree.dp import dp_solve
from subfree.generators import small_patterns
from subfree.graph import build_graph, graph_from_json, is_family_free, make_family
from subfree.hardness import p4_deletion_instance, triangle_factor, triangles
from subfree.layering import bfs_layering, check_layering, solve, window_plan
from subfree.oracle import oracle_solve
from subfree.treewidth import (
    compute_td, elimination_width, exact_order, make_nice, min_fill_order, validate_td,
)

PATTERNS = small_patterns(4, with_edgeless=True)
SLOW = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, chosen)


@given(graphs())
def test_json_round_trip(g):
    assert graph_from_json(g.to_json()) == g


@given(graphs())
def test_compute_td_valid_and_optimal(g):
    td = compute_td(g)
    assert validate_td(g, td) == []
    assert td.width == elimination_width(g, exact_order(g))
    assert elimination_width(g, min_fill_order(g)) >= td.width


@given(graphs())
def test_nice_form_keeps_width(g):
    td = compute_td(g)
    nice = make_nice(g, td)
    assert nice.width == max(td.width, 0) or g.n == 0
    assert validate_td(g, nice.as_td()) == []
    assert nice.count("edge") == g.m


@SLOW
@given(graphs(7), st.lists(st.sampled_from(PATTERNS), min_size=1, max_size=2), st.integers(0, 3))
def test_dp_and_framework_match_oracle(g, patterns, k):
    fam = make_family(patterns)
    want = oracle_solve(g, fam, k)
    got = dp_solve(g, compute_td(g), fam, k)
    assert (got.answer, got.cost) == (want.answer, want.cost)
    if got.answer:
        assert is_family_free(g, fam, got.witness)
    lay = bfs_layering(g)
    framed = solve(g, lay, fam, k)
    assert (framed.answer, framed.cost) == (want.answer, want.cost)


@given(graphs(12), st.integers(1, 4))
def test_layering_and_windows(g, r):
    lay = bfs_layering(g)
    assert check_layering(g, lay) == []
    plan = window_plan(lay, r)
    assert plan.windows[0][0] == 1 and plan.windows[-1][1] >= lay.num_layers
    assert sorted(v for m in plan.members for v in m) == list(range(g.n))


@given(graphs(9))
def test_triangle_factor_certificate(g):
    tiles = triangle_factor(g)
    brute = g.n % 3 == 0 and any(
        len({v for t in pick for v in t}) == g.n
        for pick in combinations(triangles(g), g.n // 3))
    assert (tiles is not None) == brute
    if tiles is not None:
        assert sorted(v for t in tiles for v in t) == list(range(g.n))
        assert all(g.has_edge(a, b) for t in tiles for a, b in combinations(t, 2))


coord = st.integers(0, 4000).map(lambda x: f"{x / 400:.4f}")
radius = st.integers(100, 1200).map(lambda x: f"{x / 400:.4f}")


@settings(deadline=None, max_examples=50)
@given(st.lists(st.tuples(coord, coord, radius), min_size=1, max_size=7))
def test_random_arrangements_satisfy_euler(triples):
    ds = make_disks(triples)
    assume(not validate_disks(ds))
    try:
        arr = build_arrangement(ds)
    except DegenerateInput:
        assume(False)
    assert arr.euler_ok()
    assert 1 <= ply(arr) <= len(triples)


@settings(deadline=None, max_examples=40)
@given(graphs(9))
def test_p4_deletion_iff_triangle_factor(g):
    fam, k = p4_deletion_instance(g)
    assume(isinstance(k, int) and k <= 4)
    answer = solve(g, bfs_layering(g), fam, k).answer
    assert answer == (triangle_factor(g) is not None)


@given(graphs(6), st.integers(1, 3))
def test_uniform_blow_up_embeds_in_product(g, t):
    phi, ok = blow_up_product_map(g, t)
    assert ok and len(phi) == g.n * t
