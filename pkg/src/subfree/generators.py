"""Seeded random instances for tests, acceptance runs and demos."""
from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Optional

from .graph import (Graph, PatternFamily, bfs_distances, build_graph, connected_components,
                    disjoint_union, make_family)
from .layering import Layering, make_layering
from .treewidth import ProductEmbedding, compute_td, make_embedding


def canonical_form(g: Graph) -> tuple:
    """Smallest relabelled edge list; only sensible for tiny graphs."""
    best = None
    for perm in permutations(range(g.n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return (g.n, best)


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield build_graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def small_patterns(max_order: int = 4, with_edgeless: bool = False) -> list[Graph]:
    """One representative per isomorphism class, ordered by (order, size)."""
    seen = {}
    for n in range(1, max_order + 1):
        for g in all_graphs(n):
            if not g.m and not with_edgeless:
                continue
            seen.setdefault(canonical_form(g), g)
    return sorted(seen.values(), key=lambda g: (g.n, g.m, sorted(g.edges)))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return build_graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_family(rng: random.Random, max_patterns: int = 2, max_order: int = 4,
                  pool: Optional[list] = None) -> PatternFamily:
    pool = pool or small_patterns(max_order)
    count = rng.randint(1, min(max_patterns, len(pool)))
    return make_family(rng.sample(pool, count))


def random_dp_instance(rng: random.Random, max_n: int = 12, max_k: int = 3,
                       pool: Optional[list] = None):
    n = rng.randint(3, max_n)
    g = random_graph(rng, n, rng.uniform(0.15, 0.45))
    return g, random_family(rng, pool=pool), rng.randint(0, max_k)


def random_embedding(rng: random.Random, h_order: int, path_length: int, n: int,
                     edge_p: float = 0.5, occupied: Optional[list] = None
                     ) -> tuple[Graph, ProductEmbedding]:
    """A random subgraph of ``H ⊠ P`` with ``n`` distinct placed vertices.

    ``H`` is a random connected graph (a random tree plus a few chords).
    ``occupied`` restricts the layers that may receive vertices.
    """
    h_edges = [(i, rng.randrange(i)) for i in range(1, h_order)]
    for e in combinations(range(h_order), 2):
        if rng.random() < 0.2:
            h_edges.append(e)
    h = build_graph(h_order, h_edges)
    layers = occupied or list(range(1, path_length + 1))
    cells = [(x, l) for x in range(h_order) for l in layers]
    n = min(n, len(cells))
    placement = rng.sample(cells, n)
    edges = []
    for a, b in combinations(range(n), 2):
        (x1, l1), (x2, l2) = placement[a], placement[b]
        if abs(l1 - l2) <= 1 and (x1 == x2 or h.has_edge(x1, x2)):
            if rng.random() < edge_p:
                edges.append((a, b))
    g = build_graph(n, edges)
    return g, make_embedding(g, h, path_length, placement, compute_td(h))


def sparse_layers(rng: random.Random, path_length: int, blocks: int, block_len: int) -> list[int]:
    """Occupied layers grouped in a few short runs spread over the path."""
    starts = sorted(rng.sample(range(1, max(2, path_length - block_len + 2)), blocks))
    out = set()
    for s in starts:
        out.update(range(s, min(path_length, s + block_len - 1) + 1))
    return sorted(out)


def reduction_trigger_instance(rng: random.Random, k: int, component: Graph, extra: Graph,
                           r: Optional[int] = None) -> tuple[Graph, Layering, PatternFamily]:
    """Layered graph where ``component`` appears in ``k + r`` odd windows.

    The family is the single pattern ``component + extra`` (disjoint union),
    so family reduction has to drop ``component``. Copies of ``component``
    sit alone on consecutive layers inside odd windows; one copy of
    ``extra`` (if it has vertices) sits in the last odd window.
    """
    pattern = disjoint_union(component, extra)
    r = r or pattern.n
    fam = make_family([pattern], r=r)
    width = 3 * r
    copies = k + r
    edges, layer_of = [], []

    def place(piece: Graph, start_layer: int):
        base = len(layer_of)
        order = _layer_order(piece)
        for v in range(piece.n):
            layer_of.append(start_layer + order[v])
        edges.extend((u + base, v + base) for u, v in piece.edges)

    for j in range(copies):
        lo = 2 * j * width + 1
        place(component, lo + rng.randrange(max(1, width - component.n + 1)))
    if extra.n:
        place(extra, 2 * (copies - 1) * width + 1 + width - extra.n)
    g = build_graph(len(layer_of), edges)
    num_layers = (2 * copies - 1) * width
    return g, make_layering(g, layer_of, num_layers), fam


def _layer_order(piece: Graph) -> list[int]:
    # BFS depth inside each component keeps every edge within one layer step
    depth = [0] * piece.n
    for comp in connected_components(piece):
        d = bfs_distances(piece, [comp[0]])
        for v in comp:
            depth[v] = d[v]
    return depth


def random_disk_set(rng: random.Random, n: int, box: float = 10.0,
                    radii: tuple = (0.5, 2.5), attempts: int = 50):
    """Disks with 3-decimal coordinates, resampled until in general position."""
    from .disks import make_disks, validate_disks

    def dec(lo: float, hi: float) -> str:
        return f"{rng.uniform(lo, hi):.3f}"

    for _ in range(attempts):
        ds = make_disks([(dec(0, box), dec(0, box), dec(*radii)) for _ in range(n)])
        if not validate_disks(ds):
            return ds
    raise RuntimeError("could not draw a disk set in general position")
