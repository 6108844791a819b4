"""Simple undirected graphs, pattern families and subgraph-copy search.

Vertices are the integers ``0 .. n-1``. Edges are stored as sorted pairs
``(u, v)`` with ``u < v``. Every object here is immutable once built.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional


class GraphError(ValueError):
    pass


class IndexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset
    adj: tuple = field(repr=False, compare=False)

    @property
    def vertex_count(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list]:
        """Induced subgraph, relabelled ``0..len-1`` in increasing order.

        Returns the subgraph and the list mapping new indices to old ones.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub_edges = [(index[u], index[v]) for u, v in self.edges
                     if u in index and v in index]
        return build_graph(len(keep), sub_edges), keep

    def remove_edges(self, deleted: Iterable[Edge]) -> "Graph":
        gone = {norm_edge(*e) for e in deleted}
        return build_graph(self.n, [e for e in self.edges if e not in gone])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_list: Iterable) -> Graph:
    """Build a simple graph, deduplicating parallel edges.

    Self-loops and out-of-range endpoints raise instead of being dropped.
    """
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    edges = set()
    for pair in edge_list:
        u, v = (int(x) for x in pair)
        for x in (u, v):
            if not 0 <= x < n:
                raise IndexOutOfRange(f"endpoint {x} not in [0, {n})")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        edges.add(norm_edge(u, v))
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    adj = tuple(tuple(sorted(a)) for a in nbrs)
    return Graph(n, frozenset(edges), adj)


def graph_from_json(obj) -> Graph:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphError('graph JSON needs fields "n" and "edges"')
    return build_graph(obj["n"], obj["edges"])


# small named graphs used throughout tests and demos

def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return build_graph(n, [])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return build_graph(offset, edges)


def strong_product(a: Graph, b: Graph) -> tuple[Graph, dict]:
    """Strong product ``a ⊠ b``; vertex ``(x, y)`` gets index ``x * b.n + y``."""
    index = {(x, y): x * b.n + y for x in range(a.n) for y in range(b.n)}

    def close(g: Graph, p: int, q: int) -> bool:
        return p == q or g.has_edge(p, q)

    edges = []
    keys = list(index)
    for i, (x1, y1) in enumerate(keys):
        for x2, y2 in keys[i + 1:]:
            if close(a, x1, x2) and close(b, y1, y2):
                edges.append((index[x1, y1], index[x2, y2]))
    return build_graph(a.n * b.n, edges), index


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex partition into components, each sorted, ordered by minimum."""
    seen = [False] * g.n
    blocks = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, block = [s], []
        while stack:
            v = stack.pop()
            block.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        blocks.append(sorted(block))
    return blocks


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def bfs_distances(g: Graph, sources: Iterable[int]) -> list:
    """Hop distance from the nearest source; ``None`` if unreachable."""
    dist: list[Optional[int]] = [None] * g.n
    frontier = []
    for s in sources:
        if dist[s] is None:
            dist[s] = 0
            frontier.append(s)
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if dist[w] is None:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


@dataclass(frozen=True)
class PatternFamily:
    patterns: tuple
    r: int
    components: tuple

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def all_connected(self) -> bool:
        return all(len(c) == 1 for c in self.components)

    def to_json(self) -> list:
        return [p.to_json() for p in self.patterns]


def make_family(patterns: Iterable[Graph], r: Optional[int] = None) -> PatternFamily:
    """Wrap patterns into a family.

    ``r`` defaults to the largest pattern order; passing it explicitly keeps
    it frozen when patterns shrink during family reduction.
    """
    pats = tuple(patterns)
    if not pats:
        raise GraphError("pattern family must be nonempty")
    for p in pats:
        if p.n == 0:
            raise GraphError("patterns must have at least one vertex")
    if r is None:
        r = max(p.n for p in pats)
    comps = tuple(tuple(tuple(c) for c in connected_components(p)) for p in pats)
    return PatternFamily(pats, r, comps)


def family_from_json(obj) -> PatternFamily:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, list):
        raise GraphError("family JSON must be a list of graphs")
    return make_family(graph_from_json(o) for o in obj)


# ---------------------------------------------------------------------------
# copy search


def _search_order(pattern: Graph) -> list[int]:
    # component by component, largest first; inside a component start at a
    # max-degree vertex and keep picking the vertex with most placed neighbours
    comps = sorted(connected_components(pattern), key=lambda c: (-len(c), c[0]))
    order: list[int] = []
    for comp in comps:
        placed = set()
        start = min(comp, key=lambda v: (-pattern.degree(v), v))
        order.append(start)
        placed.add(start)
        rest = set(comp) - placed
        while rest:
            nxt = min(rest, key=lambda v: (
                -sum(1 for w in pattern.adj[v] if w in placed),
                -pattern.degree(v), v))
            order.append(nxt)
            placed.add(nxt)
            rest.discard(nxt)
    return order


def iter_copies(host: Graph, pattern: Graph,
                forbidden_edges: Iterable[Edge] = ()) -> Iterator[dict]:
    """Yield every injective map realizing ``pattern`` in ``host - forbidden``.

    Maps are yielded in lexicographic order with respect to the internal
    search order (connectivity-first, degree-descending), host candidates
    tried in increasing index.
    """
    forbidden = {norm_edge(*e) for e in forbidden_edges}
    if pattern.n > host.n:
        return
    order = _search_order(pattern)
    # for each position: the earlier pattern vertices adjacent to it
    pos = {v: i for i, v in enumerate(order)}
    back = [[w for w in pattern.adj[v] if pos[w] < i] for i, v in enumerate(order)]

    def ok(x: int, y: int) -> bool:
        e = norm_edge(x, y)
        return e in host.edges and e not in forbidden

    image: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int):
        if i == len(order):
            yield dict(image)
            return
        v = order[i]
        need = back[i]
        if need:
            cands = [x for x in host.adj[image[need[0]]] if x not in used]
        else:
            cands = [x for x in range(host.n) if x not in used]
        for x in cands:
            if host.degree(x) < pattern.degree(v):
                continue
            if all(ok(x, image[w]) for w in need):
                image[v] = x
                used.add(x)
                yield from rec(i + 1)
                used.discard(x)
                del image[v]

    yield from rec(0)


def find_copy(host: Graph, pattern: Graph,
              forbidden_edges: Iterable[Edge] = ()) -> Optional[dict]:
    """First copy of ``pattern`` in ``host`` avoiding ``forbidden_edges``, or None."""
    return next(iter_copies(host, pattern, forbidden_edges), None)


def copy_edges(pattern: Graph, embedding: dict) -> list:
    return sorted(norm_edge(embedding[u], embedding[v]) for u, v in pattern.edges)


def is_family_free(host: Graph, fam: PatternFamily,
                   deleted: Iterable[Edge] = ()) -> bool:
    gone = {norm_edge(*e) for e in deleted}
    bad = gone - host.edges
    if bad:
        raise UnknownEdge(f"not edges of the host: {sorted(bad)}")
    return all(find_copy(host, p, gone) is None for p in fam.patterns)
