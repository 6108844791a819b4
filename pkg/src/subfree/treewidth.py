"""Tree decompositions: validation, construction, nice form, product windows."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .graph import Graph, GraphError, build_graph, connected_components, graph_from_json, norm_edge


class InvalidDecomposition(GraphError):
    pass


class LayerOutOfRange(GraphError):
    pass


class InvalidEmbedding(GraphError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple            # tuple of frozensets, one per tree node
    tree_edges: tuple      # tuple of (a, b) node pairs

    @property
    def nodes(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1

    def to_json(self) -> dict:
        return {"nodes": self.nodes,
                "tree_edges": [list(e) for e in self.tree_edges],
                "bags": [sorted(b) for b in self.bags]}


def make_td(bags: Iterable, tree_edges: Iterable = ()) -> TreeDecomposition:
    return TreeDecomposition(tuple(frozenset(b) for b in bags),
                             tuple(tuple(sorted(e)) for e in tree_edges))


def td_from_json(obj) -> TreeDecomposition:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or not isinstance(obj.get("bags"), list):
        raise InvalidDecomposition('decomposition JSON needs a "bags" list')
    bags = obj["bags"]
    if len(bags) != obj.get("nodes", len(bags)):
        raise InvalidDecomposition('"nodes" disagrees with the number of bags')
    return make_td(bags, obj.get("tree_edges", []))


def _tree_adjacency(td: TreeDecomposition) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(td.nodes)]
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def validate_td(g: Graph, td: TreeDecomposition) -> list[str]:
    """Violations of the tree-decomposition conditions; empty means valid.

    Each message starts with the condition tag (``tree``, ``T1``, ``T2``,
    ``T3``) followed by the offending vertex, edge or node.
    """
    out = []
    t = td.nodes
    if t == 0:
        out.append("tree: decomposition has no nodes")
        return out
    for a, b in td.tree_edges:
        if not (0 <= a < t and 0 <= b < t) or a == b:
            out.append(f"tree: bad tree edge ({a}, {b})")
    if out:
        return out
    if len(set(td.tree_edges)) != t - 1:
        out.append(f"tree: {len(set(td.tree_edges))} edges on {t} nodes")
    adj = _tree_adjacency(td)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != t:
        out.append(f"tree: nodes {sorted(set(range(t)) - seen)} unreachable from node 0")
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                out.append(f"T1: node {i} holds unknown vertex {v}")
    covered = set().union(*td.bags)
    for v in range(g.n):
        if v not in covered:
            out.append(f"T1: vertex {v} in no bag")
    for u, v in g.sorted_edges():
        if not any(u in b and v in b for b in td.bags):
            out.append(f"T2: edge ({u}, {v}) uncovered")
    for v in range(g.n):
        holders = [i for i, b in enumerate(td.bags) if v in b]
        if len(holders) <= 1:
            continue
        hs = set(holders)
        reach = {holders[0]}
        stack = [holders[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hs and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != hs:
            out.append(f"T3: nodes holding vertex {v} are not connected in the tree")
    return out


# ---------------------------------------------------------------------------
# elimination orders


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.adj[v]) for v in range(g.n)]


def elimination_width(g: Graph, order: list[int]) -> int:
    """Width of the decomposition induced by eliminating ``order``."""
    nb = [set(a) for a in g.adj]
    width = -1 if g.n == 0 else 0
    for v in order:
        later = nb[v]
        width = max(width, len(later))
        for a in later:
            nb[a] |= later
            nb[a].discard(a)
            nb[a].discard(v)
        nb[v] = set()
    return width


def min_fill_order(g: Graph) -> list[int]:
    """Greedy min-fill elimination order, ties broken by smallest vertex."""
    nb = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    while nb:
        best, best_cost = None, None
        for v in sorted(nb):
            ns = sorted(nb[v])
            cost = sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nb[a])
            if best_cost is None or cost < best_cost:
                best, best_cost = v, cost
                if cost == 0:
                    break
        later = nb.pop(best)
        for a in later:
            nb[a] |= later
            nb[a].discard(a)
            nb[a].discard(best)
        order.append(best)
    return order


def exact_order(g: Graph) -> list[int]:
    """Optimal elimination order by dynamic programming over vertex subsets.

    ``best(S)`` is the least width achievable when the vertices of ``S`` are
    eliminated first; eliminating ``v`` after ``S`` costs the number of
    vertices outside ``S + v`` reachable from ``v`` through ``S``.
    """
    n = g.n
    if n == 0:
        return []
    masks = _masks(g)
    full = (1 << n) - 1

    def q_size(s: int, v: int) -> int:
        # vertices outside s|v reachable from v through s
        seen = 1 << v
        frontier = masks[v]
        reach_out = 0
        while frontier:
            inside = frontier & s & ~seen
            reach_out |= frontier & ~s & ~seen
            seen |= frontier
            frontier = 0
            x = inside
            while x:
                low = x & -x
                frontier |= masks[low.bit_length() - 1]
                x ^= low
            frontier &= ~seen
        reach_out &= ~(1 << v)
        return bin(reach_out).count("1")

    @lru_cache(maxsize=None)
    def best(s: int) -> tuple[int, int]:
        if s == 0:
            return (-1, -1)
        top = None
        x = s
        while x:
            low = x & -x
            v = low.bit_length() - 1
            x ^= low
            rest = s ^ low
            w = max(best(rest)[0], q_size(rest, v))
            if top is None or w < top[0]:
                top = (w, v)
        return top

    order = []
    s = full
    while s:
        v = best(s)[1]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    best.cache_clear()
    return order


def td_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Decomposition from an elimination order, components chained by empty bags."""
    if g.n == 0:
        return make_td([()], [])
    pos = {v: i for i, v in enumerate(order)}
    nb = [set(a) for a in g.adj]
    bags, parent_vertex = {}, {}
    for v in order:
        later = {w for w in nb[v] if pos[w] > pos[v]}
        bags[v] = frozenset(later | {v})
        parent_vertex[v] = min(later, key=pos.__getitem__) if later else None
        for a in later:
            nb[a] |= later
            nb[a].discard(a)
    index = {v: i for i, v in enumerate(order)}
    all_bags = [bags[v] for v in order]
    edges = [(index[v], index[p]) for v, p in parent_vertex.items() if p is not None]
    roots = [index[v] for v in order if parent_vertex[v] is None]
    # one root per connected component; chain them through fresh empty bags
    for a, b in zip(roots, roots[1:]):
        hub = len(all_bags)
        all_bags.append(frozenset())
        edges.append((a, hub))
        edges.append((hub, b))
    return contract_td(make_td(all_bags, edges))


def contract_td(td: TreeDecomposition) -> TreeDecomposition:
    """Merge every tree edge whose one bag contains the other."""
    parent = list(range(td.nodes))
    bag = list(td.bags)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in td.tree_edges:
        ra, rb = find(a), find(b)
        if bag[ra] <= bag[rb] or bag[rb] <= bag[ra]:
            keep, drop = (rb, ra) if bag[ra] <= bag[rb] else (ra, rb)
            parent[drop] = keep
    roots = sorted({find(i) for i in range(td.nodes)})
    index = {r: i for i, r in enumerate(roots)}
    edges = {tuple(sorted((index[find(a)], index[find(b)]))) for a, b in td.tree_edges}
    edges = sorted(e for e in edges if e[0] != e[1])
    return make_td([bag[r] for r in roots], edges)


def compute_td(g: Graph, exact_threshold: int = 12) -> TreeDecomposition:
    """A valid decomposition; optimal width when every component is small.

    Components with at most ``exact_threshold`` vertices get an optimal
    elimination order, larger ones the min-fill heuristic.
    """
    if g.n == 0:
        return make_td([()], [])
    order = []
    for comp in connected_components(g):
        sub, back = g.induced(comp)
        local = exact_order(sub) if sub.n <= exact_threshold else min_fill_order(sub)
        order.extend(back[v] for v in local)
    return td_from_order(g, order)


# ---------------------------------------------------------------------------
# nice decompositions


@dataclass(frozen=True)
class NiceNode:
    kind: str          # leaf | introduce | edge | forget | join
    bag: frozenset
    children: tuple
    vertex: Optional[int] = None
    edge: Optional[tuple] = None


@dataclass(frozen=True)
class NiceTD:
    nodes: tuple       # NiceNode, children always precede parents
    root: int

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def count(self, kind: str) -> int:
        return sum(1 for nd in self.nodes if nd.kind == kind)

    def as_td(self) -> TreeDecomposition:
        edges = [(i, c) for i, nd in enumerate(self.nodes) for c in nd.children]
        return make_td([nd.bag for nd in self.nodes], edges)


def make_nice(g: Graph, td: TreeDecomposition) -> NiceTD:
    """Convert ``td`` into a nice decomposition rooted at an empty bag.

    Every edge of ``g`` gets exactly one introduce-edge node, placed just
    below the forget node of whichever endpoint is forgotten first.
    """
    problems = validate_td(g, td)
    if problems:
        raise InvalidDecomposition("; ".join(problems[:5]))
    nodes: list[NiceNode] = []
    done_edges: set = set()

    def add(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def forget(top: int, v: int) -> int:
        bag = nodes[top].bag
        for w in sorted(bag):
            e = norm_edge(v, w)
            if w != v and e in g.edges and e not in done_edges:
                done_edges.add(e)
                top = add(NiceNode("edge", bag, (top,), edge=e))
        return add(NiceNode("forget", bag - {v}, (top,), vertex=v))

    def morph(top: int, target: frozenset) -> int:
        for v in sorted(nodes[top].bag - target):
            top = forget(top, v)
        for v in sorted(target - nodes[top].bag):
            top = add(NiceNode("introduce", nodes[top].bag | {v}, (top,), vertex=v))
        return top

    adj = _tree_adjacency(td)
    # iterative post-order from tree node 0
    parent = {0: None}
    order = [0]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    built: dict[int, int] = {}
    for x in reversed(order):
        bag = td.bags[x]
        kids = [y for y in adj[x] if parent.get(y) == x]
        tops = [morph(built[y], bag) for y in kids]
        if not tops:
            top = add(NiceNode("leaf", frozenset(), ()))
            top = morph(top, bag)
        else:
            top = tops[0]
            for other in tops[1:]:
                top = add(NiceNode("join", bag, (top, other)))
        built[x] = top
    root = morph(built[0], frozenset())
    return NiceTD(tuple(nodes), root)


# ---------------------------------------------------------------------------
# product embeddings and window decompositions


@dataclass(frozen=True)
class ProductEmbedding:
    h: Graph
    h_td: TreeDecomposition
    path_length: int
    placement: tuple       # per G-vertex (h_node, layer), layers 1-based

    def layer(self, v: int) -> int:
        return self.placement[v][1]

    def to_json(self) -> dict:
        return {"h": self.h.to_json(), "h_td": self.h_td.to_json(),
                "path_len": self.path_length,
                "map": [list(p) for p in self.placement]}


def check_embedding(g: Graph, embed: ProductEmbedding) -> list[str]:
    """Problems with ``embed`` as an embedding of ``g`` into ``h ⊠ P``."""
    out = []
    if len(embed.placement) != g.n:
        return [f"placement has {len(embed.placement)} entries for {g.n} vertices"]
    for v, (x, layer) in enumerate(embed.placement):
        if not 0 <= x < embed.h.n:
            out.append(f"vertex {v}: h-node {x} out of range")
        if not 1 <= layer <= embed.path_length:
            out.append(f"vertex {v}: layer {layer} outside [1, {embed.path_length}]")
    if len(set(embed.placement)) != len(embed.placement):
        out.append("placement is not injective")
    for u, v in g.sorted_edges():
        (x1, l1), (x2, l2) = embed.placement[u], embed.placement[v]
        if not (x1 == x2 or embed.h.has_edge(x1, x2)) or abs(l1 - l2) > 1:
            out.append(f"edge ({u}, {v}) is not a strong-product edge")
    return out


def make_embedding(g: Graph, h: Graph, path_length: int, placement,
                   h_td: Optional[TreeDecomposition] = None) -> ProductEmbedding:
    if h_td is None:
        h_td = compute_td(h)
    elif validate_td(h, h_td):
        raise InvalidDecomposition("h_td is not a tree decomposition of h")
    embed = ProductEmbedding(h, h_td, int(path_length),
                             tuple((int(x), int(l)) for x, l in placement))
    problems = check_embedding(g, embed)
    if problems:
        raise InvalidEmbedding("; ".join(problems[:5]))
    return embed


def embedding_from_json(g: Graph, obj) -> ProductEmbedding:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    missing = [k for k in ("h", "path_len", "map") if not isinstance(obj, dict) or k not in obj]
    if missing:
        raise InvalidEmbedding(f"embedding JSON lacks field(s) {', '.join(missing)}")
    h = graph_from_json(obj["h"])
    h_td = td_from_json(obj["h_td"]) if obj.get("h_td") is not None else None
    return make_embedding(g, h, obj["path_len"], obj["map"], h_td)


def window_td(embed: ProductEmbedding, sub_vertices: Iterable[int],
              interval: tuple[int, int], g: Optional[Graph] = None) -> TreeDecomposition:
    """Decomposition of ``G[sub_vertices]`` from the factor's decomposition.

    Each bag ``B`` of ``h_td`` becomes the sub-vertices placed on
    ``B × [lo, hi]``. Bags are over positions in ``sorted(sub_vertices)``,
    matching ``g.induced``. Width is at most ``(hi-lo+1)(w+1) - 1``.
    """
    lo, hi = interval
    subs = sorted(set(sub_vertices))
    for v in subs:
        if not lo <= embed.layer(v) <= hi:
            raise LayerOutOfRange(f"vertex {v} on layer {embed.layer(v)} outside [{lo}, {hi}]")
    by_h: dict[int, list[int]] = {}
    for i, v in enumerate(subs):
        by_h.setdefault(embed.placement[v][0], []).append(i)
    bags = [frozenset(i for x in bag for i in by_h.get(x, ())) for bag in embed.h_td.bags]
    return make_td(bags, embed.h_td.tree_edges)


def chain_tds(parts: list[tuple[TreeDecomposition, list[int]]], n: int) -> TreeDecomposition:
    """Glue decompositions of disjoint vertex sets into one tree.

    ``parts`` holds (decomposition over local indices, local → global map).
    Consecutive parts are joined through a fresh empty bag.
    """
    bags: list = []
    edges: list = []
    anchors = []
    for td, back in parts:
        off = len(bags)
        bags.extend(frozenset(back[i] for i in b) for b in td.bags)
        edges.extend((a + off, b + off) for a, b in td.tree_edges)
        anchors.append(off)
    if not bags:
        return make_td([()], [])
    for a, b in zip(anchors, anchors[1:]):
        hub = len(bags)
        bags.append(frozenset())
        edges.extend([(a, hub), (hub, b)])
    return make_td(bags, edges)
