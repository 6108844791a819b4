"""Layered solving: windows of 3r layers, family reduction, middle-layer pruning.

The pipeline for a graph with a layering (every edge spans at most one
layer boundary) and a family whose patterns have at most ``r`` vertices:

1. Group layers into windows ``[3(j-1)r + 1, 3jr]``.
2. If some component ``C`` of a pattern ``F`` has copies inside at least
   ``k + r`` odd windows, any solution must already destroy every copy of
   ``F - C``: replace ``F`` by ``F - C`` (or answer no when ``F = C``).
3. Every odd window holding no copy of any pattern component loses its
   middle ``r`` layers. No copy of a pattern can use those vertices.
4. Solve what is left with the tree-decomposition DP.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from .dp import SolveOutcome, dp_solve
from .graph import (Graph, GraphError, PatternFamily, bfs_distances, connected_components,
                    find_copy, make_family)
from .treewidth import (InvalidEmbedding, ProductEmbedding, TreeDecomposition, chain_tds,
                        check_embedding, compute_td, window_td)

log = logging.getLogger(__name__)


class InvalidLayering(GraphError):
    pass


@dataclass(frozen=True)
class Layering:
    layer_of: tuple        # per vertex, 1-based
    num_layers: int

    def layer(self, v: int) -> int:
        return self.layer_of[v]

    def vertices_in(self, lo: int, hi: int) -> list[int]:
        return [v for v, l in enumerate(self.layer_of) if lo <= l <= hi]

    def to_json(self) -> dict:
        return {"num_layers": self.num_layers, "layer_of": list(self.layer_of)}


def check_layering(g: Graph, lay: Layering) -> list[str]:
    out = []
    if len(lay.layer_of) != g.n:
        return [f"layering covers {len(lay.layer_of)} vertices, graph has {g.n}"]
    for v, l in enumerate(lay.layer_of):
        if not 1 <= l <= lay.num_layers:
            out.append(f"vertex {v} on layer {l} outside [1, {lay.num_layers}]")
    for u, v in g.sorted_edges():
        if abs(lay.layer_of[u] - lay.layer_of[v]) > 1:
            out.append(f"edge ({u}, {v}) spans layers {lay.layer_of[u]} and {lay.layer_of[v]}")
    return out


def make_layering(g: Graph, layer_of, num_layers: Optional[int] = None) -> Layering:
    layer_of = tuple(int(l) for l in layer_of)
    if num_layers is None:
        num_layers = max(layer_of, default=1)
    lay = Layering(layer_of, max(int(num_layers), 1))
    problems = check_layering(g, lay)
    if problems:
        raise InvalidLayering("; ".join(problems[:5]))
    return lay


def layering_from_embedding(g: Graph, embed: ProductEmbedding) -> Layering:
    problems = check_embedding(g, embed)
    if problems:
        raise InvalidEmbedding("; ".join(problems[:5]))
    return make_layering(g, (l for _, l in embed.placement), embed.path_length)


def bfs_layering(g: Graph, roots=None) -> Layering:
    """Layer = 1 + BFS distance from the roots.

    Components without a root are rooted at their smallest vertex.
    """
    roots = sorted(set(roots)) if roots is not None else []
    covered = bfs_distances(g, roots) if roots else [None] * g.n
    for comp in connected_components(g):
        if covered[comp[0]] is None:
            roots.append(comp[0])
    dist = bfs_distances(g, roots)
    return make_layering(g, [d + 1 for d in dist])


@dataclass(frozen=True)
class WindowPlan:
    r: int
    windows: tuple          # (lo, hi) for j = 1, 2, ...
    members: tuple          # vertex lists, one per window

    def odd(self) -> list[int]:
        """Zero-based positions of the odd-numbered windows (j = 1, 3, ...)."""
        return list(range(0, len(self.windows), 2))

    def middle(self, pos: int) -> tuple[int, int]:
        lo = self.windows[pos][0]
        return lo + self.r, lo + 2 * self.r - 1


def window_plan(lay: Layering, r: int) -> WindowPlan:
    if r < 1:
        raise GraphError("r must be positive")
    width = 3 * r
    count = max(1, -(-lay.num_layers // width))
    wins = tuple((j * width + 1, (j + 1) * width) for j in range(count))
    return WindowPlan(r, wins, tuple(tuple(lay.vertices_in(lo, hi)) for lo, hi in wins))


@dataclass(frozen=True)
class Infeasible:
    reason: str

    def __bool__(self) -> bool:
        return False


class _WindowCopies:
    """Memoized 'does window j contain a copy of graph C' queries."""

    def __init__(self, g: Graph, plan: WindowPlan):
        self.subs = [g.induced(vs)[0] for vs in plan.members]
        self.cache: dict = {}

    def has(self, pos: int, c: Graph) -> bool:
        key = (pos, c.n, c.edges)
        if key not in self.cache:
            self.cache[key] = find_copy(self.subs[pos], c) is not None
        return self.cache[key]


def _components(p: Graph) -> list[tuple[list[int], Graph]]:
    return [(comp, p.induced(comp)[0]) for comp in connected_components(p)]


def reduce_family(g: Graph, plan: WindowPlan, fam: PatternFamily, k: int,
                  trace: Optional[list] = None) -> Union[PatternFamily, Infeasible]:
    """Drop pattern components that occur in too many far-apart windows.

    ``r`` stays at ``plan.r`` throughout. Each replacement is appended to
    ``trace`` as ``(pattern index, removed component vertices)``.
    """
    wc = _WindowCopies(g, plan)
    odd = plan.odd()
    r = plan.r
    if fam.all_connected():
        hit = [pos for pos in range(len(plan.windows))
               if any(wc.has(pos, p) for p in fam.patterns)]
        if len(hit) > k:
            return Infeasible(f"{len(hit)} disjoint windows hold a pattern copy, budget {k}")
    pats = list(fam.patterns)
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(pats):
            for comp, c in _components(p):
                count = sum(1 for pos in odd if wc.has(pos, c))
                if count < k + r:
                    continue
                if len(comp) == p.n:
                    return Infeasible(f"connected pattern {i} occurs in {count} odd windows")
                rest = [v for v in range(p.n) if v not in set(comp)]
                pats[i] = p.induced(rest)[0]
                if trace is not None:
                    trace.append((i, comp))
                changed = True
                break
            if changed:
                break
    return make_family(pats, r=fam.r)


def prune_middle_layers(g: Graph, lay: Layering, plan: WindowPlan,
                        fam: PatternFamily) -> tuple[Graph, list[int]]:
    """Delete the middle layers of odd windows free of pattern components.

    Returns the remaining induced subgraph and the map from its vertices
    back to vertices of ``g``.
    """
    wc = _WindowCopies(g, plan)
    comps = []
    for p in fam.patterns:
        for _, c in _components(p):
            if all(c.edges != d.edges or c.n != d.n for d in comps):
                comps.append(c)
    dropped = set()
    for pos in plan.odd():
        if not any(wc.has(pos, c) for c in comps):
            lo, hi = plan.middle(pos)
            dropped.update(lay.vertices_in(lo, hi))
    keep = [v for v in range(g.n) if v not in dropped]
    sub, back = g.induced(keep)
    return sub, back


def _product_td(sub: Graph, back: list[int], embed: ProductEmbedding) -> TreeDecomposition:
    parts = []
    for comp in connected_components(sub):
        orig = [back[v] for v in comp]
        layers = [embed.layer(v) for v in orig]
        td = window_td(embed, orig, (min(layers), max(layers)))
        # window_td numbers bag entries by position in sorted(orig)
        index = {v: i for i, v in enumerate(back)}
        order = sorted(orig)
        parts.append((td, [index[v] for v in order]))
    return chain_tds(parts, sub.n)


def _decompose(sub: Graph, back: list[int], embed: Optional[ProductEmbedding],
               exact_threshold: int) -> tuple[TreeDecomposition, str]:
    heuristic = compute_td(sub, exact_threshold)
    if embed is None:
        return heuristic, "heuristic"
    product = _product_td(sub, back, embed)
    if heuristic.width < product.width:
        return heuristic, "heuristic"
    return product, "product"


def solve(g: Graph, lay: Layering, fam: PatternFamily, k: int,
          embed: Optional[ProductEmbedding] = None,
          exact_threshold: int = 12) -> SolveOutcome:
    """Decide edge deletion using the layering; exact minimum witness on yes."""
    if k < 0:
        raise GraphError("budget k must be nonnegative")
    problems = check_layering(g, lay)
    if problems:
        raise InvalidLayering("; ".join(problems[:5]))
    r = fam.r
    details: dict = {"num_layers": lay.num_layers, "r": r}
    if lay.num_layers <= 6 * r:
        td, source = _decompose(g, list(range(g.n)), embed, exact_threshold)
        out = dp_solve(g, td, fam, k)
        details.update(route="direct", td_source=source, td_width=td.width)
        return SolveOutcome(out.answer, out.witness, details)
    plan = window_plan(lay, r)
    trace: list = []
    reduced = reduce_family(g, plan, fam, k, trace)
    details.update(route="layered", windows=len(plan.windows), replacements=trace)
    if isinstance(reduced, Infeasible):
        details["infeasible"] = reduced.reason
        return SolveOutcome(False, None, details)
    sub, back = prune_middle_layers(g, lay, plan, reduced)
    td, source = _decompose(sub, back, embed, exact_threshold)
    details.update(pruned_vertices=g.n - sub.n, td_source=source, td_width=td.width)
    out = dp_solve(sub, td, reduced, k)
    if not out.answer:
        return SolveOutcome(False, None, details)
    lifted = [(back[u], back[v]) for u, v in out.witness]
    return SolveOutcome(True, tuple(sorted(lifted)), details)
