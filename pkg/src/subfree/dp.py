"""Exact edge-deletion DP over a nice tree decomposition.

A *placement* is a partial copy of one pattern in the processed part of
the graph, recorded only by what the rest of the graph can still see::

    (pattern index, mask of embedded pattern vertices, ((a, x), ...))

where the tuple lists the embedded pattern vertices ``a`` whose image ``x``
is still in the current bag. Pattern vertices mapped to forgotten host
vertices must have all their pattern neighbours embedded (closure), and
every pattern edge touching them is realized by a kept host edge.

Pattern edges between two bag-mapped vertices stay pending until the host
edge is processed: deleting that host edge kills the placement, keeping it
realizes the pattern edge. A DP state is ``(kept bag edges, placements)``
and is discarded as soon as some placement is a complete copy.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

from .graph import Graph, GraphError, PatternFamily, is_family_free, norm_edge
from .treewidth import InvalidDecomposition, NiceTD, TreeDecomposition, make_nice, validate_td

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveOutcome:
    answer: bool
    witness: Optional[tuple] = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def cost(self) -> Optional[int]:
        return None if self.witness is None else len(self.witness)

    def to_json(self) -> dict:
        out = {"answer": "yes" if self.answer else "no",
               "cost": self.cost,
               "witness": [list(e) for e in self.witness] if self.witness is not None else None}
        out.update(self.details)
        return out


def no() -> SolveOutcome:
    return SolveOutcome(False, None)


def yes(witness) -> SolveOutcome:
    return SolveOutcome(True, tuple(sorted(norm_edge(*e) for e in witness)))


def _automorphisms(p: Graph, limit: int = 8) -> list:
    if p.n > limit:
        return [tuple(range(p.n))]
    return [perm for perm in permutations(range(p.n))
            if all(p.has_edge(perm[u], perm[v]) for u, v in p.edges)]


class _Patterns:
    """Bitmask view of the family, with automorphism groups."""

    def __init__(self, fam: PatternFamily):
        self.sizes = [p.n for p in fam.patterns]
        self.full = [(1 << p.n) - 1 for p in fam.patterns]
        self.adj = [[sum(1 << b for b in p.adj[a]) for a in range(p.n)] for p in fam.patterns]
        self.deg = [[p.degree(a) for a in range(p.n)] for p in fam.patterns]
        self.auts = [_automorphisms(p) for p in fam.patterns]
        self.empties = [(i, 0, ()) for i in range(len(fam.patterns))]

    def image(self, perm: tuple, u: int, bm: tuple) -> tuple:
        u2 = 0
        for a in range(len(perm)):
            if u >> a & 1:
                u2 |= 1 << perm[a]
        return u2, tuple(sorted((perm[a], x) for a, x in bm))

    def canon(self, fi: int, u: int, bm: tuple) -> tuple:
        auts = self.auts[fi]
        if len(auts) == 1:
            return (fi, u, bm)
        return (fi,) + min(self.image(perm, u, bm) for perm in auts)

    def orbit(self, p: tuple) -> set:
        fi, u, bm = p
        return {(fi,) + self.image(perm, u, bm) for perm in self.auts[fi]}


def _pending_edges(pat: _Patterns, fi: int, bm: tuple):
    """Host pairs that must be edges for the pending pattern edges of ``bm``."""
    adj = pat.adj[fi]
    for i, (a, x) in enumerate(bm):
        for b, y in bm[i + 1:]:
            if adj[a] >> b & 1:
                yield norm_edge(x, y)


def _complete(pat: _Patterns, placements, kept: frozenset) -> bool:
    for fi, u, bm in placements:
        if u == pat.full[fi] and all(e in kept for e in _pending_edges(pat, fi, bm)):
            return True
    return False


def _prune_deleted(pat: _Patterns, placements, deleted) -> frozenset:
    if not deleted:
        return frozenset(placements)
    return frozenset(p for p in placements
                     if not any(e in deleted for e in _pending_edges(pat, p[0], p[2])))


def _introduce(pat: _Patterns, g: Graph, placements: frozenset, x: int) -> frozenset:
    out = set(placements)
    dx = g.degree(x)
    for fi, u, bm in list(placements) + pat.empties:
        adj = pat.adj[fi]
        deg = pat.deg[fi]
        for a in range(pat.sizes[fi]):
            if u >> a & 1 or deg[a] > dx:
                continue
            # a cannot touch a forgotten image (closure); its bag-mapped
            # neighbours must be host neighbours of x
            if any(adj[a] >> b & 1 and not g.has_edge(x, y) for b, y in bm):
                continue
            out.add(pat.canon(fi, u | 1 << a, tuple(sorted(bm + ((a, x),)))))
    return frozenset(out)


def _viable(pat: _Patterns, g: Graph, p: tuple, gone: frozenset) -> bool:
    # every bag-mapped vertex needs unused, unforgotten host neighbours
    # for its pattern neighbours that are still missing
    fi, u, bm = p
    used = {x for _, x in bm}
    for a, x in bm:
        missing = bin(pat.adj[fi][a] & ~u).count("1")
        if missing and sum(1 for z in g.adj[x] if z not in gone and z not in used) < missing:
            return False
    return True


def _forget(pat: _Patterns, g: Graph, placements: frozenset, x: int,
            kept: frozenset, gone: frozenset) -> frozenset:
    out = set()
    for fi, u, bm in placements:
        hit = next((a for a, y in bm if y == x), None)
        if hit is None:
            p = (fi, u, bm)
        else:
            if pat.adj[fi][hit] & ~u:
                continue
            if any(pat.adj[fi][hit] >> b & 1 and norm_edge(x, y) not in kept
                   for b, y in bm if b != hit):
                continue
            p = pat.canon(fi, u, tuple(q for q in bm if q[0] != hit))
        if _viable(pat, g, p, gone):
            out.add(p)
    return frozenset(out)


def _merge_maps(bm1: tuple, bm2: tuple) -> Optional[tuple]:
    merged = dict(bm1)
    for a, x in bm2:
        if merged.setdefault(a, x) != x:
            return None
    if len(set(merged.values())) != len(merged):
        return None
    return tuple(sorted(merged.items()))


class _JoinCache:
    """Memo tables shared by all join nodes of one DP run.

    Boundary-map compatibility does not depend on the node, and the same
    placement sets recur across many state pairs, so groups get integer
    ids and merge results are computed once per (group, right set).
    """

    def __init__(self, pat: _Patterns):
        self.pat = pat
        self.ids: dict = {}
        self.keys: list = []
        self.left_groups: dict = {}
        self.right_groups: dict = {}
        self.compat: dict = {}
        self.canon: dict = {}

    def gid(self, fi: int, bm: tuple) -> int:
        key = (fi, bm)
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.keys)
            self.keys.append(key)
        return i

    def _grouped(self, placements) -> tuple:
        # (group id, list of (embedded mask, forgotten mask)) per (fi, boundary map)
        groups: dict = {}
        for fi, u, bm in placements:
            d = 0
            for a, _ in bm:
                d |= 1 << a
            groups.setdefault(self.gid(fi, bm), []).append((u, u & ~d))
        return tuple(groups.items())

    def left(self, placements: frozenset) -> tuple:
        out = self.left_groups.get(placements)
        if out is None:
            out = self.left_groups[placements] = self._grouped(placements)
        return out

    def right(self, placements: frozenset) -> tuple[int, tuple]:
        out = self.right_groups.get(placements)
        if out is None:
            orbit = set()
            for p in placements:
                orbit |= self.pat.orbit(p)
            out = self.right_groups[placements] = (len(self.right_groups), self._grouped(orbit))
        return out

    def compatible(self, g1: int, rid: int, rgroups: tuple) -> list:
        key = (g1, rid)
        out = self.compat.get(key)
        if out is None:
            fi, bm1 = self.keys[g1]
            out = []
            for g2, masks2 in rgroups:
                fj, bm2 = self.keys[g2]
                if fj != fi:
                    continue
                bm = _merge_maps(bm1, bm2)
                if bm is not None:
                    out.append((masks2, self.gid(fi, bm)))
            self.compat[key] = out
        return out

    def canonical(self, mid: int, u: int) -> tuple:
        key = (mid, u)
        out = self.canon.get(key)
        if out is None:
            fi, bm = self.keys[mid]
            out = self.canon[key] = self.pat.canon(fi, u, bm)
        return out


def _join(cache: _JoinCache, left: frozenset, right: frozenset) -> set:
    out = set(left) | set(right)
    rid, rgroups = cache.right(right)
    raw: dict = {}
    for g1, masks1 in cache.left(left):
        for masks2, mid in cache.compatible(g1, rid, rgroups):
            us = raw.get(mid)
            if us is None:
                us = raw[mid] = set()
            for u1, f1 in masks1:
                for u2, f2 in masks2:
                    if not (f1 & u2 or f2 & u1):
                        us.add(u1 | u2)
    for mid, us in raw.items():
        for u in us:
            out.add(cache.canonical(mid, u))
    return out


def _introduced_bag_edges(g: Graph, nice: NiceTD) -> list:
    """Per nice node: edges introduced below it with both ends in its bag."""
    intro: list = []
    for nd in nice.nodes:
        if nd.kind == "leaf":
            cur = frozenset()
        elif nd.kind == "edge":
            cur = intro[nd.children[0]] | {nd.edge}
        elif nd.kind == "join":
            cur = intro[nd.children[0]] | intro[nd.children[1]]
        elif nd.kind == "forget":
            cur = frozenset(e for e in intro[nd.children[0]] if nd.vertex not in e)
        else:
            cur = intro[nd.children[0]]
        intro.append(frozenset(cur))
    return intro


def _forgotten(nice: NiceTD) -> list:
    gone: list = []
    for nd in nice.nodes:
        kids = [gone[c] for c in nd.children]
        cur = frozenset().union(*kids)
        if nd.kind == "forget":
            cur = cur | {nd.vertex}
        gone.append(cur)
    return gone


def dp_tables(g: Graph, nice: NiceTD, fam: PatternFamily, budget: int) -> list:
    """Run the DP; per nice node a dict ``state -> (cost, backpointer)``."""
    pat = _Patterns(fam)
    joins = _JoinCache(pat)
    intro = _introduced_bag_edges(g, nice)
    gone = _forgotten(nice)
    tables: list[dict] = []
    for t, nd in enumerate(nice.nodes):
        table: dict = {}

        def offer(key, cost, back):
            if cost > budget:
                return
            old = table.get(key)
            if old is None or cost < old[0]:
                table[key] = (cost, back)

        if nd.kind == "leaf":
            offer((frozenset(), frozenset()), 0, None)
        elif nd.kind == "introduce":
            for key, (c, _) in tables[nd.children[0]].items():
                kept, ps = key
                ps2 = _introduce(pat, g, ps, nd.vertex)
                if not _complete(pat, ps2, kept):
                    offer((kept, ps2), c, key)
        elif nd.kind == "edge":
            e = nd.edge
            for key, (c, _) in tables[nd.children[0]].items():
                kept, ps = key
                kept2 = kept | {e}
                if not _complete(pat, ps, kept2):
                    offer((kept2, ps), c, (key, False))
                offer((kept, _prune_deleted(pat, ps, {e})), c + 1, (key, True))
        elif nd.kind == "forget":
            x = nd.vertex
            for key, (c, _) in tables[nd.children[0]].items():
                kept, ps = key
                ps2 = _forget(pat, g, ps, x, kept, gone[t])
                kept2 = frozenset(e for e in kept if x not in e)
                if not _complete(pat, ps2, kept2):
                    offer((kept2, ps2), c, key)
        elif nd.kind == "join":
            lt, rt = tables[nd.children[0]], tables[nd.children[1]]
            for k1, (c1, _) in lt.items():
                for k2, (c2, _) in rt.items():
                    if c1 + c2 > budget:
                        continue
                    kept = k1[0] | k2[0]
                    deleted = intro[t] - kept
                    ps = _prune_deleted(pat, _join(joins, k1[1], k2[1]), deleted)
                    ps = frozenset(p for p in ps if _viable(pat, g, p, gone[t]))
                    if not _complete(pat, ps, kept):
                        offer((kept, ps), c1 + c2, (k1, k2))
        else:  # pragma: no cover
            raise ValueError(nd.kind)
        tables.append(_drop_dominated(table))
        if not table:
            log.debug("node %d (%s): no state within budget %d", t, nd.kind, budget)
    return tables


def _drop_dominated(table: dict) -> dict:
    # (K, P, c) is useless next to (K, P', c') with P' ⊆ P and c' ≤ c: fewer
    # live partial copies never hurt whatever the rest of the graph does
    groups: dict = {}
    for key, (c, _) in table.items():
        groups.setdefault(key[0], []).append((c, len(key[1]), key))
    out = {}
    for items in groups.values():
        items.sort(key=lambda it: (it[0], it[1]))
        kept: list = []
        for c, _, key in items:
            ps = key[1]
            if any(p <= ps for p in kept):
                continue
            kept.append(ps)
            out[key] = table[key]
    return out


def _witness(nice: NiceTD, tables: list, root_key) -> list:
    out = []
    stack = [(nice.root, root_key)]
    while stack:
        t, key = stack.pop()
        nd = nice.nodes[t]
        _, back = tables[t][key]
        if nd.kind == "leaf":
            continue
        if nd.kind == "edge":
            child_key, deleted = back
            if deleted:
                out.append(nd.edge)
            stack.append((nd.children[0], child_key))
        elif nd.kind == "join":
            stack.append((nd.children[0], back[0]))
            stack.append((nd.children[1], back[1]))
        else:
            stack.append((nd.children[0], back))
    return out


def dp_solve(g: Graph, td: TreeDecomposition, fam: PatternFamily, k: int) -> SolveOutcome:
    """Minimum edge deletion making ``g`` free of ``fam``, if at most ``k``.

    The witness is a minimum-size deletion set and is re-verified before
    being returned.
    """
    if k < 0:
        raise GraphError("budget k must be nonnegative")
    problems = validate_td(g, td)
    if problems:
        raise InvalidDecomposition("; ".join(problems[:5]))
    if k >= g.m:
        log.info("budget %d is at least |E| = %d; computing the exact minimum anyway", k, g.m)
    budget = min(k, g.m)
    nice = make_nice(g, td)
    tables = dp_tables(g, nice, fam, budget)
    root = tables[nice.root]
    if not root:
        return no()
    key = min(root, key=lambda s: root[s][0])
    witness = _witness(nice, tables, key)
    if len(witness) != root[key][0] or not is_family_free(g, fam, witness):
        raise AssertionError("DP witness failed re-verification")
    return yes(witness)
