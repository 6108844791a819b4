"""Brute-force ground truth for edge deletion.

Two independent strategies: a bounded search tree that branches on the
edges of a found copy, and plain enumeration of edge subsets by size.
Neither touches the tree-decomposition code.
"""
from __future__ import annotations

from itertools import combinations
from typing import Optional

from .dp import SolveOutcome, no, yes
from .graph import Graph, PatternFamily, copy_edges, find_copy, is_family_free


def _some_copy(g: Graph, fam: PatternFamily, deleted: set) -> Optional[list]:
    for p in fam.patterns:
        emb = find_copy(g, p, deleted)
        if emb is not None:
            return copy_edges(p, emb)
    return None


def _branch(g: Graph, fam: PatternFamily, deleted: set, budget: int) -> Optional[set]:
    edges = _some_copy(g, fam, deleted)
    if edges is None:
        return set(deleted)
    if budget == 0 or not edges:
        return None
    for e in edges:
        deleted.add(e)
        found = _branch(g, fam, deleted, budget - 1)
        deleted.discard(e)
        if found is not None:
            return found
    return None


def oracle_solve(g: Graph, fam: PatternFamily, k: int) -> SolveOutcome:
    """Minimum deletion set of size at most ``k`` by iterative deepening."""
    for budget in range(k + 1):
        found = _branch(g, fam, set(), budget)
        if found is not None:
            return yes(found)
        edges = _some_copy(g, fam, set())
        if edges is not None and not edges:
            # an edgeless copy survives every deletion
            return no()
    return no()


def subset_solve(g: Graph, fam: PatternFamily, k: int) -> SolveOutcome:
    """Same question, answered by trying every edge subset of size ≤ k."""
    edges = g.sorted_edges()
    for size in range(min(k, len(edges)) + 1):
        for subset in combinations(edges, size):
            if is_family_free(g, fam, subset):
                return yes(subset)
    return no()
