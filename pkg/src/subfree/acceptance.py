"""The acceptance suite: one function per criterion, each returning a ``Check``.

Shared by ``tests/test_acceptance.py`` and the ``selftest`` CLI command.
All randomness is seeded, so reruns are identical.
"""
from __future__ import annotations

import inspect
import math
import random
import time
from dataclasses import dataclass
from itertools import combinations, permutations, product

from .disks import (arrangement_stats, build_arrangement, intersection_graph, make_disks,
                    minor_model, raw_levels, validate_disks)
from .dp import dp_solve
from .generators import (all_graphs, reduction_trigger_instance, random_dp_instance,
                         random_embedding, random_family, random_graph, small_patterns,
                         sparse_layers)
from .graph import Graph, connected_components, empty_graph, find_copy, path_graph
from .hardness import (SPLITTER_PORTS, build_clause_gadget, build_splitter, build_variable_gadget,
                       clause_port_set, covered_by, is_maximal_tiling, iter_tilings, make_formula,
                       p4_deletion_instance, reduce_formula, solve_1in3, triangle_factor)
from .layering import bfs_layering, layering_from_embedding, solve
from .oracle import oracle_solve
from .treewidth import compute_td, validate_td, window_td

SEED = 20240607


@dataclass(frozen=True)
class Check:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.detail}; {self.seconds:.1f}s)"


def _timed(number: int, title: str, fn) -> Check:
    t0 = time.perf_counter()
    passed, detail = fn()
    return Check(number, title, passed, detail, time.perf_counter() - t0)


def _agree(a, b) -> bool:
    return a.answer == b.answer and a.cost == b.cost


# 1 -------------------------------------------------------------------------

def dp_equivalence(count: int = 500, seed: int = SEED, limit_s: float = 300.0) -> Check:
    def run():
        rng = random.Random(seed)
        pool = small_patterns(4)
        bad = []
        disconnected = 0
        t0 = time.perf_counter()
        for i in range(count):
            g, fam, k = random_dp_instance(rng, max_n=12, max_k=3, pool=pool)
            disconnected += not fam.all_connected()
            got = dp_solve(g, compute_td(g), fam, k)
            want = oracle_solve(g, fam, k)
            if not _agree(got, want):
                bad.append(i)
        took = time.perf_counter() - t0
        ok = not bad and took < limit_s
        return ok, (f"{count - len(bad)}/{count} agree, {disconnected} with disconnected "
                    f"patterns, {took:.1f}s of {limit_s:.0f}s allowed"
                    + (f", mismatches at {bad[:5]}" if bad else ""))
    return _timed(1, "DP answer and minimum cost equal the oracle", run)


# 2 -------------------------------------------------------------------------

def framework_instances(count: int, seed: int):
    """Seeded mix of BFS-layered, product-embedded and reduction-triggering instances."""
    rng = random.Random(seed)
    pool = small_patterns(4)
    tiny = small_patterns(2, with_edgeless=True)
    connected_small = [p for p in tiny if len(connected_components(p)) == 1]
    for i in range(count):
        kind = i % 3
        k = rng.randint(0, 3)
        if kind == 0:
            g = random_graph(rng, rng.randint(4, 14), rng.uniform(0.08, 0.3))
            fam = random_family(rng, pool=tiny if rng.random() < 0.5 else pool)
            yield "bfs", g, bfs_layering(g), fam, k, None
        elif kind == 1:
            fam = random_family(rng, pool=pool)
            length = 6 * fam.r + rng.randint(1, 30)
            occ = sparse_layers(rng, length, rng.randint(2, 4), rng.randint(1, 4))
            g, emb = random_embedding(rng, rng.randint(1, 5), length, rng.randint(4, 14), 0.6, occ)
            yield "embedding", g, layering_from_embedding(g, emb), fam, k, emb
        else:
            comp = rng.choice(connected_small)
            extra = rng.choice(tiny)
            g, lay, fam = reduction_trigger_instance(rng, rng.randint(0, 2), comp, extra)
            yield "trigger", g, lay, fam, k, None


def framework_equivalence(count: int = 300, seed: int = SEED + 1) -> Check:
    def run():
        bad = []
        replaced = pruned = layered = 0
        for i, (kind, g, lay, fam, k, emb) in enumerate(framework_instances(count, seed)):
            got = solve(g, lay, fam, k, embed=emb)
            want = oracle_solve(g, fam, k)
            if not _agree(got, want):
                bad.append((i, kind))
            layered += got.details.get("route") == "layered"
            replaced += bool(got.details.get("replacements"))
            pruned += got.details.get("pruned_vertices", 0) > 0
        ok = not bad and replaced > 0 and pruned > 0
        return ok, (f"{count - len(bad)}/{count} agree; {layered} layered runs, "
                    f"{replaced} with family reduction, {pruned} with pruning"
                    + (f"; mismatches {bad[:5]}" if bad else ""))
    return _timed(2, "layered solver equals the oracle", run)


# 3 -------------------------------------------------------------------------

def splitter_traces(exempt=("g", "h", "h1", "h2", "h3")) -> set:
    sp = build_splitter()
    index = {name: i for i, name in enumerate(sp.names)}
    gh = {sp.ports["g"], sp.ports["h"]}
    traces = set()
    for tiling in iter_tilings(sp.graph, [index[n] for n in exempt]):
        cov = covered_by(tiling)
        if len(cov & gh) == 1:
            traces.add(frozenset(n for n in SPLITTER_PORTS if sp.ports[n] in cov))
    return traces


def variable_tilings(occurrences) -> list:
    """Maximal tilings covering every non-port vertex, with their port pattern.

    Each entry is (covers all positive ports and no negative ones,
    covers all negative ports and no positive ones).
    """
    x = build_variable_gadget(occurrences)
    ports = list(x.ports.values())
    pos = [x.ports[f"h{k}^{j}"] for j, o in enumerate(occurrences, 1) if o for k in (1, 2, 3)]
    neg = [x.ports[f"h{k}^{j}"] for j, o in enumerate(occurrences, 1) if not o for k in (1, 2, 3)]
    out = []
    for tiling in iter_tilings(x.graph, ports):
        if not is_maximal_tiling(x.graph, tiling):
            continue
        cov = covered_by(tiling)
        out.append((all(p in cov for p in pos) and not any(p in cov for p in neg),
                    all(p in cov for p in neg) and not any(p in cov for p in pos)))
    return out


def clause_gadget_tileable(removed) -> bool:
    d = build_clause_gadget()
    drop = {x for j in removed for x in clause_port_set(d, j)}
    sub, _ = d.graph.induced(set(range(d.graph.n)) - drop)
    return triangle_factor(sub) is not None


def gadget_properties() -> Check:
    def run():
        notes = []
        traces = splitter_traces()
        ok1 = traces == {frozenset({"g"}), frozenset({"h", "h1", "h2", "h3"})}
        notes.append(f"splitter traces {sorted(sorted(t) for t in traces)}")
        ok2 = True
        for ell in (1, 2):
            for occ in product((True, False), repeat=ell):
                found = variable_tilings(occ)
                if sorted(found) != [(False, True), (True, False)]:
                    ok2 = False
                    notes.append(f"variable {occ}: {found}")
        notes.append("variable gadgets ℓ≤2: two tilings each" if ok2 else "variable gadget mismatch")
        ok3 = all(clause_gadget_tileable(I) == (len(I) == 2)
                  for r in range(4) for I in combinations((1, 2, 3), r))
        notes.append("clause gadget tileable exactly for |I|=2" if ok3 else "clause gadget mismatch")
        return ok1 and ok2 and ok3, "; ".join(notes)
    return _timed(3, "splitter, variable and clause gadget tilings", run)


# 4 -------------------------------------------------------------------------

def formula_orbits(num_vars: int = 4, max_clauses: int = 3) -> list:
    """One clause set per orbit under renaming variables."""
    all_clauses = [tuple(s * v for s, v in zip(signs, vs))
                   for vs in combinations(range(1, num_vars + 1), 3)
                   for signs in product((1, -1), repeat=3)]
    perms = list(permutations(range(1, num_vars + 1)))

    def canon(cls):
        return min(tuple(sorted(tuple(sorted((1 if x > 0 else -1) * p[abs(x) - 1] for x in cl))
                                for cl in cls)) for p in perms)

    seen = {}
    for m in range(1, max_clauses + 1):
        for cls in combinations(all_clauses, m):
            seen.setdefault(canon(cls), cls)
    return list(seen.values())


def clause_subinstance(false_sets) -> Graph:
    d = build_clause_gadget()
    drop = {x for j in false_sets for x in clause_port_set(d, j)}
    return d.graph.induced(set(range(d.graph.n)) - drop)[0]


def p4_answer(g: Graph) -> bool:
    fam, k = p4_deletion_instance(g)
    if not isinstance(k, int):
        return False
    return solve(g, bfs_layering(g), fam, k).answer


def reduction_equivalence() -> Check:
    def run():
        formulas = formula_orbits()
        bad = []
        sat = 0
        # the clause gadget with the port sets of false literals removed:
        # only 8 distinct graphs, each with at most 15 vertices
        sub_answer = {}
        sub_bad = []
        for r in range(4):
            for I in combinations((1, 2, 3), r):
                h = clause_subinstance(I)
                sub_answer[I] = p4_answer(h)
                if sub_answer[I] != (triangle_factor(h) is not None):
                    sub_bad.append(I)
        for cls in formulas:
            nv = max(abs(x) for cl in cls for x in cl)
            inst = make_formula(nv, cls)
            g, _ = reduce_formula(inst)
            has_factor = triangle_factor(g) is not None
            assignment = solve_1in3(inst)
            sat += assignment is not None
            via_p4 = any(
                all(sub_answer[tuple(j for j, x in enumerate(cl, 1) if (x > 0) != sigma[abs(x) - 1])]
                    for cl in inst.clauses)
                for sigma in product((True, False), repeat=nv))
            if not (has_factor == (assignment is not None) == via_p4):
                bad.append(cls)
        ok = not bad and not sub_bad and len(formulas) >= 50
        return ok, (f"{len(formulas) - len(bad)}/{len(formulas)} formula orbits agree "
                    f"({sat} satisfiable); P4 solver matches tilings on all 8 clause subinstances"
                    if not sub_bad else f"P4 mismatch on {sub_bad}")
    return _timed(4, "triangle factor of the reduced graph iff 1-in-3 satisfiable", run)


# 5 -------------------------------------------------------------------------

def is_triangle_union(g: Graph) -> bool:
    return all(len(c) == 3 and g.induced(c)[0].m == 3 for c in connected_components(g))


def erdos_gallai_p4(max_n: int = 6) -> Check:
    def run():
        p4 = path_graph(4)
        checked = free = tight = 0
        bad = []
        for n in range(1, max_n + 1):
            for g in all_graphs(n):
                checked += 1
                if find_copy(g, p4) is not None:
                    continue
                free += 1
                tight += g.m == g.n
                if g.m > g.n or (g.m == g.n) != is_triangle_union(g):
                    bad.append(g)
        return not bad, (f"{checked} labelled graphs, {free} P4-free, {tight} with |E|=|V|, "
                         f"{len(bad)} exceptions")
    return _timed(5, "P4-free graphs on ≤ 6 vertices have |E| ≤ |V|", run)


# 6 -------------------------------------------------------------------------

def two_crossing_shape() -> bool:
    ds = make_disks([("0", "0", "1"), ("1", "0", "1")])
    arr = build_arrangement(ds)
    fg = arr.face_graph
    degrees_two = all(fg.degree(v) == 2 for v in range(fg.n))
    return (len(arr.faces) == 4 and fg.m == 4 and degrees_two
            and arrangement_stats(arr) == (2, 1)
            and sorted(f.depth for f in arr.faces) == [(), (0,), (0, 1), (1,)])


def disk_invariants(count: int = 100, seed: int = SEED + 6) -> Check:
    from .generators import random_disk_set

    def run():
        rng = random.Random(seed)
        bad = []
        unbounded = 0
        for i in range(count):
            ds = random_disk_set(rng, rng.randint(1, 30), box=rng.choice([6.0, 10.0, 15.0]))
            if validate_disks(ds):
                bad.append((i, "validator"))
                continue
            arr = build_arrangement(ds)
            p, rho = arrangement_stats(arr)
            if not arr.euler_ok():
                bad.append((i, "euler"))
            if rho == math.inf:
                unbounded += 1
                continue
            if p > 2 * rho + 1:
                bad.append((i, "ply"))
            minor_model(ds, arr)        # raises if any condition fails
            lam = raw_levels(arr)
            if any(abs(lam[u] - lam[v]) > 4 * rho for u, v in intersection_graph(ds).edges):
                bad.append((i, "levels"))
        shape = two_crossing_shape()
        return not bad and shape, (f"{count - len(bad)}/{count} disk sets pass, {unbounded} "
                                   f"with infinite local radius; two-crossing shape "
                                   f"{'ok' if shape else 'WRONG'}" + (f"; {bad[:5]}" if bad else ""))
    return _timed(6, "disk arrangement invariants", run)


# 7 -------------------------------------------------------------------------

def window_decompositions(count: int = 100, seed: int = SEED + 7) -> Check:
    def run():
        rng = random.Random(seed)
        bad = []
        for i in range(count):
            length = rng.randint(1, 12)
            g, emb = random_embedding(rng, rng.randint(1, 5), length,
                                      rng.randint(1, 5 * length), rng.uniform(0.3, 0.9))
            lo = rng.randint(1, length)
            hi = rng.randint(lo, length)
            sub = [v for v in range(g.n) if lo <= emb.layer(v) <= hi]
            td = window_td(emb, sub, (lo, hi))
            h_sub, _ = g.induced(sub)
            bound = (hi - lo + 1) * (emb.h_td.width + 1) - 1
            if validate_td(h_sub, td) or td.width > bound:
                bad.append(i)
        return not bad, f"{count - len(bad)}/{count} window decompositions valid within bound"
    return _timed(7, "window decompositions are valid and within the width bound", run)


# 8 -------------------------------------------------------------------------

def brute_treewidth(g: Graph) -> int:
    """Least elimination width over all orders (depth-first, pruned)."""
    if g.n == 0:
        return -1
    best = [g.n - 1]

    def rec(nb: dict, width: int):
        if width >= best[0]:
            return
        if len(nb) <= width + 1:
            best[0] = width
            return
        for v in sorted(nb):
            later = nb[v]
            rest = {a: (s | later) - {a, v} if a in later else s for a, s in nb.items() if a != v}
            rec(rest, max(width, len(later)))

    rec({v: set(g.adj[v]) for v in range(g.n)}, 0)
    return best[0]


def exact_widths(count: int = 150, seed: int = SEED + 8) -> Check:
    def run():
        rng = random.Random(seed)
        bad = []
        graphs = [empty_graph(1), path_graph(8)]
        graphs += [random_graph(rng, rng.randint(1, 8), rng.uniform(0.1, 0.9)) for _ in range(count)]
        for i, g in enumerate(graphs):
            td = compute_td(g)
            if validate_td(g, td) or td.width != max(brute_treewidth(g), 0):
                bad.append(i)
        return not bad, f"{len(graphs) - len(bad)}/{len(graphs)} graphs at exact width"
    return _timed(8, "compute_td is optimal on graphs with ≤ 8 vertices", run)


CRITERIA = {
    1: dp_equivalence,
    2: framework_equivalence,
    3: gadget_properties,
    4: reduction_equivalence,
    5: erdos_gallai_p4,
    6: disk_invariants,
    7: window_decompositions,
    8: exact_widths,
}


def run_all(selected=None, echo=print, seed=None) -> list[Check]:
    """Run the criteria in order. A ``seed`` replaces the base seed of every
    randomized criterion (criterion n uses ``seed + n - 1``)."""
    out = []
    for number, fn in CRITERIA.items():
        if selected and number not in selected:
            continue
        kwargs = {}
        if seed is not None and "seed" in inspect.signature(fn).parameters:
            kwargs["seed"] = seed + number - 1
        check = fn(**kwargs)
        if echo:
            echo(check.line())
        out.append(check)
    return out
