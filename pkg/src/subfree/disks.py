"""Disk families: arrangement faces, ply, local radius, blow-up and minor model.

Input coordinates are exact rationals. Degeneracy predicates (identical
disks, tangencies, three boundaries through one point) run in exact or
ε-guarded arithmetic; intersection points and angles are doubles.
Faces are traced on the planar map whose vertices are boundary crossings
and whose edges are circular arcs.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .graph import Graph, GraphError, bfs_distances, build_graph, complete_graph, strong_product
from .layering import Layering, make_layering

DEFAULT_EPS = Fraction(1, 10 ** 9)
TAU = 2 * math.pi


class DegenerateInput(GraphError):
    pass


class ModelInvalid(GraphError):
    pass


class UnboundedRadius(GraphError):
    pass


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        value = repr(value)
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class DiskSet:
    disks: tuple           # (x, y, r) as Fractions
    eps: Fraction = DEFAULT_EPS

    def __len__(self) -> int:
        return len(self.disks)

    @cached_property
    def _float_disks(self) -> tuple:
        return tuple(tuple(float(c) for c in d) for d in self.disks)

    def floats(self, i: int) -> tuple[float, float, float]:
        return self._float_disks[i]

    def to_json(self) -> list:
        return [{"x": _dec(x), "y": _dec(y), "r": _dec(r)} for x, y, r in self.disks]


def _dec(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10 ** digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def make_disks(triples, eps=DEFAULT_EPS) -> DiskSet:
    disks = []
    for i, t in enumerate(triples):
        x, y, r = (_exact(c) for c in t)
        if r <= 0:
            raise GraphError(f"disk {i}: radius must be positive")
        disks.append((x, y, r))
    return DiskSet(tuple(disks), _exact(eps))


def disks_from_json(obj, eps=DEFAULT_EPS) -> DiskSet:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, list):
        raise GraphError("disk JSON must be a list of {x, y, r} objects")
    triples = []
    for i, d in enumerate(obj):
        if not isinstance(d, dict) or any(k not in d for k in ("x", "y", "r")):
            raise GraphError(f"disk {i}: needs fields x, y, r")
        try:
            triples.append((_exact(d["x"]), _exact(d["y"]), _exact(d["r"])))
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"disk {i}: bad number ({exc})") from None
    return make_disks(triples, eps)


# ---------------------------------------------------------------------------
# predicates


def _pair_relation(a, b, eps: Fraction) -> str:
    """'identical', 'tangent', 'cross', 'apart' or 'nested' for two disks."""
    (x1, y1, r1), (x2, y2, r2) = a, b
    if a == b:
        return "identical"
    d2 = (x1 - x2) ** 2 + (y1 - y2) ** 2
    outer = r1 + r2
    inner = abs(r1 - r2)
    # |d - s| <= eps  <=>  (s - eps)^2 <= d^2 <= (s + eps)^2 for s >= eps
    for s in (outer, inner):
        lo = max(s - eps, Fraction(0))
        if lo * lo <= d2 <= (s + eps) ** 2:
            if s == inner and d2 == 0:
                return "nested"     # concentric, different radii
            return "tangent"
    if d2 > outer * outer:
        return "apart"
    if d2 < inner * inner:
        return "nested"
    return "cross"


def disks_intersect(a, b) -> bool:
    (x1, y1, r1), (x2, y2, r2) = a, b
    return (x1 - x2) ** 2 + (y1 - y2) ** 2 <= (r1 + r2) ** 2


def _crossing_points(a, b) -> list[tuple[float, float]]:
    x1, y1, r1 = (float(c) for c in a)
    x2, y2, r2 = (float(c) for c in b)
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    along = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - along * along, 0.0))
    mx, my = x1 + along * dx / d, y1 + along * dy / d
    return [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]


def validate_disks(ds: DiskSet) -> list[str]:
    """Degeneracies that would make the arrangement ill-defined; empty means safe."""
    out = []
    eps = float(ds.eps)
    crossing = []
    for i, j in combinations(range(len(ds)), 2):
        rel = _pair_relation(ds.disks[i], ds.disks[j], ds.eps)
        if rel == "identical":
            out.append(f"identical pair: disks {i} and {j}")
        elif rel == "tangent":
            out.append(f"tangency: disks {i} and {j}")
        elif rel == "cross":
            crossing.append((i, j))
    for i, j in crossing:
        for p in _crossing_points(ds.disks[i], ds.disks[j]):
            for c in range(len(ds)):
                if c in (i, j):
                    continue
                x, y, r = ds.floats(c)
                if abs(math.hypot(p[0] - x, p[1] - y) - r) <= eps:
                    trio = tuple(sorted((i, j, c)))
                    msg = f"triple boundary point: disks {trio[0]}, {trio[1]}, {trio[2]}"
                    if msg not in out:
                        out.append(msg)
    return out


def intersection_graph(ds: DiskSet) -> Graph:
    return build_graph(len(ds), [(i, j) for i, j in combinations(range(len(ds)), 2)
                                 if disks_intersect(ds.disks[i], ds.disks[j])])


# ---------------------------------------------------------------------------
# arrangement


@dataclass(frozen=True)
class Face:
    depth: tuple            # sorted indices of the disks containing the face
    sample: tuple           # interior point (x, y)
    half_edges: tuple       # boundary half-edges, all cycles


@dataclass(frozen=True)
class Arrangement:
    disks: DiskSet
    faces: tuple
    adjacency: tuple        # sorted face pairs sharing an arc
    outer: int
    disk_faces: tuple       # per disk, sorted faces inside it
    num_vertices: int
    num_arcs: int
    num_components: int

    @cached_property
    def face_graph(self) -> Graph:
        return build_graph(len(self.faces), self.adjacency)

    @cached_property
    def local_radius(self) -> float:
        fg = self.face_graph
        return max((graph_radius(fg, fs) for fs in self.disk_faces), default=0)

    def euler_ok(self) -> bool:
        return self.num_vertices - self.num_arcs + len(self.faces) == 1 + self.num_components


@dataclass
class _HalfEdge:
    circle: int
    forward: bool           # counterclockwise along the circle
    start: float            # angle at origin vertex
    end: float              # angle at target vertex (ccw sweep from start if forward)
    origin: int
    target: int


def _arc_area(ds: DiskSet, he: _HalfEdge) -> float:
    x, y, r = ds.floats(he.circle)
    a, b = (he.start, he.end) if he.forward else (he.end, he.start)
    if b <= a:
        b += TAU
    val = 0.5 * (r * x * (math.sin(b) - math.sin(a)) - r * y * (math.cos(b) - math.cos(a))
                 + r * r * (b - a))
    return val if he.forward else -val


def _ccw_span(he: _HalfEdge) -> tuple[float, float]:
    a, b = (he.start, he.end) if he.forward else (he.end, he.start)
    if b <= a:
        b += TAU
    return a, b


def _in_span(t: float, a: float, b: float) -> bool:
    t = (t - a) % TAU
    return t <= b - a


def _inside_cycle(ds: DiskSet, edges: list, cycle: list, q: tuple) -> bool:
    # horizontal ray to +x, count crossings with the cycle's arcs
    qx, qy = q
    hits = 0
    for h in cycle:
        he = edges[h]
        x, y, r = ds.floats(he.circle)
        dy = qy - y
        if abs(dy) >= r:
            continue
        w = math.sqrt(r * r - dy * dy)
        a, b = _ccw_span(he)
        for px in (x - w, x + w):
            if px > qx and _in_span(math.atan2(dy, px - x), a, b):
                hits += 1
    return hits % 2 == 1


def _arc_point(ds: DiskSet, circle: int, t: float) -> tuple[float, float]:
    x, y, r = ds.floats(circle)
    return (x + r * math.cos(t), y + r * math.sin(t))


def build_arrangement(ds: DiskSet) -> Arrangement:
    problems = validate_disks(ds)
    if problems:
        raise DegenerateInput("; ".join(problems[:5]))
    n = len(ds)
    eps = float(ds.eps)
    # vertices: boundary crossings, plus one dummy point per crossing-free circle
    points: list[tuple[float, float]] = []
    on_circle: list[list[tuple[float, int]]] = [[] for _ in range(n)]
    circle_adj: list[set] = [set() for _ in range(n)]
    for i, j in combinations(range(n), 2):
        if _pair_relation(ds.disks[i], ds.disks[j], ds.eps) != "cross":
            continue
        circle_adj[i].add(j)
        circle_adj[j].add(i)
        for p in _crossing_points(ds.disks[i], ds.disks[j]):
            vid = len(points)
            points.append(p)
            for c in (i, j):
                x, y, _ = ds.floats(c)
                on_circle[c].append((math.atan2(p[1] - y, p[0] - x), vid))
    for c in range(n):
        if not on_circle[c]:
            vid = len(points)
            points.append(_arc_point(ds, c, 0.0))
            on_circle[c].append((0.0, vid))
    edges: list[_HalfEdge] = []
    out_at: list[list[tuple[float, int]]] = [[] for _ in points]
    for c in range(n):
        ring = sorted(on_circle[c])
        for a, b in zip(ring, ring[1:]):
            if b[0] - a[0] <= eps:
                raise DegenerateInput(f"crossings on circle {c} closer than epsilon")
        m = len(ring)
        for i in range(m):
            (ta, va), (tb, vb) = ring[i], ring[(i + 1) % m]
            fwd = _HalfEdge(c, True, ta, tb, va, vb)
            bwd = _HalfEdge(c, False, tb, ta, vb, va)
            hid = len(edges)
            edges.extend([fwd, bwd])
            out_at[va].append(((ta + math.pi / 2) % TAU, hid))
            out_at[vb].append(((tb - math.pi / 2) % TAU, hid + 1))
    rotation = []
    pos_in_rotation = {}
    for v, outs in enumerate(out_at):
        ring = [h for _, h in sorted(outs)]
        rotation.append(ring)
        for i, h in enumerate(ring):
            pos_in_rotation[h] = i

    def twin(h: int) -> int:
        return h ^ 1

    def nxt(h: int) -> int:
        t = twin(h)
        ring = rotation[edges[t].origin]
        return ring[(pos_in_rotation[t] - 1) % len(ring)]

    cycle_of = [-1] * len(edges)
    cycles: list[list[int]] = []
    for h in range(len(edges)):
        if cycle_of[h] >= 0:
            continue
        cyc = []
        x = h
        while cycle_of[x] < 0:
            cycle_of[x] = len(cycles)
            cyc.append(x)
            x = nxt(x)
        cycles.append(cyc)
    areas = [sum(_arc_area(ds, edges[h]) for h in cyc) for cyc in cycles]

    # drawing components: circles linked by crossings
    comp_of = [-1] * n
    ncomp = 0
    for s in range(n):
        if comp_of[s] >= 0:
            continue
        stack = [s]
        comp_of[s] = ncomp
        while stack:
            c = stack.pop()
            for d in circle_adj[c]:
                if comp_of[d] < 0:
                    comp_of[d] = ncomp
                    stack.append(d)
        ncomp += 1
    cyc_comp = [comp_of[edges[cyc[0]].circle] for cyc in cycles]
    for comp in range(ncomp):
        nv = len({edges[h].origin for h, e in enumerate(edges) if comp_of[e.circle] == comp})
        na = sum(1 for e in edges if comp_of[e.circle] == comp) // 2
        nf = sum(1 for cc in cyc_comp if cc == comp)
        if nv - na + nf != 2:
            raise DegenerateInput(f"Euler relation fails on drawing component {comp}")
        if sum(1 for ci, cc in enumerate(cyc_comp) if cc == comp and areas[ci] < 0) != 1:
            raise DegenerateInput(f"drawing component {comp} lacks a unique outer boundary")

    positive = [ci for ci in range(len(cycles)) if areas[ci] > 0]
    negative = [ci for ci in range(len(cycles)) if areas[ci] < 0]
    # each outer boundary sits in the smallest bounded cycle of another
    # component that surrounds it, or in the unbounded face
    holes_of: dict[int, list[int]] = {ci: [] for ci in positive}
    unbounded = []
    for ci in negative:
        comp = cyc_comp[ci]
        probe_circle = edges[cycles[ci][0]].circle
        q = _arc_point(ds, probe_circle, 0.7390851332)
        best = None
        for cj in positive:
            if cyc_comp[cj] == comp:
                continue
            if _inside_cycle(ds, edges, cycles[cj], q):
                if best is None or areas[cj] < areas[best]:
                    best = cj
        (unbounded if best is None else holes_of[best]).append(ci)

    face_cycles = [unbounded] + [[ci] + holes_of[ci] for ci in sorted(positive, key=lambda c: min(cycles[c]))]
    face_of_cycle = {}
    for f, cs in enumerate(face_cycles):
        for ci in cs:
            face_of_cycle[ci] = f
    face_of = [face_of_cycle[cycle_of[h]] for h in range(len(edges))]
    nfaces = len(face_cycles)
    adj = set()
    for h in range(0, len(edges), 2):
        a, b = face_of[h], face_of[h + 1]
        if a == b:
            raise DegenerateInput("an arc has the same face on both sides")
        adj.add((min(a, b), max(a, b)))
    adjacency = tuple(sorted(adj))

    # depth sets: toggle across arcs starting from the unbounded face
    depth: list[Optional[frozenset]] = [None] * nfaces
    depth[0] = frozenset()
    via = [[] for _ in range(nfaces)]
    for h in range(0, len(edges), 2):
        a, b = face_of[h], face_of[h + 1]
        via[a].append((b, edges[h].circle))
        via[b].append((a, edges[h].circle))
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for g, c in via[f]:
            want = depth[f] ^ {c}
            if depth[g] is None:
                depth[g] = want
                queue.append(g)
            elif depth[g] != want:
                raise DegenerateInput(f"inconsistent depth toggling at face {g}")

    faces = []
    for f, cs in enumerate(face_cycles):
        hs = sorted(h for ci in cs for h in cycles[ci])
        sample = _sample_point(ds, edges, hs, eps)
        seen = _containing(ds, sample, eps)
        if seen != depth[f]:
            raise DegenerateInput(f"face {f}: sample point depth {sorted(seen)} "
                                  f"disagrees with toggled depth {sorted(depth[f])}")
        faces.append(Face(tuple(sorted(depth[f])), sample, tuple(hs)))
    disk_faces = tuple(tuple(f for f in range(nfaces) if d in faces[f].depth) for d in range(n))
    arr = Arrangement(ds, tuple(faces), adjacency, 0, disk_faces, len(points),
                      len(edges) // 2, ncomp)
    if not arr.euler_ok():
        raise DegenerateInput("global Euler relation fails")
    return arr


def _sample_point(ds: DiskSet, edges: list, hs: list, eps: float) -> tuple:
    # midpoint of the longest arc, nudged into the face on the left
    best = max(hs, key=lambda h: (_ccw_span(edges[h])[1] - _ccw_span(edges[h])[0]) * ds.floats(edges[h].circle)[2])
    he = edges[best]
    a, b = _ccw_span(he)
    t = (a + b) / 2
    x, y, r = ds.floats(he.circle)
    mx, my = _arc_point(ds, he.circle, t)
    gap = r
    for c in range(len(ds)):
        if c != he.circle:
            cx, cy, cr = ds.floats(c)
            gap = min(gap, abs(math.hypot(mx - cx, my - cy) - cr))
    delta = 0.5 * gap
    if delta <= eps:
        raise DegenerateInput("face too thin to place a sample point")
    inward = -1.0 if he.forward else 1.0
    return (mx + inward * delta * math.cos(t), my + inward * delta * math.sin(t))


def _containing(ds: DiskSet, p: tuple, eps: float) -> frozenset:
    inside = set()
    for c in range(len(ds)):
        x, y, r = ds.floats(c)
        gap = math.hypot(p[0] - x, p[1] - y) - r
        if abs(gap) <= eps:
            raise DegenerateInput(f"sample point on the boundary of disk {c}")
        if gap < 0:
            inside.add(c)
    return frozenset(inside)


# ---------------------------------------------------------------------------
# statistics


def graph_radius(g: Graph, vertices=None) -> float:
    """Radius of the induced subgraph on ``vertices``; ``inf`` if disconnected."""
    allowed = set(range(g.n) if vertices is None else vertices)
    if not allowed:
        return 0
    local = {v: [w for w in g.adj[v] if w in allowed] for v in allowed}
    best = math.inf
    for s in sorted(allowed):
        dist = {s: 0}
        frontier = [s]
        level = 0
        while frontier:
            if level >= best:
                break       # this source cannot beat the current radius
            level += 1
            nxt = []
            for v in frontier:
                for w in local[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        if frontier:
            continue
        if len(dist) < len(allowed):
            return math.inf
        best = min(best, max(dist.values()))
    return best


def ply(arr: Arrangement) -> int:
    return max((len(f.depth) for f in arr.faces), default=0)


def local_radius(arr: Arrangement) -> float:
    return arr.local_radius


def arrangement_stats(arr: Arrangement) -> tuple[int, float]:
    return ply(arr), local_radius(arr)


def stats_json(arr: Arrangement) -> dict:
    p, rho = arrangement_stats(arr)
    return {"faces": len(arr.faces), "ply": p,
            "local_radius": rho if rho != math.inf else "inf"}


# ---------------------------------------------------------------------------
# blow-up and minor model


def blow_up(arr: Arrangement) -> tuple[Graph, list[list[int]]]:
    """Each face becomes a clique of size max(depth, 1); adjacent cliques are joined."""
    clique_of = []
    n = 0
    for f in arr.faces:
        size = max(len(f.depth), 1)
        clique_of.append(list(range(n, n + size)))
        n += size
    edges = []
    for block in clique_of:
        edges.extend(combinations(block, 2))
    for a, b in arr.adjacency:
        edges.extend((x, y) for x in clique_of[a] for y in clique_of[b])
    return build_graph(n, edges), clique_of


@dataclass(frozen=True)
class MinorModel:
    branch_sets: tuple      # per vertex of the modelled graph, sorted host vertices
    depth: float


def validate_minor_model(g: Graph, host: Graph, model: MinorModel) -> list[str]:
    out = []
    if len(model.branch_sets) != g.n:
        return [f"{len(model.branch_sets)} branch sets for {g.n} vertices"]
    owner = {}
    for v, bs in enumerate(model.branch_sets):
        if not bs:
            out.append(f"branch set {v} is empty")
        for x in bs:
            if not 0 <= x < host.n:
                out.append(f"branch set {v} uses unknown host vertex {x}")
            elif x in owner:
                out.append(f"host vertex {x} in branch sets {owner[x]} and {v}")
            else:
                owner[x] = v
    if out:
        return out
    for v, bs in enumerate(model.branch_sets):
        rad = graph_radius(host, bs)
        if rad == math.inf:
            out.append(f"branch set {v} is disconnected")
        elif rad > model.depth:
            out.append(f"branch set {v} has radius {rad} > {model.depth}")
    realized = set()
    for x, y in host.edges:
        if x in owner and y in owner and owner[x] != owner[y]:
            realized.add(tuple(sorted((owner[x], owner[y]))))
    for u, v in g.sorted_edges():
        if (u, v) not in realized:
            out.append(f"edge ({u}, {v}) has no host edge between its branch sets")
    return out


def minor_model(ds: DiskSet, arr: Arrangement, blowup=None) -> MinorModel:
    """Disk ``v`` takes, in every face inside it, the clique vertex at v's rank in the depth set."""
    host, clique_of = blowup or blow_up(arr)
    branch = []
    for v in range(len(ds)):
        bs = [clique_of[f][arr.faces[f].depth.index(v)] for f in arr.disk_faces[v]]
        branch.append(tuple(sorted(bs)))
    model = MinorModel(tuple(branch), local_radius(arr))
    problems = validate_minor_model(intersection_graph(ds), host, model)
    if problems:
        raise ModelInvalid("; ".join(problems[:5]))
    return model


def face_levels(arr: Arrangement) -> list[int]:
    """BFS distance of each face from the unbounded face (bounded faces get >= 1)."""
    return bfs_distances(arr.face_graph, [arr.outer])


def raw_levels(arr: Arrangement) -> list[int]:
    """Per disk, the smallest level of a face inside it."""
    lev = face_levels(arr)
    return [min(lev[f] for f in fs) for fs in arr.disk_faces]


def disk_layering(ds: DiskSet, arr: Arrangement) -> Layering:
    """Layering of the intersection graph from face levels, coarsened by 4ρ + 1."""
    rho = local_radius(arr)
    if rho == math.inf:
        raise UnboundedRadius("local radius is infinite; no layering available")
    block = 4 * int(rho) + 1
    lam = raw_levels(arr)
    return make_layering(intersection_graph(ds), [(x - 1) // block + 1 for x in lam])


# ---------------------------------------------------------------------------
# uniform blow-up into G ⊠ K_t


def uniform_blow_up(g: Graph, t: int) -> Graph:
    """Replace each vertex by a t-clique; copies of adjacent vertices are all joined.

    Copy ``i`` of vertex ``v`` gets index ``v * t + i``.
    """
    edges = []
    for v in range(g.n):
        edges.extend((v * t + i, v * t + j) for i, j in combinations(range(t), 2))
    for u, v in g.edges:
        edges.extend((u * t + i, v * t + j) for i in range(t) for j in range(t))
    return build_graph(g.n * t, edges)


def blow_up_product_map(g: Graph, t: int) -> tuple[dict, bool]:
    """The map v^i -> (v, a_i) into ``G ⊠ K_t`` and whether it preserves adjacency."""
    blown = uniform_blow_up(g, t)
    prod, index = strong_product(g, complete_graph(t))
    phi = {v * t + i: index[v, i] for v in range(g.n) for i in range(t)}
    ok = len(set(phi.values())) == blown.n and all(
        prod.has_edge(phi[x], phi[y]) for x, y in blown.edges)
    return phi, ok
