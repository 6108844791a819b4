"""Triangle-factor gadgets, the 1-in-3-SAT reduction and brute-force certifiers.

Gadget vertices carry readable names; the ones other gadgets attach to
are exposed as ``ports``. A variable's literal counts as true exactly
when the variable gadget's tiling leaves that occurrence's ports for the
clause gadget to cover.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Union

from .graph import Graph, GraphError, build_graph, make_family, path_graph
from .layering import Infeasible


class MalformedFormula(GraphError):
    pass


class TooLarge(GraphError):
    pass


@dataclass(frozen=True)
class LabeledGadget:
    graph: Graph
    ports: dict             # name -> vertex
    names: tuple            # one readable name per vertex

    def port(self, name: str) -> int:
        return self.ports[name]

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["ports"] = dict(self.ports)
        out["names"] = list(self.names)
        return out


class _Builder:
    """Accumulates named vertices and edges; names may alias one vertex."""

    def __init__(self):
        self.index: dict[str, int] = {}
        self.names: list[str] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, name: str) -> int:
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]

    def alias(self, name: str, existing: str):
        self.index[name] = self.index[existing]

    def edge(self, a: str, b: str):
        self.edges.append((self.add(a), self.add(b)))

    def gadget(self, ports) -> LabeledGadget:
        g = build_graph(len(self.names), self.edges)
        return LabeledGadget(g, {p: self.index[p] for p in ports}, tuple(self.names))


_L_EDGES = [("g", "h1_1"), ("g", "h1_2"), ("h1_1", "h1_2"), ("h1_1", "h2_1"), ("h1_1", "h2_2"),
            ("h1_2", "h2_3"), ("h1_2", "h2_4"), ("h2_1", "h2_2"), ("h2_2", "h2_3"),
            ("h2_3", "h2_4"), ("h2_1", "g1"), ("h2_2", "g1"), ("h2_3", "g2"), ("h2_4", "g2")]


def _add_L(b: _Builder, prefix: str, g: str, g1: str, g2: str):
    rename = {"g": g, "g1": g1, "g2": g2}
    for x, y in _L_EDGES:
        b.edge(rename.get(x, prefix + x), rename.get(y, prefix + y))


def build_L() -> LabeledGadget:
    b = _Builder()
    for name in ("g", "g1", "g2"):
        b.add(name)
    _add_L(b, "", "g", "g1", "g2")
    return b.gadget(["g", "g1", "g2"])


SPLITTER_PORTS = ("g", "h", "h1", "h2", "h3")


def _add_splitter(b: _Builder, prefix: str, g: str, h: str):
    p = prefix
    _add_L(b, p + "L0.", g, p + "g^1", p + "g^2")
    _add_L(b, p + "L1.", p + "g^1", p + "h1", p + "h2")
    _add_L(b, p + "L2.", p + "g^2", p + "h3", p + "g^2_2")
    for x, y in [("g^2_2", "w1"), ("g^2_2", "w2"), ("w1", "w2"), ("w1", "h"), ("w2", "h")]:
        b.edge(p + x if x != "h" else h, p + y if y != "h" else h)


def build_splitter() -> LabeledGadget:
    b = _Builder()
    for name in ("g", "h"):
        b.add(name)
    _add_splitter(b, "", "g", "h")
    return b.gadget(SPLITTER_PORTS)


def splitter_internal_names() -> tuple:
    """The junction vertices g^1, g^2 and g^2_2 (used by the wider exempt-set reading)."""
    return ("g^1", "g^2", "g^2_2")


def _add_W(b: _Builder, name):
    for i in range(1, 7):
        b.edge(name(i), name(i % 6 + 1))
    for i, j in [(1, 5), (2, 4), (2, 5)]:
        b.edge(name(i), name(j))


def build_clause_gadget() -> LabeledGadget:
    """Three glued copies of W; ``U_j`` = ports a4^j, a5^j, a6^j."""
    b = _Builder()
    _add_clause(b, "")
    ports = [f"a{k}^{j}" for j in (1, 2, 3) for k in range(1, 7)]
    return b.gadget(ports)


def _add_clause(b: _Builder, prefix: str):
    # a1^j is the same vertex as a3^(j+1)
    def name(j: int):
        def f(k: int) -> str:
            if k == 1:
                return f"{prefix}a3^{j % 3 + 1}"
            return f"{prefix}a{k}^{j}"
        return f

    for j in (1, 2, 3):
        _add_W(b, name(j))
    for j in (1, 2, 3):
        b.alias(f"{prefix}a1^{j}", f"{prefix}a3^{j % 3 + 1}")
    for j in (1, 2, 3):
        b.edge(f"{prefix}a2^{j}", f"{prefix}a2^{j % 3 + 1}")


def clause_port_set(gadget: LabeledGadget, j: int) -> list[int]:
    return [gadget.ports[f"a{k}^{j}"] for k in (4, 5, 6)]


def _add_variable(b: _Builder, prefix: str, occurrences) -> None:
    ell = len(occurrences)
    cyc = [f"{prefix}v{t}" for t in range(1, 4 * ell + 1)]
    for t in range(4 * ell):
        b.edge(cyc[t], cyc[(t + 1) % (4 * ell)])
    chords = set()
    for t in range(1, 4 * ell + 1, 2):
        a, c = t - 1, (t + 1) % (4 * ell)
        chords.add((min(a, c), max(a, c)))
    for a, c in sorted(chords):
        b.edge(cyc[a], cyc[c])
    for j, positive in enumerate(occurrences, start=1):
        hi, lo = cyc[4 * j - 1], cyc[4 * j - 3]      # v_{4j}, v_{4j-2}
        g, h = (hi, lo) if positive else (lo, hi)
        sp = f"{prefix}S{j}."
        _add_splitter(b, sp, g, h)
        for k in (1, 2, 3):
            b.alias(f"{prefix}h{k}^{j}", f"{sp}h{k}")


def build_variable_gadget(occurrences) -> LabeledGadget:
    """Cycle v1..v4ℓ with chords plus one splitter per occurrence.

    ``occurrences[j]`` is True for a positive literal. Ports are
    ``h{k}^{j}`` for occurrence ``j`` (1-based) and ``k`` in 1..3.
    """
    occ = [bool(o) for o in occurrences]
    if not occ:
        raise GraphError("a variable gadget needs at least one occurrence")
    b = _Builder()
    _add_variable(b, "", occ)
    ports = [f"h{k}^{j}" for j in range(1, len(occ) + 1) for k in (1, 2, 3)]
    return b.gadget(ports)


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Cnf13Instance:
    num_vars: int
    clauses: tuple          # each a tuple of 3 nonzero ints, DIMACS style
    var_order: Optional[tuple] = None       # per variable: its clauses (1-based) in drawing order
    clause_order: Optional[tuple] = None    # per clause: its variables (1-based) in drawing order

    def occurrences(self, var: int) -> list[int]:
        """Clauses (1-based) containing ``var``, in drawing order."""
        if self.var_order is not None:
            return list(self.var_order[var - 1])
        return [c for c, cl in enumerate(self.clauses, start=1) if any(abs(x) == var for x in cl)]

    def clause_vars(self, c: int) -> list[int]:
        if self.clause_order is not None:
            return list(self.clause_order[c - 1])
        return [abs(x) for x in self.clauses[c - 1]]

    def sign(self, c: int, var: int) -> bool:
        return next(x for x in self.clauses[c - 1] if abs(x) == var) > 0

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(str(x) for x in cl) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"


def make_formula(num_vars: int, clauses, var_order=None, clause_order=None) -> Cnf13Instance:
    cls = []
    for i, cl in enumerate(clauses, start=1):
        cl = tuple(int(x) for x in cl)
        if len(cl) != 3:
            raise MalformedFormula(f"clause {i} has {len(cl)} literals, expected 3")
        if 0 in cl or any(abs(x) > num_vars for x in cl):
            raise MalformedFormula(f"clause {i} uses a variable outside 1..{num_vars}")
        if len({abs(x) for x in cl}) != 3:
            raise MalformedFormula(f"clause {i} repeats a variable")
        cls.append(cl)
    inst = Cnf13Instance(num_vars, tuple(cls))
    if var_order is not None or clause_order is not None:
        inst = _with_rotation(inst, var_order, clause_order)
    return inst


def _with_rotation(inst: Cnf13Instance, var_order, clause_order) -> Cnf13Instance:
    vo = co = None
    if var_order is not None:
        if len(var_order) != inst.num_vars:
            raise MalformedFormula("var_order needs one list per variable")
        vo = tuple(tuple(int(c) for c in row) for row in var_order)
        for v, row in enumerate(vo, start=1):
            if sorted(row) != inst.occurrences(v):
                raise MalformedFormula(f"var_order[{v - 1}] is not an ordering of the clauses of x{v}")
    if clause_order is not None:
        if len(clause_order) != len(inst.clauses):
            raise MalformedFormula("clause_order needs one list per clause")
        co = tuple(tuple(int(v) for v in row) for row in clause_order)
        for c, row in enumerate(co, start=1):
            if sorted(row) != sorted(abs(x) for x in inst.clauses[c - 1]):
                raise MalformedFormula(f"clause_order[{c - 1}] is not an ordering of clause {c}")
    return Cnf13Instance(inst.num_vars, inst.clauses, vo, co)


def parse_dimacs(text: str, rotation=None) -> Cnf13Instance:
    """DIMACS CNF with exactly three literals per clause.

    ``rotation`` is an optional dict (or JSON text) with ``var_order`` and
    ``clause_order`` lists; clause and variable numbers are 1-based.
    """
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedFormula(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedFormula(f"line {lineno}: bad header {line!r}") from None
            continue
        if header is None:
            raise MalformedFormula(f"line {lineno}: clause before the 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise MalformedFormula(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if header is None:
        raise MalformedFormula("missing 'p cnf' header")
    if current:
        raise MalformedFormula("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise MalformedFormula(f"header announces {header[1]} clauses, found {len(clauses)}")
    if isinstance(rotation, (str, bytes)):
        rotation = json.loads(rotation)
    rotation = rotation or {}
    return make_formula(header[0], clauses, rotation.get("var_order"), rotation.get("clause_order"))


def solve_1in3(inst: Cnf13Instance, limit: int = 24) -> Optional[tuple]:
    """First assignment (True before False, x1 first) with one true literal per clause."""
    n = inst.num_vars
    if n > limit:
        raise TooLarge(f"{n} variables exceeds the brute-force bound {limit}")
    watch: list[list[int]] = [[] for _ in range(n + 1)]
    for ci, cl in enumerate(inst.clauses):
        watch[max(abs(x) for x in cl)].append(ci)
    value: list[Optional[bool]] = [None] * (n + 1)

    def exactly_one(cl) -> bool:
        return sum(1 for x in cl if value[abs(x)] == (x > 0)) == 1

    def rec(v: int) -> bool:
        if v > n:
            return True
        for choice in (True, False):
            value[v] = choice
            if all(exactly_one(inst.clauses[ci]) for ci in watch[v]) and rec(v + 1):
                return True
        value[v] = None
        return False

    return tuple(value[1:]) if rec(1) else None


def check_1in3(inst: Cnf13Instance, assignment) -> bool:
    return all(sum(1 for x in cl if assignment[abs(x) - 1] == (x > 0)) == 1 for cl in inst.clauses)


# ---------------------------------------------------------------------------
# the reduction

_PORT_NAME = re.compile(r"^(x\d+\.h\d\^\d+|C\d+\.a\d\^\d)$")


def reduce_formula(inst: Cnf13Instance) -> tuple[Graph, dict]:
    """The graph whose triangle factors match the formula's 1-in-3 assignments.

    The report maps names such as ``x2.h1^1`` and ``C1.a4^2`` to vertices,
    and lists for each clause which variable occurrence feeds each port set.
    """
    b = _Builder()
    for v in range(1, inst.num_vars + 1):
        occ = inst.occurrences(v)
        if occ:
            _add_variable(b, f"x{v}.", [inst.sign(c, v) for c in occ])
    for c in range(1, len(inst.clauses) + 1):
        _add_clause(b, f"C{c}.")
    links = []
    for v in range(1, inst.num_vars + 1):
        for j, c in enumerate(inst.occurrences(v), start=1):
            jp = inst.clause_vars(c).index(v) + 1
            positive = inst.sign(c, v)
            for k in (1, 2, 3):
                target = f"C{c}.a{k + 3 if positive else 7 - k}^{jp}"
                links.append((f"x{v}.h{k}^{j}", target))
    # merge each port pair into one vertex
    parent = list(range(len(b.names)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, c in links:
        ra, rc = find(b.index[a]), find(b.index[c])
        if ra != rc:
            parent[max(ra, rc)] = min(ra, rc)
    roots = sorted({find(x) for x in range(len(b.names))})
    new = {r: i for i, r in enumerate(roots)}
    relabel = [new[find(x)] for x in range(len(b.names))]
    g = build_graph(len(roots), [(relabel[u], relabel[v]) for u, v in b.edges])
    report = {
        "ports": {name: relabel[x] for name, x in sorted(b.index.items())
                  if _PORT_NAME.match(name)},
        "clauses": [
            {"clause": c, "port_sets": [
                {"set": jp, "var": v, "positive": inst.sign(c, v)}
                for jp, v in enumerate(inst.clause_vars(c), start=1)]}
            for c in range(1, len(inst.clauses) + 1)],
    }
    return g, report


# ---------------------------------------------------------------------------
# tilings


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for u in range(g.n):
        for v in g.adj[u]:
            if v <= u:
                continue
            for w in g.adj[v]:
                if w > v and g.has_edge(u, w):
                    out.append((u, v, w))
    return out


def triangle_factor(g: Graph) -> Optional[list]:
    """Vertex-disjoint triangles covering every vertex, or None.

    Branches on the uncovered vertex lying in the fewest usable triangles
    (lowest index on ties).
    """
    if g.n % 3:
        return None
    through: list[list] = [[] for _ in range(g.n)]
    for t in triangles(g):
        for x in t:
            through[x].append(t)
    covered = [False] * g.n
    chosen: list = []

    def usable(t) -> bool:
        return not (covered[t[0]] or covered[t[1]] or covered[t[2]])

    def rec(left: int) -> bool:
        if left == 0:
            return True
        best, best_opts = None, None
        for v in range(g.n):
            if covered[v]:
                continue
            opts = [t for t in through[v] if usable(t)]
            if best is None or len(opts) < len(best_opts):
                best, best_opts = v, opts
                if not opts:
                    return False
        for t in best_opts:
            for x in t:
                covered[x] = True
            chosen.append(t)
            if rec(left - 3):
                return True
            chosen.pop()
            for x in t:
                covered[x] = False
        return False

    return sorted(chosen) if rec(g.n) else None


def iter_tilings(g: Graph, optional=()) -> Iterator[tuple]:
    """Every set of vertex-disjoint triangles covering all non-optional vertices.

    Each set is yielded once, as a sorted tuple of triangles.
    """
    opt = set(optional)
    tri = triangles(g)
    starting: list[list] = [[] for _ in range(g.n)]
    for t in tri:
        starting[t[0]].append(t)
    through: list[list] = [[] for _ in range(g.n)]
    for t in tri:
        for x in t:
            through[x].append(t)
    state = [0] * g.n       # 0 open, 1 covered, 2 left uncovered
    chosen: list = []

    def rec(v: int):
        while v < g.n and state[v]:
            v += 1
        if v == g.n:
            yield tuple(sorted(chosen))
            return
        # v is the smallest open vertex; any triangle covering it uses only open
        # vertices, all larger than v
        for t in starting[v]:
            if state[t[1]] == 0 and state[t[2]] == 0:
                for x in t:
                    state[x] = 1
                chosen.append(t)
                yield from rec(v + 1)
                chosen.pop()
                for x in t:
                    state[x] = 0
        if v in opt:
            state[v] = 2
            yield from rec(v + 1)
            state[v] = 0

    yield from rec(0)


def covered_by(tiling) -> set:
    return {x for t in tiling for x in t}


def is_maximal_tiling(g: Graph, tiling) -> bool:
    used = covered_by(tiling)
    return not any(used.isdisjoint(t) for t in triangles(g))


def p4_deletion_instance(g: Graph):
    """The {P4}-deletion instance with budget |E| - |V|, or Infeasible when negative."""
    fam = make_family([path_graph(4)])
    k = g.m - g.n
    if k < 0:
        return fam, Infeasible(f"|E| - |V| = {k} < 0")
    return fam, k
