"""Command-line entry point: ``subfree <command> ...``.

Every command prints one report (JSON by default) and exits 0 on a clean
run, whatever the yes/no answer. Bad input exits 1 with a message on
stderr; usage errors exit 2.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .graph import GraphError, family_from_json, graph_from_json, make_family
from .treewidth import embedding_from_json, td_from_json, validate_td

log = logging.getLogger("subfree")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    return p.read_text()


def _load_json(path: str, what: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid {what} JSON at byte offset {exc.pos} "
                         f"(line {exc.lineno}, column {exc.colno}): {exc.msg}") from None


def _parse(path: str, what: str, reader):
    obj = _load_json(path, what)
    try:
        return reader(obj)
    except (GraphError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad {what}: {exc}") from None


def _load_graph(path: str):
    return _parse(path, "graph", graph_from_json)


def _load_family(path: str):
    def reader(obj):
        # a single graph object is accepted as a one-pattern family
        if isinstance(obj, dict):
            return make_family([graph_from_json(obj)])
        return family_from_json(obj)
    return _parse(path, "family", reader)


def _load_disks(path: str, eps: Optional[str]):
    from .disks import DEFAULT_EPS, disks_from_json
    return _parse(path, "disks", lambda o: disks_from_json(o, eps or DEFAULT_EPS))


def _graph_and_layering(args):
    """Resolve the host graph and the layering; precedence embedding > disks > BFS."""
    from .layering import bfs_layering, layering_from_embedding
    g = _load_graph(args.graph) if args.graph else None
    embed = None
    if args.embedding:
        if g is None:
            raise InputError("--embedding needs --graph")
        embed = _parse(args.embedding, "embedding", lambda o: embedding_from_json(g, o))
        return g, layering_from_embedding(g, embed), "embedding", embed
    if args.disks:
        from .disks import build_arrangement, disk_layering, intersection_graph
        ds = _load_disks(args.disks, args.eps)
        dg = intersection_graph(ds)
        if g is not None and g != dg:
            raise InputError("--graph is not the intersection graph of --disks")
        return dg, disk_layering(ds, build_arrangement(ds)), "disks", None
    if g is None:
        raise InputError("need --graph (or --disks)")
    return g, bfs_layering(g), "bfs", None


def _cmd_solve(args) -> dict:
    from .layering import solve
    g, lay, source, embed = _graph_and_layering(args)
    fam = _load_family(args.family)
    out = solve(g, lay, fam, args.k, embed=embed, exact_threshold=args.exact_threshold)
    report = out.to_json()
    report["layering"] = source
    return report


def _cmd_oracle(args) -> dict:
    from .oracle import oracle_solve
    g = _load_graph(args.graph)
    fam = _load_family(args.family)
    return oracle_solve(g, fam, args.k).to_json()


def _cmd_arrangement(args) -> dict:
    from .disks import build_arrangement, stats_json
    ds = _load_disks(args.disks, args.eps)
    return stats_json(build_arrangement(ds))


def _cmd_layering(args) -> dict:
    g, lay, source, _ = _graph_and_layering(args)
    return {"layering": source, "num_layers": lay.num_layers, "layer_of": list(lay.layer_of)}


def _cmd_gen_gadget(args) -> dict:
    from .hardness import build_L, build_clause_gadget, build_splitter, build_variable_gadget
    if args.kind == "splitter":
        gad = build_splitter()
    elif args.kind == "clause":
        gad = build_clause_gadget()
    elif args.kind == "L":
        gad = build_L()
    else:
        signs = args.occurrences or "+"
        if any(c not in "+-" for c in signs):
            raise InputError("--occurrences takes a string of '+' and '-'")
        gad = build_variable_gadget([c == "+" for c in signs])
    return gad.to_json()


def _cmd_gen_reduction(args) -> dict:
    from .hardness import MalformedFormula, parse_dimacs, reduce_formula
    text = _read(args.cnf)
    rotation = _load_json(args.rotation, "rotation") if args.rotation else None
    try:
        inst = parse_dimacs(text, rotation)
    except MalformedFormula as exc:
        raise InputError(f"{args.cnf}: {exc}") from None
    g, report = reduce_formula(inst)
    out = g.to_json()
    out.update(report)
    out["planarity_certified"] = rotation is not None
    return out


def _cmd_triangle_factor(args) -> dict:
    from .hardness import triangle_factor
    g = _load_graph(args.graph)
    tiles = triangle_factor(g)
    return {"exists": tiles is not None,
            "triangles": [list(t) for t in tiles] if tiles is not None else None}


def _cmd_validate_td(args) -> dict:
    g = _load_graph(args.graph)
    td = _parse(args.td, "tree decomposition", td_from_json)
    problems = validate_td(g, td)
    return {"valid": not problems, "width": td.width if not problems else None,
            "problems": problems}


def _cmd_selftest(args) -> dict:
    from . import acceptance
    selected = None
    if args.criteria:
        try:
            selected = {int(x) for x in args.criteria.split(",")}
        except ValueError:
            raise InputError("--criteria takes comma-separated numbers, e.g. 1,3") from None
    checks = acceptance.run_all(selected, echo=lambda s: print(s, file=sys.stderr),
                                seed=args.seed)
    return {"passed": all(c.passed for c in checks), "seed": args.seed,
            "criteria": [{"number": c.number, "title": c.title, "passed": c.passed,
                          "detail": c.detail} for c in checks]}


def _text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, (list, dict)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subfree",
                                description="Edge deletion to forbidden-subgraph-free graphs.")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--verbose", "-v", action="store_true")
    # repeated on every subcommand so the option may follow the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def nonneg(s: str) -> int:
        v = int(s)
        if v < 0:
            raise argparse.ArgumentTypeError("must be nonnegative")
        return v

    def host_args(sp, need_graph: bool):
        sp.add_argument("--graph", required=need_graph)
        sp.add_argument("--embedding")
        sp.add_argument("--disks")
        sp.add_argument("--eps", help="degeneracy tolerance for disks (decimal)")

    s = sub.add_parser("solve", parents=[common], help="decide deletion with the layered solver")
    host_args(s, False)
    s.add_argument("--family", required=True)
    s.add_argument("--k", type=nonneg, required=True)
    s.add_argument("--exact-threshold", type=nonneg, default=12)
    s.set_defaults(run=_cmd_solve)

    s = sub.add_parser("oracle", parents=[common], help="brute-force answer")
    s.add_argument("--graph", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--k", type=nonneg, required=True)
    s.set_defaults(run=_cmd_oracle)

    s = sub.add_parser("arrangement", parents=[common], help="face count, ply and local radius of a disk set")
    s.add_argument("--disks", required=True)
    s.add_argument("--eps")
    s.set_defaults(run=_cmd_arrangement)

    s = sub.add_parser("layering", parents=[common], help="print the layer of every vertex")
    host_args(s, False)
    s.set_defaults(run=_cmd_layering)

    s = sub.add_parser("gen-gadget", parents=[common], help="emit a gadget graph with named ports")
    s.add_argument("kind", choices=["splitter", "clause", "variable", "L"])
    s.add_argument("--occurrences", help="variable gadget polarities, e.g. '+-+'")
    s.set_defaults(run=_cmd_gen_gadget)

    s = sub.add_parser("gen-reduction", parents=[common], help="graph of a 1-in-3 formula")
    s.add_argument("--cnf", required=True)
    s.add_argument("--rotation")
    s.set_defaults(run=_cmd_gen_reduction)

    s = sub.add_parser("triangle-factor", parents=[common], help="find a perfect triangle tiling")
    s.add_argument("--graph", required=True)
    s.set_defaults(run=_cmd_triangle_factor)

    s = sub.add_parser("validate-td", parents=[common], help="check a tree decomposition")
    s.add_argument("--graph", required=True)
    s.add_argument("--td", required=True)
    s.set_defaults(run=_cmd_validate_td)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--criteria", help="comma-separated criterion numbers")
    s.add_argument("--seed", type=int, help="base seed for the randomized criteria")
    s.set_defaults(run=_cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = args.run(args)
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        print(_text(report))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
