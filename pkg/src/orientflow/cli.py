"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 infeasible, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bijection import NotAnOrientation, NotASubgraph, Step, InfeasibleInput, phi, psi
from .connectivity import k_disjoint_paths, st_demand, vertex_disjoint_paths
from .enumeration import Caps, CapExceeded, enumerate_feasible, verify_bijection
from .graph_core import (
    DirectedSubgraph,
    GraphError,
    Kind,
    WeightedGraph,
    decode_orientation,
    decode_subgraph,
    encode_orientation,
    encode_subgraph,
    parse_graph,
)
from .mcf_solver import Demand, NoFeasibleFlow, min_cost_flow, parse_demand

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit code 2 is reserved for infeasibility
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(args: argparse.Namespace) -> tuple[WeightedGraph, Demand]:
    g = parse_graph(_read(args.graph))
    if args.st is not None:
        s, t, k = args.st
        d = st_demand(g.n, s, t, k)
    elif args.demand is not None:
        d = parse_demand(_read(args.demand), g.n)
    else:
        d = Demand.zero(g.n)
    return g, d


def _restriction(g: WeightedGraph, args: argparse.Namespace) -> DirectedSubgraph:
    sub = getattr(args, "subgraph", None)
    ori = getattr(args, "orientation", None)
    if sub is not None and ori is not None:
        raise InputError("give at most one of --subgraph / --orientation")
    if sub is not None:
        return decode_subgraph(g, sub)
    if ori is not None:
        return decode_orientation(g, ori)
    return DirectedSubgraph.full(g)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_solve(args: argparse.Namespace) -> int:
    g, d = _load(args)
    flow = min_cost_flow(g, _restriction(g, args), d)
    if args.json:
        _emit(json.dumps({"arcs": [list(a) for a in flow.arcs()], "base_cost": flow.cost.base}))
    else:
        _emit("".join(f"{a}\n" for a in flow.arcs()) + f"cost {flow.cost.base}")
    return EXIT_OK


def _print_map(result: str, steps: list[Step], kind: str, args: argparse.Namespace) -> None:
    if args.json:
        doc: dict = {"mask": result}
        if args.trace:
            doc["steps"] = [{"index": s.index, "rule": s.rule, "line": s.describe(kind)} for s in steps]
        _emit(json.dumps(doc))
        return
    lines = [s.describe(kind) for s in steps] if args.trace else []
    lines.append(result)
    _emit("\n".join(lines))


def cmd_orient(args: argparse.Namespace) -> int:
    g, d = _load(args)
    steps: list[Step] = []
    L = phi(g, d, decode_subgraph(g, args.subgraph), trace=steps)
    _print_map(encode_orientation(L), steps, "phi", args)
    return EXIT_OK


def cmd_underlying(args: argparse.Namespace) -> int:
    g, d = _load(args)
    steps: list[Step] = []
    K = psi(g, d, decode_orientation(g, args.orientation), trace=steps)
    _print_map(encode_subgraph(K), steps, "psi", args)
    return EXIT_OK


def _caps(args: argparse.Namespace) -> Caps:
    return Caps(mask_edges=args.cap)


def cmd_count(args: argparse.Namespace) -> int:
    g, d = _load(args)
    caps = _caps(args)
    a = len(enumerate_feasible(g, d, Kind.SUBGRAPH, caps=caps))
    b = len(enumerate_feasible(g, d, Kind.ORIENTATION, caps=caps))
    if args.json:
        _emit(json.dumps({"S_f": a, "O_f": b}))
    else:
        _emit(f"S_f {a}\nO_f {b}")
    return EXIT_OK if a == b else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    g, d = _load(args)
    report = verify_bijection(
        g,
        d,
        mode="sampled" if args.sampled else "exhaustive",
        seed=args.seed,
        trials=args.trials,
        caps=_caps(args),
        graph_name=Path(args.graph).name,
    )
    _emit(report.to_json(args.timing) if args.json else report.to_text(args.timing))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_paths(args: argparse.Namespace) -> int:
    g = parse_graph(_read(args.graph))
    s, t, k = args.st
    D = _restriction(g, args)
    if args.vertex_disjoint:
        paths = vertex_disjoint_paths(g, D, s, t, k)
    else:
        paths = k_disjoint_paths(g, D, s, t, k)
    if args.json:
        _emit(json.dumps({"paths": [list(p) for p in paths.paths], "total_weight": paths.total_weight}))
    else:
        _emit(paths.to_text())
    return EXIT_OK


def _demand_args(p: argparse.ArgumentParser, required_st: bool = False) -> None:
    if required_st:
        p.add_argument("--st", nargs=3, type=int, metavar=("S", "T", "K"), required=True)
        return
    group = p.add_mutually_exclusive_group()
    group.add_argument("--st", nargs=3, type=int, metavar=("S", "T", "K"), help="k units from s to t")
    group.add_argument("--demand", metavar="FILE", help="demand file with 'd <u> <value>' lines")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="orientflow",
        description="Flow-preserving bijection between feasible subgraphs and orientations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="print the unique min-cost flow A(D)")
    p.add_argument("graph")
    _demand_args(p)
    p.add_argument("--subgraph", metavar="MASK")
    p.add_argument("--orientation", metavar="MASK")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("orient", help="map a subgraph mask to its orientation")
    p.add_argument("graph")
    _demand_args(p)
    p.add_argument("--subgraph", metavar="MASK", required=True)
    p.add_argument("--trace", action="store_true", help="print the rule fired at every step")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_orient)

    p = sub.add_parser("underlying", help="map an orientation mask to its subgraph")
    p.add_argument("graph")
    _demand_args(p)
    p.add_argument("--orientation", metavar="MASK", required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_underlying)

    for name, func, help_ in (
        ("count", cmd_count, "count feasible subgraphs and orientations"),
        ("verify", cmd_verify, "check every claim of the construction"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph")
        _demand_args(p)
        p.add_argument("--cap", type=int, default=Caps().mask_edges, help="largest m enumerated")
        p.add_argument("--json", action="store_true")
        if name == "verify":
            p.add_argument("--sampled", action="store_true", help="random sampling instead of enumeration")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=1000)
            p.add_argument("--timing", action="store_true", help="include wall time")
        p.set_defaults(func=func)

    p = sub.add_parser("paths", help="minimum-weight k disjoint s-t paths")
    p.add_argument("graph")
    _demand_args(p, required_st=True)
    p.add_argument("--subgraph", metavar="MASK")
    p.add_argument("--orientation", metavar="MASK")
    p.add_argument("--vertex-disjoint", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_paths)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NoFeasibleFlow, InfeasibleInput):
        _emit("infeasible")
        return EXIT_INFEASIBLE
    except (GraphError, InputError, NotASubgraph, NotAnOrientation, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
