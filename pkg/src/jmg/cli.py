"""Command-line surface: construct, verify, dilate, check, and demo.

Exit codes: 0 = success (verification passed / query feasible), 1 = a
verification or feasibility query came back negative, 2 = input error.
Machine output is deterministic JSON; ``--pretty`` switches stdout to a
human-readable report.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import serialize
from .errors import InputError
from .graphs import Graph, graph_from_json_obj, graph_to_json_obj, parse_graph
from .linalg import DEFAULT_TOL
from .povm import (
    DEFAULT_MAX_ITER,
    DEFAULT_SOLVER_TOL,
    compression,
    demo_hollow_triangle,
    dilation_to_json_obj,
    jm_feasible,
    jm_report_to_json_obj,
    neumark_dilate,
    povm_from_json_obj,
    hollow_triangle_report_to_json_obj,
)
from .realize import (
    METHOD_RANK_ONE_RESTRICTED,
    PvmRealization,
    Realization,
    extend_outcomes,
    fork_obstruction,
    lower_bound_graph,
    make_faithful,
    pvm_realization_from_json_obj,
    pvm_realization_to_json_obj,
    realization_from_json_obj,
    realization_to_json_obj,
    realize_direct_sum,
    realize_rank_one,
    restrict_to_span,
    verification_report_to_json_obj,
    verify_realization,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jmg",
        description="Realize graphs as quantum observables and decide joint measurability.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="solver iteration cap")
    common.add_argument("--pretty", action="store_true", help="human-readable stdout")
    common.add_argument("--out", default=None, help="write the full result JSON to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", parents=[common], help="construct a realization from a graph file")
    p.add_argument("graph_file")
    p.add_argument(
        "--method",
        choices=["direct-sum", "rank-one", "rank-one-restricted"],
        default="direct-sum",
    )
    p.add_argument("--faithful", action="store_true", help="force distinct projections per vertex")
    p.add_argument(
        "--outcomes",
        default=None,
        help="sharp-observable outcome counts: a single integer or 'vertex:count,...' (missing vertices get 2)",
    )

    p = sub.add_parser("verify", parents=[common], help="verify a realization file against a graph file")
    p.add_argument("graph_file")
    p.add_argument("realization_file")

    p = sub.add_parser("dilate", parents=[common], help="dilate a POVM file to a sharp observable")
    p.add_argument("povm_file")

    p = sub.add_parser("jm-check", parents=[common], help="joint-measurability feasibility query")
    p.add_argument("povm_files", nargs="+")

    p = sub.add_parser("demo", parents=[common], help="run a built-in demonstration")
    p.add_argument("name", choices=["fork", "hollow-triangle", "lower-bound"])
    p.add_argument("--eta", type=float, default=0.6, help="noise level for hollow-triangle")
    p.add_argument("--dim", type=int, default=None, help="target dimension for lower-bound")
    return parser


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except ValueError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load_graph(path: str) -> Graph:
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        return graph_from_json_obj(_load_json(path))
    try:
        return parse_graph(text.strip())
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(args, report_obj: dict, pretty_lines: list, payload_obj: dict | None = None) -> None:
    if args.out and payload_obj is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize.dumps(payload_obj) + "\n")
    if args.pretty:
        for line in pretty_lines:
            print(line)
    else:
        print(serialize.dumps(report_obj))


def _parse_outcome_spec(spec: str, vertex_count: int) -> dict:
    spec = spec.strip()
    counts = {}
    try:
        if ":" in spec:
            for chunk in spec.split(","):
                v, _, c = chunk.partition(":")
                counts[int(v.strip())] = int(c.strip())
        else:
            counts = {x: int(spec) for x in range(vertex_count)}
    except ValueError as exc:
        raise InputError(f"bad --outcomes specification {spec!r}") from exc
    for v in counts:
        if not (0 <= v < vertex_count):
            raise InputError(f"--outcomes names vertex {v} outside 0..{vertex_count - 1}")
    return {x: counts.get(x, 2) for x in range(vertex_count)}


def _cmd_realize(args) -> int:
    graph = _load_graph(args.graph_file)
    check_tol = args.tol if args.tol is not None else DEFAULT_TOL
    if args.method == "direct-sum":
        result = realize_direct_sum(graph)
    elif args.method == "rank-one":
        result = realize_rank_one(graph)
    else:
        result = restrict_to_span(realize_rank_one(graph))
    if args.faithful:
        if result.method == METHOD_RANK_ONE_RESTRICTED:
            raise InputError("--faithful needs an exact method (direct-sum or rank-one)")
        result = make_faithful(result)
    if args.outcomes is not None:
        if isinstance(result, Realization) and result.method == METHOD_RANK_ONE_RESTRICTED:
            raise InputError("--outcomes needs an exact method (direct-sum or rank-one)")
        counts = _parse_outcome_spec(args.outcomes, graph.vertex_count)
        result = extend_outcomes(result, counts)
    report = verify_realization(graph, result, check_tol)
    if isinstance(result, PvmRealization):
        payload = pvm_realization_to_json_obj(result)
        kind = "pvm_realization"
    else:
        payload = realization_to_json_obj(result)
        kind = "realization"
    summary = {
        "kind": kind,
        "space_dim": result.space_dim,
        "method": args.method.replace("-", "_"),
        "faithful": bool(args.faithful),
        "verification": verification_report_to_json_obj(report),
    }
    pretty = [
        f"method: {args.method}",
        f"space dimension: {result.space_dim}",
        f"verification: {'PASSED' if report.passed else 'FAILED'}",
    ]
    for v in report.violations:
        pretty.append(f"  pair {v.pair}: expected {v.expected}, observed {v.observed}")
    _emit(args, summary, pretty, payload)
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    graph = _load_graph(args.graph_file)
    obj = _load_json(args.realization_file)
    if isinstance(obj, dict) and "pvms" in obj:
        realization = pvm_realization_from_json_obj(obj)
    else:
        realization = realization_from_json_obj(obj)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    report = verify_realization(graph, realization, tol)
    summary = verification_report_to_json_obj(report)
    pretty = [f"verification: {'PASSED' if report.passed else 'FAILED'}"]
    for v in report.violations:
        pretty.append(f"  pair {v.pair}: expected {v.expected}, observed {v.observed}")
    _emit(args, summary, pretty, summary)
    return 0 if report.passed else 1


def _cmd_dilate(args) -> int:
    povm = povm_from_json_obj(_load_json(args.povm_file))
    result = neumark_dilate(povm, args.tol if args.tol is not None else 1e-8)
    residual = max(
        float(np.linalg.norm(compression(result.isometry, result.pvm.elements[o]) - povm.elements[o]))
        for o in povm.outcomes
    )
    summary = {"enlarged_dim": result.enlarged_dim, "max_residual": residual}
    pretty = [
        f"enlarged dimension: {result.enlarged_dim}",
        f"max reconstruction residual: {residual:.3e}",
    ]
    _emit(args, summary, pretty, dilation_to_json_obj(result))
    return 0


def _cmd_jm_check(args) -> int:
    if len(args.povm_files) < 2:
        raise InputError("jm-check needs at least two POVM files")
    povms = [povm_from_json_obj(_load_json(path)) for path in args.povm_files]
    tol = args.tol if args.tol is not None else DEFAULT_SOLVER_TOL
    report = jm_feasible(povms, tol, args.max_iter)
    obj = jm_report_to_json_obj(report)
    pretty = [
        f"verdict: {report.verdict}",
        f"iterations: {report.iterations}",
        f"final residual: {report.final_residual:.3e}",
    ]
    _emit(args, obj, pretty, obj)
    return 0 if report.feasible else 1


def _cmd_demo(args) -> int:
    if args.name == "fork":
        rep = fork_obstruction()
        obj = {
            "graph": graph_to_json_obj(rep.graph),
            "maximal_cliques": [list(c) for c in rep.cliques],
            "steps": list(rep.steps),
            "forced_pair": list(rep.forced_pair),
            "derivation_valid": rep.derivation_valid,
        }
        pretty = ["fork obstruction:"] + [f"  {s}" for s in rep.steps]
        _emit(args, obj, pretty, obj)
        return 0
    if args.name == "hollow-triangle":
        tol = args.tol if args.tol is not None else DEFAULT_SOLVER_TOL
        rep = demo_hollow_triangle(args.eta, tol, args.max_iter)
        obj = hollow_triangle_report_to_json_obj(rep)
        pretty = [
            f"noise level eta = {rep.eta}",
            *(
                f"pair {pair}: {r.verdict} (residual {r.final_residual:.3e})"
                for pair, r in sorted(rep.pair_reports.items())
            ),
            f"triple: {rep.triple_report.verdict} (residual {rep.triple_report.final_residual:.3e})",
            f"hypergraph maximal hyperedges: {sorted(sorted(h) for h in rep.hypergraph.hyperedges)}",
            f"graph-induced: {rep.hypergraph_graph_induced}",
            f"regime: {rep.regime}",
            f"conclusion: {rep.conclusion}",
        ]
        _emit(args, obj, pretty, obj)
        return 0
    if args.name == "lower-bound":
        if args.dim is None:
            raise InputError("demo lower-bound needs --dim")
        rep = lower_bound_graph(args.dim)
        obj = {
            "graph": graph_to_json_obj(rep.graph),
            "action_vertices": list(rep.action_vertices),
            "control_vertices": list(rep.control_vertices),
            "bitstrings": list(rep.bitstrings),
            "partition_count": rep.partition_count,
        }
        pretty = [
            f"partitions of a {args.dim}-element set: {rep.partition_count}",
            f"action vertices: {len(rep.action_vertices)} (complete among themselves)",
            f"control vertices: {len(rep.control_vertices)} (mutually disconnected)",
            f"bitstrings (bit k = adjacency to control k): {list(rep.bitstrings)}",
        ]
        _emit(args, obj, pretty, obj)
        return 0
    raise InputError(f"unknown demo {args.name!r}")


_DISPATCH = {
    "realize": _cmd_realize,
    "verify": _cmd_verify,
    "dilate": _cmd_dilate,
    "jm-check": _cmd_jm_check,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _DISPATCH[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # malformed input must never crash the process
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
