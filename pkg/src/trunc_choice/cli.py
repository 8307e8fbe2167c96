"""Command line entry point.

Exit codes: 0 success, 1 a certificate failed, 2 input or usage error,
3 the colouring procedure failed (trace emitted), 4 an oracle budget
was exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io as tio
from .choosability import (
    ListAssignment,
    PartialColoring,
    SolveStats,
    gallai_bad_certificate,
    is_gallai_tree,
    solve_list_coloring,
)
from .counterexample import (
    assemble_G,
    build_gadget,
    verify_counterexample,
    verify_gadget_uncolorable,
)
from .generators import double_wheel, random_triangulation, truncated_lists
from .plane import GraphError, PlaneGraph, trace_faces
from .procedure import (
    DEFAULT_ORACLE_CAP,
    OracleCapExceeded,
    PartitionError,
    check_properly_connected,
    partition_by_degree,
    run_procedure,
)
from .theta import bipolar_orient, very_nice

GRAPH_GRAMMAR = """\
graph file:      g <n> <m> | e <u> <v> | r <v> <n1> <n2> ... | outer <v1> ... | # comment
list file:       u <universe-size> | l <v> <c1> <c2> ... | # comment
colouring out:   c <v> <color> per vertex, or the single token UNSAT
trace lines:     STEP <i> RULE <R1|R2> VERTEX <v> COLOR <c> AVOID <c1,c2|->
                 FREE <component> AT <step> | NONSAVIOR <v> COMP <q> SIZE <k>
report lines:    CERT <name> PASS|FAIL <detail> | LEGEND ... | COPY ...
incidence dump:  f <face-index> <v1> <v2> ... | poles <s> <t> | arc <u> <v>
"""

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_INPUT = 2
EXIT_PROCEDURE = 3
EXIT_CAP = 4


def _read_graph(path: str) -> PlaneGraph:
    return tio.parse_graph(Path(path).read_text(encoding="utf-8"))


def _read_lists(path: str, n: int) -> ListAssignment:
    return tio.parse_lists(Path(path).read_text(encoding="utf-8"), n)


def _emit(lines: Sequence[str], path: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_verify_gadget(args: argparse.Namespace) -> int:
    h = build_gadget()
    ver = verify_gadget_uncolorable(h)
    lines = ver.report_lines()
    _emit(lines, args.report)
    if args.report and not args.no_figures:
        from .report import gadget_stats_figure

        gadget_stats_figure(Path(args.report), ver)
    return EXIT_OK if ver.all_passed else EXIT_CERT_FAIL


def cmd_verify_counterexample(args: argparse.Namespace) -> int:
    gg = assemble_G(check=False)
    if args.emit_graph:
        with open(args.emit_graph, "w", encoding="utf-8") as fh:
            tio.write_graph(gg.graph, fh)
    if args.emit_lists:
        with open(args.emit_lists, "w", encoding="utf-8") as fh:
            tio.write_lists(gg.lists, fh)
    rep = verify_counterexample(gg, jobs=args.jobs)
    lines = rep.report_lines()
    _emit(lines, args.report)
    if args.report and not args.no_figures:
        from .report import copy_stats_figure

        copy_stats_figure(Path(args.report), rep)
    return EXIT_OK if rep.all_passed else EXIT_CERT_FAIL


def cmd_solve(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    L = _read_lists(args.lists, g.n)
    stats = SolveStats()
    sol = solve_list_coloring(g, L, stats=stats)
    out = []
    if sol is None:
        out.append("UNSAT")
    else:
        out += [f"c {v} {sol[v]}" for v in sorted(sol)]
    _emit(out, args.out)
    return EXIT_OK


def cmd_gallai_check(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    L = _read_lists(args.lists, g.n)
    lines = []
    gallai = is_gallai_tree(g)
    lines.append(f"GALLAI-TREE {'YES' if gallai else 'NO'}")
    if gallai:
        cert = gallai_bad_certificate(g, L)
        if cert is None:
            lines.append("BAD-ASSIGNMENT NO")
        else:
            lines.append("BAD-ASSIGNMENT YES")
            for b, cb in zip(cert.blocks, cert.block_colors):
                lines.append(
                    "BLOCK "
                    + ",".join(map(str, sorted(b)))
                    + " COLORS "
                    + ",".join(map(str, sorted(cb)))
                )
    _emit(lines, args.out)
    return EXIT_OK


def cmd_bipolar(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    faces = trace_faces(g)
    orient = bipolar_orient(g, args.s, args.t, faces)
    lines = [f"poles {orient.source} {orient.sink}"]
    lines += [f"arc {u} {v}" for u, v in sorted(orient.arcs)]
    _emit(lines, args.out)
    return EXIT_OK


def cmd_very_nice(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    faces = trace_faces(g)
    vn = very_nice(g, faces, v_star=args.vstar)
    by_face: dict[int, list[int]] = {}
    for v, f in vn.incidences:
        by_face.setdefault(f, []).append(v)
    lines = [f"vstar {vn.v_star}", f"outer-face {vn.theta_star}"]
    lines += [
        f"f {f} " + " ".join(map(str, sorted(vs)))
        for f, vs in sorted(by_face.items())
    ]
    _emit(lines, args.out)
    return EXIT_OK


def cmd_color(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    L = _read_lists(args.lists, g.n)
    faces = trace_faces(g)
    part = partition_by_degree(g, k=args.k, faces=faces)
    verdicts = check_properly_connected(g, part)
    bad = [v for v in verdicts if not v.ok]
    if bad:
        sys.stderr.write(
            "input violates the connection conditions at components "
            f"{[v.component for v in bad]}\n"
        )
        return EXIT_INPUT
    vn = very_nice(g, part.subfaces, v_star=args.vstar)
    result = run_procedure(
        g, part, L, vn, oracle_cap=args.oracle_cap, strict=not args.fast
    )
    if args.trace:
        _emit(result.trace_lines, args.trace)
        if not args.no_figures:
            from .report import procedure_trace_figure

            procedure_trace_figure(Path(args.trace), result)
    if result.coloring is None:
        if not args.trace:
            _emit(result.trace_lines, None)
        return EXIT_PROCEDURE
    out = [f"c {v} {c}" for v, c in sorted(result.coloring.items())]
    _emit(out, args.out)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    import io as _io

    if args.kind == "double-wheel":
        g = double_wheel(args.rim)
    elif args.kind == "triangulation":
        g = random_triangulation(args.n, args.seed)
    else:
        raise GraphError(f"unknown kind {args.kind}")
    buf = _io.StringIO()
    tio.write_graph(g, buf)
    _emit(buf.getvalue().splitlines(), args.out)
    if args.lists_out:
        L = truncated_lists(g, args.k, args.colors, args.seed)
        with open(args.lists_out, "w", encoding="utf-8") as fh:
            tio.write_lists(L, fh)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="trunc-choice",
        description=(
            "Degree-truncated list colouring of planar graphs: verify the "
            "non-8-choosable construction and run the guarded colouring "
            "procedure."
        ),
        epilog=GRAPH_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    vg = sub.add_parser("verify-gadget", help="certify the gadget is uncolourable")
    vg.add_argument("--report", help="write the report here (default stdout)")
    vg.add_argument("--no-figures", action="store_true")
    vg.set_defaults(func=cmd_verify_gadget)

    vc = sub.add_parser(
        "verify-counterexample", help="certify the 56-copy assembly end to end"
    )
    vc.add_argument("--emit-graph", help="write the assembled graph file")
    vc.add_argument("--emit-lists", help="write the assembled list file")
    vc.add_argument("--report", help="write the report here (default stdout)")
    vc.add_argument("--jobs", type=int, default=1, help="parallel copy checks")
    vc.add_argument("--no-figures", action="store_true")
    vc.set_defaults(func=cmd_verify_counterexample)

    sv = sub.add_parser("solve", help="exact list colouring")
    sv.add_argument("--graph", required=True)
    sv.add_argument("--lists", required=True)
    sv.add_argument("--out")
    sv.set_defaults(func=cmd_solve)

    gc = sub.add_parser("gallai-check", help="Gallai tree and bad-list certificate")
    gc.add_argument("--graph", required=True)
    gc.add_argument("--lists", required=True)
    gc.add_argument("--out")
    gc.set_defaults(func=cmd_gallai_check)

    bp = sub.add_parser("bipolar", help="bipolar orientation of an embedded graph")
    bp.add_argument("--graph", required=True)
    bp.add_argument("--s", type=int, required=True)
    bp.add_argument("--t", type=int, required=True)
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bipolar)

    vn = sub.add_parser("very-nice", help="very nice incidence subgraph")
    vn.add_argument("--graph", required=True)
    vn.add_argument("--vstar", type=int, default=None)
    vn.add_argument("--out")
    vn.set_defaults(func=cmd_very_nice)

    co = sub.add_parser("color", help="run the guarded colouring procedure")
    co.add_argument("--graph", required=True)
    co.add_argument("--lists", required=True)
    co.add_argument("--k", type=int, default=12)
    co.add_argument("--vstar", type=int, default=None)
    co.add_argument("--trace", help="write the step trace here")
    co.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    co.add_argument("--out")
    co.add_argument("--fast", action="store_true", help="skip per-step invariant checks")
    co.add_argument("--no-figures", action="store_true")
    co.set_defaults(func=cmd_color)

    gn = sub.add_parser("gen", help="emit a seeded instance")
    gn.add_argument("--kind", choices=["double-wheel", "triangulation"], required=True)
    gn.add_argument("--rim", type=int, default=12)
    gn.add_argument("--n", type=int, default=24)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--k", type=int, default=12)
    gn.add_argument("--colors", type=int, default=20)
    gn.add_argument("--out")
    gn.add_argument("--lists-out")
    gn.set_defaults(func=cmd_gen)

    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except OracleCapExceeded as exc:
        sys.stderr.write(f"oracle cap exceeded: {exc}\n")
        return EXIT_CAP
    except PartitionError as exc:
        sys.stderr.write(f"partition error: {exc}\n")
        return EXIT_INPUT
    except (GraphError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
