"""Command-line front end.

Commands: entropy | add-edge | add-vertex | persistence | verify |
generate | count.  Data goes to standard output, diagnostics to the
error stream.  Exit codes: 0 success, 2 parse/validation failure,
3 solver failure, 4 precondition violation, 5 failed verify properties.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import counting, persistence
from .entropy import volume_entropy
from .errors import (AdjacentVertices, DisconnectedPair, DivergentSeries,
                     EntrographError, HorizonTooLarge, MarginTooSmall,
                     NonConvergence, NonPositiveLength, PreconditionError,
                     TooFewAttachments, UnknownFormat, UnknownVertex,
                     ValidationFailed)
from .genfun import check_symmetry
from .graph import MetricGraph, add_edge, add_vertex, components, reduce, validate
from .graphio import ParseError, generate_graph, load_graph, serialize_json
from .incremental import (VertexVariant, check_factorization, entropy_after_edge,
                          entropy_after_vertex)
from .spectral import TransferMode

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_PRECONDITION = 4
EXIT_VERIFY = 5

_PRECONDITION_ERRORS = (AdjacentVertices, DisconnectedPair,
                        TooFewAttachments, PreconditionError, UnknownVertex,
                        NonPositiveLength, HorizonTooLarge, UnknownFormat,
                        MarginTooSmall, ValueError)
_SOLVER_ERRORS = (NonConvergence, DivergentSeries)


@dataclass
class RunConfig:
    tol: float = 1e-10
    max_iter: int = 10_000
    cap: int = 10_000_000
    margin: float = 1e-6
    seed: int = 0
    fmt: str = "csv"
    threads: int = 1


def _config(args) -> RunConfig:
    threads = max(int(os.environ.get("ENTROGRAPH_THREADS", "1")), 1)
    return RunConfig(tol=args.tol, max_iter=args.max_iter, cap=int(args.cap),
                     margin=args.margin, seed=getattr(args, "seed", 0),
                     fmt=getattr(args, "format", "csv"), threads=threads)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> MetricGraph:
    graph = load_graph(path)
    report = validate(graph)
    if report:
        raise ValidationFailed(report)
    return graph


def cmd_entropy(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    res = volume_entropy(graph, tol=cfg.tol, max_iter=cfg.max_iter)
    print(f"h = {res.h:.12g}")
    print(f"residual = {res.residual:.3e}")
    print(f"method = {res.method}  iterations = {res.iterations}")
    for cid, h in res.per_component:
        print(f"component {cid}: h = {h:.12g}")
    return EXIT_OK


def cmd_add_edge(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    inc = entropy_after_edge(graph, args.x, args.y, args.length, tol=cfg.tol,
                             rel_margin=cfg.margin)
    edited = add_edge(graph, args.x, args.y, args.length)
    direct = volume_entropy(edited, tol=cfg.tol)
    comp_x = next(c for c, _ in components(graph)
                  if args.x in c.vertex_set)
    others = [h for cid, h in volume_entropy(graph, tol=cfg.tol).per_component
              if cid not in comp_x.vertex_set]
    combined = max([inc.h_prime] + others)
    print(f"h_base = {inc.h_base:.12g}")
    print(f"incremental h' = {inc.h_prime:.12g}  "
          f"(residual {inc.residual:.3e}, {inc.iterations} evaluations)")
    print(f"direct h' = {direct.h:.12g}")
    print(f"|incremental - direct| = {abs(combined - direct.h):.3e}")
    return EXIT_OK


def cmd_add_vertex(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    attachments = _parse_attachments(args.attach)
    res_da = entropy_after_vertex(graph, attachments,
                                  VertexVariant.TRANSFER_DA, tol=cfg.tol)
    res_pf = entropy_after_vertex(graph, attachments,
                                  VertexVariant.OFF_DIAGONAL, tol=cfg.tol)
    edited = add_vertex(graph, attachments)
    direct = volume_entropy(edited, tol=cfg.tol)
    print(f"h_base = {res_da.h_base:.12g}")
    print(f"transfer-da h' = {res_da.h_prime:.12g}  "
          f"(residual {res_da.spectral_residual:.3e})")
    print(f"off-diagonal h' = {res_pf.h_prime:.12g}  "
          f"(residual {res_pf.spectral_residual:.3e})")
    print(f"direct h' = {direct.h:.12g}")
    print(f"|transfer-da - direct| = {abs(res_da.h_prime - direct.h):.3e}")
    print(f"|off-diagonal - direct| = {abs(res_pf.h_prime - direct.h):.3e}")
    print(f"|transfer-da - off-diagonal| = "
          f"{abs(res_da.h_prime - res_pf.h_prime):.3e}")
    return EXIT_OK


def _parse_attachments(specs) -> list[tuple[str, float]]:
    out = []
    for spec in specs:
        try:
            vertex, length = spec.rsplit(":", 1)
            out.append((vertex, float(length)))
        except ValueError as exc:
            raise ValueError(
                f"bad attachment {spec!r}; expected VERTEX:LENGTH") from exc
    return out


def cmd_persistence(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    curve = persistence.persistent_entropy(graph, strategy=args.strategy,
                                           tol=cfg.tol)
    payload = persistence.export_curve(curve, cfg.fmt).decode()
    if args.bench:
        payload += _bench_report(graph, cfg)
    _emit(payload, args.out)
    return EXIT_OK


def _bench_report(graph: MetricGraph, cfg: RunConfig) -> str:
    curves = {name: persistence.persistent_entropy(graph, strategy=name,
                                                   tol=cfg.tol)
              for name in ("direct", "incremental", "auto")}
    lines = ["bench,strategy,epsilon,ms,step_strategy"]
    for name, curve in curves.items():
        for step in curve.steps:
            lines.append(f"bench,{name},{step.epsilon!r},{step.ms:.3f},"
                         f"{step.strategy.value}")
    crossover = None
    direct, incr = curves["direct"].steps, curves["incremental"].steps
    for sd, si in zip(direct, incr):
        if si.strategy is not persistence.StepStrategy.DIRECT \
                and si.ms < sd.ms:
            crossover = sd.epsilon
            break
    lines.append(f"crossover,{'' if crossover is None else repr(crossover)}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    results: list[tuple[str, str, str]] = []  # (name, status, detail)

    def record(name, status, detail=""):
        results.append((name, status, detail))

    res = volume_entropy(graph, tol=cfg.tol)
    h = res.h
    record("entropy-solve", "PASS", f"h={h:.9g} residual={res.residual:.2e}")

    comps = [c for c, _ in components(graph) if len(c.vertex_set) >= 2]
    if comps:
        comp = comps[0]
        a, b = sorted(comp.vertex_set)[:2]
        resid = check_symmetry(comp, a, b, h + 0.5)
        status = "PASS" if resid <= 1e-10 else "FAIL"
        record("genfun-symmetry", status, f"|f_xy-f_yx|={resid:.2e}")
    else:
        record("genfun-symmetry", "SKIPPED", "no 2-vertex component")

    red = reduce(graph)
    core = red.graph
    hyper = [c for c, _ in components(core)] if core.vertices else []
    skip_reason = "no hyperbolic component" if not hyper else None
    if hyper:
        core0 = hyper[0]
        v = max(core0.vertex_set, key=lambda w: (core0.degree(w), w))
        r_cap = counting.horizon_for_budget(core0, v, min(cfg.cap, 200_000))
        longest = max(d.length for d in core0.darts)
        if r_cap < 3.0 * longest:
            skip_reason = (f"cap {cfg.cap:g} allows horizon "
                           f"{r_cap:.3g} only")
    if skip_reason is None:
        try:
            rep = counting.growth_bounds(core0, v, r_cap, cap=cfg.cap)
            record("growth-bounds",
                   "PASS" if rep.passed else "FAIL",
                   f"M={rep.m_formula:.4g} m={rep.m_empirical:.4g} "
                   f"rho(A)={rep.rho_a:.9f}")
        except HorizonTooLarge as exc:
            record("growth-bounds", "SKIPPED", str(exc))
        try:
            rec = counting.verify_recursions(core0, v, r_max=0.6 * r_cap,
                                             cap=cfg.cap)
            record("recursions", "PASS" if rec.passed else "FAIL",
                   f"{len(rec.r_grid)} radii")
        except HorizonTooLarge as exc:
            record("recursions", "SKIPPED", str(exc))
        try:
            from .counting import EnumerationSpec, PathKind, laplace_check
            x0 = sorted(core0.vertex_set)[0]
            prof = counting.enumerate_paths(core0, EnumerationSpec(
                PathKind.PATHS_FROM, 0.8 * r_cap, x=x0, cap=cfg.cap))
            ok = True
            worst = 0.0
            for tt in (h + 0.2, h + 0.6, h + 1.0, h + 1.4, h + 2.0):
                rep_l = laplace_check(prof, core0, tt)
                ok = ok and rep_l.passed
                worst = max(worst, abs(rep_l.f_value - rep_l.truncated))
            record("laplace", "PASS" if ok else "FAIL",
                   f"max truncation {worst:.2e}")
        except HorizonTooLarge as exc:
            record("laplace", "SKIPPED", str(exc))
    else:
        for name in ("growth-bounds", "recursions", "laplace"):
            record(name, "SKIPPED", skip_reason)

    pair = _first_nonadjacent_pair(graph)
    if pair:
        x, y = pair
        inc = entropy_after_edge(graph, x, y, 1.0, tol=cfg.tol)
        direct = volume_entropy(add_edge(graph, x, y, 1.0), tol=cfg.tol)
        comp = next(c for c, _ in components(graph) if x in c.vertex_set)
        others = [hh for cid, hh in
                  volume_entropy(graph, tol=cfg.tol).per_component
                  if cid not in comp.vertex_set]
        combined = max([inc.h_prime] + others)
        diff = abs(combined - direct.h)
        record("edge-cross-method", "PASS" if diff <= 1e-8 else "FAIL",
               f"|inc-direct|={diff:.2e}")
    else:
        record("edge-cross-method", "SKIPPED", "no non-adjacent pair")

    if hyper and len(hyper[0].vertex_set) >= 3:
        targets = sorted(hyper[0].vertex_set)[:3]
        attach = [(t, 1.0) for t in targets]
        rep6 = check_factorization(hyper[0], attach, h + 0.3)
        record("factorization", "INFO",
               f"rho(F)={rep6.rho_f:.6g} rho(L)rho(M)={rep6.product:.6g} "
               f"ratio={rep6.ratio:.4g}")
    else:
        record("factorization", "SKIPPED", "needs 3 vertices in one component")

    failed = [name for name, status, _ in results if status == "FAIL"]
    for name, status, detail in results:
        print(f"{status:7s} {name}" + (f"  {detail}" if detail else ""))
    if failed:
        print("failed properties: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _first_nonadjacent_pair(graph: MetricGraph):
    for comp, _ in components(graph):
        verts = sorted(comp.vertex_set)
        for i, x in enumerate(verts):
            neighbors = {comp.darts[d].head for d in comp.out_darts(x)}
            for y in verts[i + 1:]:
                if y not in neighbors:
                    return x, y
    return None


def cmd_generate(args) -> int:
    graph = generate_graph(args.seed, args.vertices, args.edges,
                           length_model=args.model,
                           require_hyperbolic=args.hyperbolic)
    _emit(serialize_json(graph), args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = _config(args)
    graph = _load(args.file)
    kind = {"paths-from": counting.PathKind.PATHS_FROM,
            "paths-xy": counting.PathKind.PATHS_XY,
            "cycles": counting.PathKind.CYCLES_AT,
            "primitive": counting.PathKind.PRIMITIVE_CYCLES_AT}[args.kind]
    mode = TransferMode.BACKTRACKING if args.mode == "bt" \
        else TransferMode.NON_BACKTRACKING
    spec = counting.EnumerationSpec(kind, args.r, mode, x=args.x, y=args.y,
                                    v=args.v, cap=cfg.cap)
    profile = counting.enumerate_paths(graph, spec, threads=cfg.threads)
    if cfg.fmt == "json":
        uniq = {}
        total = 0
        for ell in profile.lengths.tolist():
            total += 1
            uniq[ell] = total
        payload = json.dumps(
            {"kind": args.kind, "mode": args.mode, "r_max": args.r,
             "total": int(profile.lengths.size),
             "cumulative": [{"length": k, "count": v}
                            for k, v in uniq.items()]}, indent=2) + "\n"
    else:
        payload = profile.to_csv()
    _emit(payload, args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrograph",
        description="Volume entropy of metric graphs: solvers, "
                    "incremental formulas, counting checks, persistence.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--max-iter", type=int, default=10_000)
    common.add_argument("--cap", type=float, default=10_000_000)
    common.add_argument("--margin", type=float, default=1e-6)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common],
                       help="volume entropy of a graph file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("add-edge", parents=[common],
                       help="incremental vs direct entropy after one edge")
    p.add_argument("file")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("length", type=float)
    p.set_defaults(fn=cmd_add_edge)

    p = sub.add_parser("add-vertex", parents=[common],
                       help="incremental vs direct entropy after a vertex")
    p.add_argument("file")
    p.add_argument("--attach", action="append", required=True,
                   metavar="VERTEX:LENGTH")
    p.set_defaults(fn=cmd_add_vertex)

    p = sub.add_parser("persistence", parents=[common],
                       help="persistent entropy curve over edge lengths")
    p.add_argument("file")
    p.add_argument("--strategy", choices=("direct", "incremental", "auto"),
                   default="auto")
    p.add_argument("--bench", action="store_true")
    p.set_defaults(fn=cmd_persistence)

    p = sub.add_parser("verify", parents=[common],
                       help="run the property suite on one graph")
    p.add_argument("file")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("generate", parents=[common],
                       help="seeded random connected graph file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--model", choices=("generic", "lattice"),
                   default="generic")
    p.add_argument("--hyperbolic", action="store_true",
                   help="require at least Betti number 2")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("count", parents=[common],
                       help="enumerate paths/cycles below a horizon")
    p.add_argument("file")
    p.add_argument("--kind", choices=("paths-from", "paths-xy", "cycles",
                                      "primitive"), required=True)
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--v", default=None)
    p.add_argument("--r", type=float, required=True,
                   help="enumeration horizon")
    p.add_argument("--mode", choices=("nb", "bt"), default="nb")
    p.set_defaults(fn=cmd_count)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationFailed, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except _SOLVER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except EntrographError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
