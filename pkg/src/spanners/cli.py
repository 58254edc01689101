"""Command-line entry point: gen / build / verify / simulate / bench.

Every randomized subcommand requires an explicit --seed; outputs are
byte-reproducible functions of (input, flags, seed).  Exit codes: 0 success,
1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import _rng, congest, graph as graphmod, multiplicative, nearadditive
from . import verify as verifymod
from . import weighted as weightedmod
from .graph import Graph, generate, read_graph, write_graph

STREAM_CLI_GEN = 6

NEARADD_ALGOS = {"nearadd-basic": "basic", "nearadd-improved": "improved",
                 "emulator": "emulator"}


def _load_graph(spec: str, seed: int) -> Graph:
    if ":" in spec:
        return graphmod.parse_graph_spec(spec, seed=_rng.stream_key(seed, STREAM_CLI_GEN))
    return read_graph(spec)


def _emit(report: dict, fmt: str, out=sys.stdout):
    if fmt == "kv":
        for k, v in report.items():
            out.write(f"{k}={v}\n")
    elif fmt == "csv":
        out.write(",".join(str(k) for k in report) + "\n")
        out.write(",".join(str(v) for v in report.values()) + "\n")
    else:
        width = max((len(str(k)) for k in report), default=0)
        for k, v in report.items():
            out.write(f"{str(k):<{width}}  {v}\n")


def _cmd_gen(args) -> int:
    params = {}
    if args.model in ("erdos_renyi", "er"):
        params = {"n": args.n, "p": args.p}
    elif args.model == "grid":
        params = {"w": args.w, "h": args.h}
    elif args.model in ("path", "complete"):
        params = {"n": args.n}
    elif args.model == "random_weighted":
        params = {"n": args.n, "p": args.p, "wmax": args.wmax}
    g = generate(args.model, seed=args.seed, **params)
    write_graph(g, args.out)
    print(f"wrote {g.n} vertices, {g.m} edges to {args.out}")
    return 0


def _cmd_build(args) -> int:
    g = _load_graph(args.graph, args.seed)
    algo = args.algo
    if algo == "mult":
        k, c, delta = args.k, args.c, args.delta
        if args.preset:
            c, delta = multiplicative.preset(args.preset, g.n, k, args.eps)
        if delta is not None:
            res = multiplicative.build_spanner_guaranteed(
                g, k=k, c=c, delta=delta, seed=args.seed)
        else:
            res = multiplicative.build_spanner(
                g, multiplicative.ExpClusterParams(k=k, c=c, seed=args.seed))
    elif algo == "weighted":
        res = weightedmod.build_weighted_spanner(
            g, k=args.k, eps=args.eps, seed=args.seed,
            c=args.c if args.c is not None else 4.0)
    elif algo in NEARADD_ALGOS or algo == "nearadd":
        variant = args.variant or NEARADD_ALGOS.get(algo)
        if variant is None:
            raise ValueError("--algo nearadd requires --variant")
        res = nearadditive.build(g, kappa=args.kappa, eps_user=args.eps,
                                 rho=args.rho, variant=variant,
                                 seed=args.seed)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    sub = res.subgraph()
    write_graph(sub, args.out, header_comments=res.header_comments())
    print(f"wrote {sub.m} edges to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph, args.seed)
    h = read_graph(args.spanner)
    if args.alpha is not None:
        rep = verifymod.check_multiplicative(g, h, args.alpha, mode=args.mode)
    else:
        if args.eps is None or args.beta is None:
            raise ValueError("verify needs --alpha or both --eps and --beta")
        rep = verifymod.check_near_additive(g, h, args.eps, args.beta,
                                            emulator=args.emulator)
    report = {"ok": int(rep.ok), "pairs_checked": rep.pairs_checked,
              "max_stretch": rep.max_stretch,
              "max_residual": rep.max_residual,
              "violations": len(rep.violations)}
    _emit(report, args.report)
    return 0 if rep.ok else 1


def _cmd_simulate(args) -> int:
    g = _load_graph(args.graph, args.seed)
    params = multiplicative.ExpClusterParams(k=args.k, c=args.c, seed=args.seed)
    t = congest.simulate(g, params, log_messages=bool(args.trace) or args.log)
    if args.trace:
        congest.write_trace(t, args.trace)
    if args.out:
        sub = t.subgraph()
        header = [f"algo=congest k={args.k} c={args.c!r} seed={args.seed} "
                  f"rounds={t.rounds_executed} radii_ok={int(t.radii_ok)}"]
        write_graph(sub, args.out, header_comments=header)
    report = {"rounds": t.rounds_executed, "edges": t.edge_count,
              "radii_ok": int(t.radii_ok),
              "total_messages": t.total_messages,
              "max_per_edge_per_round": t.max_messages_per_edge_per_round,
              "retention_cap_exceeded": int(t.retention_cap_exceeded)}
    _emit(report, args.report)
    return 0


def _cmd_bench(args) -> int:
    g = _load_graph(args.graph, args.seed)
    algo = args.algo
    if algo == "mult":
        def builder(s):
            return multiplicative.build_spanner(
                g, multiplicative.ExpClusterParams(k=args.k, c=args.c, seed=s))
    elif algo == "weighted":
        def builder(s):
            return weightedmod.build_weighted_spanner(
                g, k=args.k, eps=args.eps, seed=s)
    elif algo in NEARADD_ALGOS:
        def builder(s):
            return nearadditive.build(g, kappa=args.kappa, eps_user=args.eps,
                                      rho=args.rho,
                                      variant=NEARADD_ALGOS[algo], seed=s)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    stats = verifymod.run_trials(builder, trials=args.trials, seed=args.seed)
    report = stats.as_dict()
    if algo == "mult":
        bound = (args.c * g.n) ** (1.0 / args.k) * g.n
        report["size_law_bound"] = bound
        report["mean_within_bound"] = int(stats.mean_edges <= 1.05 * bound)
    _emit(report, args.report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spanners",
        description="randomized spanners, emulators and their verification")
    sub = ap.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("gen", help="write a generated graph to a file")
    gen.add_argument("--model", required=True,
                     choices=["erdos_renyi", "er", "grid", "path", "complete",
                              "random_weighted"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--p", type=float)
    gen.add_argument("--w", type=int)
    gen.add_argument("--h", type=int)
    gen.add_argument("--wmax", type=float)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    build = sub.add_parser("build", help="build a spanner or emulator")
    build.add_argument("--graph", required=True,
                       help="edge-list file or generator spec like er:500:0.05")
    build.add_argument("--algo", required=True,
                       choices=["mult", "weighted", "nearadd", "nearadd-basic",
                                "nearadd-improved", "emulator"])
    build.add_argument("--k", type=int)
    build.add_argument("--c", type=float)
    build.add_argument("--delta", type=float)
    build.add_argument("--kappa", type=int)
    build.add_argument("--eps", type=float)
    build.add_argument("--rho", type=float)
    build.add_argument("--variant", choices=list(nearadditive.VARIANTS))
    build.add_argument("--preset",
                       choices=["linear_time", "distributed_eps", "ultra_sparse"])
    build.add_argument("--seed", type=int, required=True)
    build.add_argument("--out", required=True)
    build.set_defaults(func=_cmd_build)

    ver = sub.add_parser("verify", help="verify a spanner/emulator file")
    ver.add_argument("--graph", required=True)
    ver.add_argument("--spanner", required=True)
    ver.add_argument("--alpha", type=float)
    ver.add_argument("--eps", type=float)
    ver.add_argument("--beta", type=float)
    ver.add_argument("--emulator", action="store_true",
                     help="also check the d_G <= d_H lower bound")
    ver.add_argument("--mode", choices=["edges", "all_pairs"], default="edges")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--report", choices=["text", "kv", "csv"], default="text")
    ver.set_defaults(func=_cmd_verify)

    sim = sub.add_parser("simulate", help="run the CONGEST-round simulation")
    sim.add_argument("--graph", required=True)
    sim.add_argument("--k", type=int, required=True)
    sim.add_argument("--c", type=float, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--out")
    sim.add_argument("--trace", help="write 'round u->v origin r dist' lines")
    sim.add_argument("--log", action="store_true")
    sim.add_argument("--report", choices=["text", "kv", "csv"], default="text")
    sim.set_defaults(func=_cmd_simulate)

    bench = sub.add_parser("bench", help="aggregate seeded trials")
    bench.add_argument("--graph", required=True)
    bench.add_argument("--algo", required=True,
                       choices=["mult", "weighted", "nearadd-basic",
                                "nearadd-improved", "emulator"])
    bench.add_argument("--k", type=int)
    bench.add_argument("--c", type=float, default=4.0)
    bench.add_argument("--delta", type=float)
    bench.add_argument("--kappa", type=int)
    bench.add_argument("--eps", type=float)
    bench.add_argument("--rho", type=float)
    bench.add_argument("--trials", type=int, required=True)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--report", choices=["text", "kv", "csv"], default="text")
    bench.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, graphmod.GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except multiplicative.GiveUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
