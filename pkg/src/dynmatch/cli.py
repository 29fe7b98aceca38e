"""Command-line entry point: ``dynmatch <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .bench import (
    ENGINE_KINDS,
    BenchConfig,
    checkpoints_csv,
    compare_engines,
    dumps_report,
    run_bench,
    trend_csv,
    trend_report,
    validate_report,
)
from .errors import DynMatchError
from .oracle import exact_matching
from .ors import (
    churn_stream_gen,
    core_stream_gen,
    greedy_ors_pack,
    hard_sequence_gen,
    random_stream_gen,
    read_instance,
    verify_ors,
    verify_rs,
    write_instance,
)
from .streams import format_stream, load_graph, parse_stream

log = logging.getLogger("dynmatch")


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("DYNMATCH_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise DynMatchError(f"DYNMATCH_SEED must be an integer, got {env!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="vertex count (default: from the stream header)")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--threshold", type=int, default=None, help="phase length (default ceil(n^1.5))")
    p.add_argument("--seed", type=int, default=None, help="root seed (fallback: $DYNMATCH_SEED, then 0)")
    p.add_argument("--check-every", type=int, default=0, help="extra checkpoint every K updates (0: off)")
    p.add_argument("--measure-d", action="store_true", help="measure certificate induced degree exactly")
    p.add_argument("--check", action="store_true", help="verify engine invariants while replaying")
    p.add_argument("--report", type=Path, default=None, help="JSON report path")
    p.add_argument("--csv", type=Path, default=None, help="per-checkpoint CSV (default: beside the report)")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figures beside the report")


def _config(args: argparse.Namespace) -> BenchConfig:
    return BenchConfig(
        epsilon=args.epsilon,
        threshold=args.threshold,
        seed=_resolve_seed(args.seed),
        check_every=args.check_every,
        measure_d=args.measure_d,
        check_invariants=args.check,
        n=args.n,
    )


def _emit(report: dict, args: argparse.Namespace, csv_text: str) -> None:
    validate_report(report)
    if args.report is None:
        sys.stdout.write(dumps_report(report))
        return
    args.report.parent.mkdir(parents=True, exist_ok=True)
    args.report.write_text(dumps_report(report), encoding="utf-8")
    csv_path = args.csv or args.report.with_suffix(".csv")
    csv_path.write_text(csv_text, encoding="utf-8")
    written = [args.report, csv_path]
    if not args.no_figures:
        from .plotting import plot_report

        written += plot_report(report, args.report)
    for path in written:
        print(f"wrote {path}")


def _summarize(report: dict) -> None:
    for kind, sec in report["engines"].items():
        tot = sec["totals"]
        print(
            f"{kind}: checkpoints={tot['checkpoints']} violations={tot['violations']} "
            f"rebuilds={tot['rebuilds']} probes/update={tot['amortized_matrix_probes']:.1f}",
            file=sys.stderr,
        )
    for w in report["flags"]["warnings"]:
        log.warning(w)


def cmd_run(args: argparse.Namespace) -> int:
    stream = parse_stream(args.stream)
    kind = "ors-multiplicative" if args.multiplicative else args.engine
    report = run_bench(stream, kind, _config(args))
    _emit(report, args, checkpoints_csv(report))
    _summarize(report)
    return 0 if report["flags"]["all_ok"] else 1


def cmd_compare(args: argparse.Namespace) -> int:
    stream = parse_stream(args.stream)
    kinds = [k.strip() for k in args.engines.split(",") if k.strip()]
    report = compare_engines(stream, kinds, _config(args))
    _emit(report, args, checkpoints_csv(report))
    _summarize(report)
    return 0 if report["flags"]["all_ok"] else 1


def cmd_trend(args: argparse.Namespace) -> int:
    ns = [int(x) for x in args.ns.split(",")]
    kinds = tuple(k.strip() for k in args.engines.split(","))
    report = trend_report(ns, args.epsilon, args.steps, _resolve_seed(args.seed), kinds=kinds)
    _emit(report, args, trend_csv(report))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(_resolve_seed(args.seed))
    if args.workload == "random":
        stream = random_stream_gen(args.n, args.steps, args.insert_bias, rng)
    elif args.workload == "churn":
        stream = churn_stream_gen(args.n, args.steps, args.window, rng)
    elif args.workload == "core":
        stream = core_stream_gen(args.n, args.core, args.steps, args.insert_bias, rng)
    else:
        if args.instance is not None:
            inst = read_instance(args.instance)
        else:
            inst = greedy_ors_pack(args.n, args.r, args.attempts, rng)
        stream = hard_sequence_gen(inst).stream
    text = format_stream(stream)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {args.out} ({len(stream.events)} events on n={stream.n})")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = read_instance(args.file)
    bad = verify_rs(inst) if args.rs else verify_ors(inst)
    label = "RS" if args.rs else "ORS"
    if bad is None:
        print(f"valid {label}: n={inst.n} r={inst.r} t={inst.t}")
        return 0
    print(f"invalid {label}: {bad.kind} at matching {bad.i} (against {bad.j}), witness {bad.witness}")
    return 1


def cmd_pack(args: argparse.Namespace) -> int:
    inst = greedy_ors_pack(args.n, args.r, args.attempts, np.random.default_rng(_resolve_seed(args.seed)))
    write_instance(inst, args.out)
    print(f"wrote {args.out}: n={inst.n} r={inst.r} t={inst.t}")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    n, edges = load_graph(args.graph)
    res = exact_matching(edges, n)
    print(res.size)
    for u, v in res.matching.edges():
        print(u, v)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynmatch", description="Dynamic approximate matching toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="replay a stream through one matcher and check it against the oracle")
    p.add_argument("--stream", type=Path, required=True)
    p.add_argument("--engine", choices=ENGINE_KINDS, default="ors")
    p.add_argument("--multiplicative", action="store_true", help="shorthand for --engine ors-multiplicative")
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="replay a stream jointly through several matchers")
    p.add_argument("--stream", type=Path, required=True)
    p.add_argument("--engines", default="ors,rebuild,maximal", help="comma-separated matcher kinds")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("trend", help="amortized work per update across graph sizes")
    p.add_argument("--ns", default="100,200,400")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--engines", default="ors,rebuild")
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--csv", type=Path, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("gen", help="write a workload stream")
    p.add_argument("--workload", choices=("random", "churn", "core", "hard-ors"), required=True)
    p.add_argument("--n", type=int, default=100, help="vertices (instance vertices m for hard-ors)")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--insert-bias", type=float, default=0.55)
    p.add_argument("--window", type=int, default=200)
    p.add_argument("--core", type=int, default=8, help="core size for the core workload")
    p.add_argument("--instance", type=Path, default=None, help="ORS instance file for hard-ors")
    p.add_argument("--r", type=int, default=None, help="matching size when packing for hard-ors")
    p.add_argument("--attempts", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-ors", help="check an instance file")
    p.add_argument("--file", type=Path, required=True)
    p.add_argument("--rs", action="store_true", help="require inducedness in the whole union")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pack-ors", help="greedily pack an ordered-induced instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--attempts", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("oracle", help="exact maximum matching of a graph or stream file")
    p.add_argument("--graph", type=Path, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "gen" and args.workload == "hard-ors" and args.instance is None and args.r is None:
        parser.error("hard-ors needs --instance or --r")
    try:
        return args.func(args)
    except (DynMatchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
