"""Command-line front-end: anonymize, verify, synth and experiment suites.

Every run that writes files also writes a JSON manifest recording the
exact parameters, so results can be reproduced byte for byte (timing
fields aside).  TGANON_THREADS caps the worker count used for restarts
and per-slice stages.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .anonymizer import AnonymizerConfig, degree_anonymization
from .graph_core import (
    degree_matrix,
    edge_edit_count,
    format_decimal,
    is_k_anonymous,
    normalized_cost,
    read_temporal_edgelist,
    rebucket,
    write_degree_matrix_csv,
    write_temporal_edgelist,
)
from .metrics import utility_report
from .pipeline import run_pipeline
from .realizability import (
    brute_force_profile_repair,
    is_realizable,
    random_nonrealizable_profile,
    repair_profile,
)
from .synthgen import DEFAULT_THETA_SWEEP, generate

EXPERIMENT_SUITES = (
    "correlation",
    "k-sweep",
    "resolution",
    "utility",
    "realizability-cdf",
    "greedy-vs-exact",
)


def default_workers() -> int:
    env = os.environ.get("TGANON_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(f"TGANON_THREADS must be an integer, got {env!r}")
    return min(os.cpu_count() or 1, 8)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, payload: dict) -> None:
    payload = dict(payload, version=__version__)
    outputs = payload.get("outputs", [])
    payload["output_sha256"] = {name: _sha256(out_dir / name) for name in outputs}
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _mean_stderr(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if len(arr) < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / np.sqrt(len(arr)))


def cmd_anonymize(args) -> int:
    g = read_temporal_edgelist(args.input)
    if args.bucket > 1:
        g = rebucket(g, args.bucket)
    cfg = AnonymizerConfig(
        k=args.k,
        restarts=args.restarts,
        inner_iters=args.inner_iters,
        greedy_perms=args.greedy_perms,
        seed=args.seed,
        mode=args.assignment,
    )
    workers = default_workers()
    t0 = time.perf_counter()
    result = run_pipeline(g, cfg, workers=workers)
    wall = time.perf_counter() - t0
    checks = result.verify(args.k)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_temporal_edgelist(result.graph, out_dir / "anonymized.tel")
    with open(out_dir / "anonymized_degrees.csv", "w", encoding="utf-8", newline="\n") as fh:
        write_degree_matrix_csv(result.repaired_degrees, fh)
    with open(out_dir / "grouping.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,group\n")
        for i, gidx in enumerate(result.outcome.grouping.assignment):
            fh.write(f"{i},{gidx}\n")
    _write_manifest(out_dir, {
        "command": "anonymize",
        "input": str(args.input),
        "parameters": {
            "k": cfg.k,
            "restarts": cfg.restarts,
            "inner_iters": cfg.inner_iters,
            "greedy_perms": cfg.greedy_perms,
            "seed": cfg.seed,
            "assignment": cfg.mode,
            "bucket": args.bucket,
        },
        "n": g.n,
        "T": g.T,
        "costs": {
            "anonymization_cost": result.anonymization_cost,
            "normalized_cost": result.normalized_anonymization_cost,
            "repair_cost": result.repair_report.total_cost,
            "total_degree_cost": result.total_degree_cost,
            "edge_edits": edge_edit_count(g, result.graph),
        },
        "repair": {
            "columns_repaired": result.repair_report.columns_repaired,
            "column_costs": list(result.repair_report.column_costs),
        },
        "best_restart": result.outcome.best_restart,
        "iterations_used": list(result.outcome.iterations_used),
        "verification": checks,
        "timings": {**result.timings, "total_s": wall},
        "workers": workers,
        "outputs": ["anonymized.tel", "anonymized_degrees.csv", "grouping.csv"],
    })
    if not all(checks.values()):
        print(f"verification failed: {checks}", file=sys.stderr)
        return 1
    print(
        f"anonymized {g.n} nodes x {g.T} slices at k={args.k}: "
        f"cost={result.anonymization_cost} "
        f"normalized={format_decimal(result.normalized_anonymization_cost)} "
        f"edits={edge_edit_count(g, result.graph)} -> {out_dir}"
    )
    return 0


def cmd_verify(args) -> int:
    original = read_temporal_edgelist(args.original)
    anonymized = read_temporal_edgelist(args.anonymized)
    d_orig = degree_matrix(original)
    d_anon = degree_matrix(anonymized)
    _, counts = np.unique(d_anon, axis=0, return_counts=True)
    unique_rows = int((counts == 1).sum())
    report = {
        "k": args.k,
        "k_anonymous": is_k_anonymous(d_anon, args.k),
        "slices_realizable": [
            is_realizable(d_anon[:, t]) for t in range(d_anon.shape[1])
        ],
        "edge_edits": edge_edit_count(original, anonymized),
        "normalized_cost": normalized_cost(d_orig, d_anon),
        "uniquely_reidentifiable": unique_rows,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    ok = report["k_anonymous"] and all(report["slices_realizable"])
    return 0 if ok else 1


def cmd_synth(args) -> int:
    rng = np.random.default_rng(args.seed)
    g = generate(args.n, args.T, args.theta, p0=args.p0, rng=rng)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_temporal_edgelist(g, out)
    print(f"wrote {g.n} nodes x {g.T} slices, theta={args.theta} -> {out}")
    return 0


def _suite_correlation(args, out_dir: Path, workers: int) -> list[str]:
    rows = ["theta,k,mean_cost,stderr"]
    for theta in args.thetas:
        for k in args.ks:
            costs = []
            for rep in range(args.seeds):
                rng = np.random.default_rng((args.seed, int(theta * 1000), k, rep))
                g = generate(args.n, args.T, theta, p0=args.p0, rng=rng)
                d = degree_matrix(g)
                cfg = AnonymizerConfig(k=k, restarts=args.restarts, seed=rep)
                outcome = degree_anonymization(d, cfg, workers=workers)
                costs.append(normalized_cost(d, outcome.anonymized))
            mean, err = _mean_stderr(costs)
            rows.append(f"{format_decimal(theta)},{k},{format_decimal(mean)},{format_decimal(err)}")
    (out_dir / "correlation.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["correlation.csv"]


def _suite_k_sweep(args, out_dir: Path, workers: int) -> list[str]:
    rows = ["k,mean_cost,stderr"]
    theta = args.thetas[0]
    for k in args.ks:
        costs = []
        for rep in range(args.seeds):
            rng = np.random.default_rng((args.seed, int(theta * 1000), rep))
            g = generate(args.n, args.T, theta, p0=args.p0, rng=rng)
            d = degree_matrix(g)
            cfg = AnonymizerConfig(k=k, restarts=args.restarts, seed=rep)
            outcome = degree_anonymization(d, cfg, workers=workers)
            costs.append(normalized_cost(d, outcome.anonymized))
        mean, err = _mean_stderr(costs)
        rows.append(f"{k},{format_decimal(mean)},{format_decimal(err)}")
    (out_dir / "k_sweep.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["k_sweep.csv"]


def _suite_resolution(args, out_dir: Path, workers: int) -> list[str]:
    rows = ["bucket,k,mean_cost,stderr"]
    theta = args.thetas[0]
    for width in args.buckets:
        for k in args.ks:
            costs = []
            for rep in range(args.seeds):
                rng = np.random.default_rng((args.seed, int(theta * 1000), rep))
                g = generate(args.n, args.T, theta, p0=args.p0, rng=rng)
                coarse = rebucket(g, width)
                d = degree_matrix(coarse)
                cfg = AnonymizerConfig(k=k, restarts=args.restarts, seed=rep)
                outcome = degree_anonymization(d, cfg, workers=workers)
                costs.append(normalized_cost(d, outcome.anonymized))
            mean, err = _mean_stderr(costs)
            rows.append(f"{width},{k},{format_decimal(mean)},{format_decimal(err)}")
    (out_dir / "resolution.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["resolution.csv"]


def _suite_utility(args, out_dir: Path, workers: int) -> list[str]:
    rows = ["k,slice,mean_pr_cosine,stderr"]
    theta = args.thetas[0]
    for k in args.ks:
        per_slice: list[list[float]] = [[] for _ in range(args.T)]
        for rep in range(args.seeds):
            rng = np.random.default_rng((args.seed, int(theta * 1000), rep))
            g = generate(args.n, args.T, theta, p0=args.p0, rng=rng)
            cfg = AnonymizerConfig(k=k, restarts=args.restarts, seed=rep)
            result = run_pipeline(g, cfg, workers=workers)
            for row in utility_report(g, result.graph):
                per_slice[row.slice].append(row.pr_cosine)
        for t in range(args.T):
            mean, err = _mean_stderr(per_slice[t])
            rows.append(f"{k},{t},{format_decimal(mean)},{format_decimal(err)}")
    (out_dir / "utility.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["utility.csv"]


def _suite_realizability_cdf(args, out_dir: Path, workers: int) -> list[str]:
    rng = np.random.default_rng(args.seed)
    rows = ["k,heuristic_cost,oracle_cost"]
    for _ in range(args.instances):
        k = int(rng.integers(2, 6))
        profile = random_nonrealizable_profile(10, k, rng)
        repaired = repair_profile(profile, 10)
        _, oracle_cost = brute_force_profile_repair(profile, 10)
        rows.append(f"{k},{profile.cost_to(repaired)},{oracle_cost}")
    (out_dir / "realizability_cdf.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["realizability_cdf.csv"]


def _suite_greedy_vs_exact(args, out_dir: Path, workers: int) -> list[str]:
    rows = ["k,mode,mean_cost,stderr,mean_iterations"]
    theta = args.thetas[0]
    n = min(args.n, 200)  # the exact matching is dense; keep instances modest
    for k in args.ks:
        for mode in ("greedy", "exact"):
            costs = []
            iters = []
            for rep in range(args.seeds):
                rng = np.random.default_rng((args.seed, int(theta * 1000), rep))
                g = generate(n, args.T, theta, p0=args.p0, rng=rng)
                d = degree_matrix(g)
                cfg = AnonymizerConfig(k=k, restarts=args.restarts, seed=rep, mode=mode)
                outcome = degree_anonymization(d, cfg, workers=workers)
                costs.append(normalized_cost(d, outcome.anonymized))
                iters.append(float(np.mean(outcome.iterations_used)))
            mean, err = _mean_stderr(costs)
            rows.append(
                f"{k},{mode},{format_decimal(mean)},{format_decimal(err)},"
                f"{format_decimal(float(np.mean(iters)))}"
            )
    (out_dir / "greedy_vs_exact.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return ["greedy_vs_exact.csv"]


def cmd_experiment(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = default_workers()
    suites = {
        "correlation": _suite_correlation,
        "k-sweep": _suite_k_sweep,
        "resolution": _suite_resolution,
        "utility": _suite_utility,
        "realizability-cdf": _suite_realizability_cdf,
        "greedy-vs-exact": _suite_greedy_vs_exact,
    }
    t0 = time.perf_counter()
    outputs = suites[args.suite](args, out_dir, workers)
    _write_manifest(out_dir, {
        "command": "experiment",
        "suite": args.suite,
        "parameters": {
            "n": args.n,
            "T": args.T,
            "p0": args.p0,
            "thetas": list(args.thetas),
            "ks": list(args.ks),
            "buckets": list(args.buckets),
            "seeds": args.seeds,
            "seed": args.seed,
            "restarts": args.restarts,
            "instances": args.instances,
        },
        "timings": {"total_s": time.perf_counter() - t0},
        "workers": workers,
        "outputs": outputs,
    })
    print(f"suite {args.suite}: wrote {', '.join(outputs)} -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tganon",
        description="k-degree anonymization of temporal graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("anonymize", help="anonymize a temporal edge list")
    p.add_argument("--input", required=True, help="temporal edge-list file")
    p.add_argument("--k", type=int, required=True, help="anonymity level")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--inner-iters", type=int, default=50)
    p.add_argument("--greedy-perms", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignment", choices=("greedy", "exact"), default="greedy")
    p.add_argument("--bucket", type=int, default=1,
                   help="union this many consecutive slices before anonymizing")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_anonymize)

    p = sub.add_parser("verify", help="check an anonymized graph against its original")
    p.add_argument("original")
    p.add_argument("anonymized")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="generate a synthetic temporal graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--p0", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("experiment", help="run a measurement suite, emit plot-ready CSVs")
    p.add_argument("suite", choices=EXPERIMENT_SUITES)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--T", type=int, default=10)
    p.add_argument("--p0", type=float, default=0.1)
    p.add_argument("--thetas", type=float, nargs="+", default=list(DEFAULT_THETA_SWEEP))
    p.add_argument("--ks", type=int, nargs="+", default=[2, 5, 10])
    p.add_argument("--buckets", type=int, nargs="+", default=[1, 2, 4])
    p.add_argument("--seeds", type=int, default=20, help="repetitions per configuration")
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--instances", type=int, default=1000,
                   help="sequence count for realizability-cdf")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
