"""Command-line harness: single runs, multistart benchmarks, grid sweeps.

Datasets come from a generator preset (--preset), a registered benchmark
file (--data with --dataset), or a raw delimited file (--data with manual
column flags).  Benchmark run r uses seed master+r; sweep seeds are derived
from the cell's parameter values and the run index, so any subset of cells
reruns to identical numbers.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import itertools
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .colony import AcoParams, run_baco
from .ingest import (REGISTRY, IngestConfig, IngestError, load_points,
                     load_registry, save_centroids)
from .kmeans import KMeansConfig, run_bacok, run_km
from .metrics import RunRecord, performance_percentage
from .model import Dataset
from .rng import derive_seed, float_key
from .synth import generate, preset, reference_inertia


def _add_dataset_flags(sp):
    g = sp.add_argument_group("dataset")
    g.add_argument("--preset", help="generator preset: t105, t525 or t2100")
    g.add_argument("--data-seed", type=int, default=0,
                   help="generator seed for --preset (default 0)")
    g.add_argument("--data", help="path to a delimited text file")
    g.add_argument("--dataset",
                   help=f"registered layout for --data: {', '.join(sorted(REGISTRY))}")
    g.add_argument("--delimiter", default="comma",
                   choices=["comma", "whitespace", "tab", "semicolon"])
    g.add_argument("--drop-columns", default="",
                   help="comma-separated 0-based column indices to drop")
    g.add_argument("--label-column", type=int, default=None,
                   help="0-based column holding ground-truth labels")
    g.add_argument("--has-header", action="store_true")
    g.add_argument("--standardize", action="store_true",
                   help="z-score every feature column")
    g.add_argument("--k", type=int, default=None,
                   help="number of clusters (defaults to the preset/registry value)")


def _add_param_flags(sp):
    g = sp.add_argument_group("algorithm")
    g.add_argument("--algo", default="bacok", choices=["km", "baco", "bacok"])
    g.add_argument("--alpha", type=float, default=0.25)
    g.add_argument("--beta", type=float, default=2.5)
    g.add_argument("--rho", type=float, default=0.5)
    g.add_argument("--q", type=float, default=250.0)
    g.add_argument("--ants", type=int, default=20)
    g.add_argument("--stagnation", type=int, default=10)
    g.add_argument("--kmeans-tol", type=float, default=1e-4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--reference-w", type=float, default=None,
                   help="reference inertia for hit counting")
    g.add_argument("--out", default=".", help="output directory")
    g.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: all hardware threads)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acoclust",
        description="Ant-colony clustering (BACO/BACOK) and K-means harness")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("cluster", help="one run; writes assignments, "
                        "centroids and a JSON run record")
    _add_dataset_flags(sp)
    _add_param_flags(sp)

    sp = sub.add_parser("benchmark", help="multistart runs with summary stats")
    _add_dataset_flags(sp)
    _add_param_flags(sp)
    sp.add_argument("--runs", type=int, default=100)

    sp = sub.add_parser("sweep", help="parameter-grid sweep over alpha/beta/rho/q")
    _add_dataset_flags(sp)
    _add_param_flags(sp)
    sp.add_argument("--alpha-values", default="0,0.25,2.5")
    sp.add_argument("--beta-values", default="0,2.5")
    sp.add_argument("--rho-values", default="0.5")
    sp.add_argument("--q-values", default="250")
    sp.add_argument("--runs-per-cell", type=int, default=50)
    return parser


class CliError(ValueError):
    pass


def _standardized(data: Dataset) -> Dataset:
    mean = data.points.mean(axis=0)
    std = data.points.std(axis=0, ddof=0)
    if (std == 0).any():
        raise CliError("cannot standardize: a feature column is constant")
    return Dataset((data.points - mean) / std, name=data.name,
                   truth_labels=data.truth_labels)


def _resolve_dataset(args):
    """Build (dataset, k) from the dataset flags."""
    if args.preset and args.data:
        raise CliError("--preset and --data are mutually exclusive")
    if args.preset:
        spec = preset(args.preset, args.data_seed)
        data = generate(spec)
        if args.standardize:
            data = _standardized(data)
        k = spec.k
    elif args.data:
        if args.dataset:
            data = load_registry(args.dataset, args.data,
                                 standardize=args.standardize)
            k = REGISTRY[args.dataset.strip().lower()].k
        else:
            drops = tuple(int(c) for c in args.drop_columns.split(",") if c.strip())
            config = IngestConfig(delimiter=args.delimiter, drop_columns=drops,
                                  label_column=args.label_column,
                                  standardize=args.standardize,
                                  has_header=args.has_header)
            data = load_points(args.data, config)
            k = None
            if data.truth_labels is not None:
                k = int(data.truth_labels.max())
    else:
        raise CliError("need a dataset: --preset or --data")
    if args.k is not None:
        k = args.k
    if k is None:
        raise CliError("number of clusters unknown; pass --k")
    if k < 1:
        raise CliError("--k must be >= 1")
    return data, k


def _resolve_reference(args, data: Dataset):
    """Reference W for hit counting: explicit flag, then ground truth,
    else None (callers fall back to the best observed run)."""
    if args.reference_w is not None:
        return float(args.reference_w), "flag"
    if data.truth_labels is not None:
        return reference_inertia(data), "truth"
    return None, "self"


def _build_params(args, k: int) -> AcoParams:
    return AcoParams(k_clusters=k, alpha=args.alpha, beta=args.beta,
                     rho=args.rho, q=args.q, m_ants=args.ants,
                     stagnation_limit=args.stagnation, seed=args.seed)


def _run_one(data, algorithm, params, kconfig, k, seed, reference_w):
    if algorithm == "km":
        return run_km(data, k, seed=seed, config=kconfig,
                      reference_w=reference_w,
                      hit_rel_tol=params.hit_rel_tol)
    if algorithm == "baco":
        return run_baco(data, params.with_seed(seed), reference_w=reference_w)
    return run_bacok(data, params.with_seed(seed), config=kconfig,
                     reference_w=reference_w)


def _pool_task(payload):
    data, algorithm, params, kconfig, k, seed, reference_w = payload
    _solution, record = _run_one(data, algorithm, params, kconfig, k, seed,
                                 reference_w)
    return record


def _execute(payloads, jobs):
    """Run payloads, returning records in submission order."""
    jobs = jobs if jobs and jobs > 0 else (os.cpu_count() or 1)
    jobs = min(jobs, len(payloads))
    if jobs <= 1:
        return [_pool_task(p) for p in payloads]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_pool_task, payloads, chunksize=8))


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _rewrite_hits(records, reference_w, rel_tol):
    for r in records:
        r.hit = (abs(r.final_w - reference_w) / reference_w <= rel_tol
                 if reference_w > 0 else r.final_w == reference_w)


def cmd_cluster(args) -> int:
    data, k = _resolve_dataset(args)
    reference_w, _mode = _resolve_reference(args, data)
    params = _build_params(args, k)
    kconfig = KMeansConfig(convergence_tol=args.kmeans_tol)
    solution, record = _run_one(data, args.algo, params, kconfig, k,
                                args.seed, reference_w)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "assignments.txt", "w", encoding="utf-8") as fh:
        for label in solution.assignment + 1:
            fh.write(f"{int(label)}\n")
    save_centroids(out / "centroids.txt", solution.centroids)
    with open(out / "record.json", "w", encoding="utf-8") as fh:
        json.dump(record.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{record.algorithm} on {data.name}: final W = {_fmt(record.final_w)} "
          f"after {record.iterations} iterations")
    print(f"wrote {out / 'assignments.txt'}, {out / 'centroids.txt'}, "
          f"{out / 'record.json'}")
    return 0


def cmd_benchmark(args) -> int:
    if args.runs < 1:
        raise CliError("--runs must be >= 1")
    data, k = _resolve_dataset(args)
    reference_w, mode = _resolve_reference(args, data)
    params = _build_params(args, k)
    kconfig = KMeansConfig(convergence_tol=args.kmeans_tol)

    payloads = [(data, args.algo, params, kconfig, k, args.seed + r, reference_w)
                for r in range(args.runs)]
    records = _execute(payloads, args.jobs)

    if reference_w is None:
        reference_w = min(r.final_w for r in records)
    _rewrite_hits(records, reference_w, params.hit_rel_tol)
    stats = performance_percentage(records, reference_w,
                                   rel_tol=params.hit_rel_tol)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    algo = records[0].algorithm
    with open(out / "summary.csv", "w", encoding="utf-8") as fh:
        fh.write("dataset,algorithm,performance_pct,w_stddev,time_mean,time_stddev\n")
        fh.write(",".join([data.name, algo, _fmt(stats.performance_pct),
                           _fmt(stats.w_stddev), _fmt(stats.time_mean),
                           _fmt(stats.time_stddev)]) + "\n")
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        payload = {"dataset": data.name, "algorithm": algo,
                   "reference_w": reference_w, "reference_mode": mode,
                   **stats.to_dict()}
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "runs.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
    print(f"{algo} on {data.name}: {stats.performance_pct:g}% of {args.runs} "
          f"runs hit W = {_fmt(reference_w)} ({mode} reference), "
          f"w_stddev = {_fmt(stats.w_stddev)}")
    print(f"wrote {out / 'summary.csv'}, {out / 'summary.json'}, "
          f"{out / 'runs.jsonl'}")
    return 0


def _parse_values(text: str, flag: str):
    try:
        values = sorted({float(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise CliError(f"{flag}: could not parse {text!r}") from None
    if not values:
        raise CliError(f"{flag}: need at least one value")
    return values


def cmd_sweep(args) -> int:
    if args.runs_per_cell < 1:
        raise CliError("--runs-per-cell must be >= 1")
    data, k = _resolve_dataset(args)
    reference_w, mode = _resolve_reference(args, data)
    base = _build_params(args, k)
    kconfig = KMeansConfig(convergence_tol=args.kmeans_tol)

    alphas = _parse_values(args.alpha_values, "--alpha-values")
    betas = _parse_values(args.beta_values, "--beta-values")
    rhos = _parse_values(args.rho_values, "--rho-values")
    qs = _parse_values(args.q_values, "--q-values")
    cells = list(itertools.product(alphas, betas, rhos, qs))

    payloads = []
    for (alpha, beta, rho, q) in cells:
        params = replace(base, alpha=alpha, beta=beta, rho=rho, q=q)
        for r in range(args.runs_per_cell):
            seed = derive_seed(args.seed, float_key(alpha), float_key(beta),
                               float_key(rho), float_key(q), r)
            payloads.append((data, args.algo, params, kconfig, k, seed,
                             reference_w))
    records = _execute(payloads, args.jobs)

    if reference_w is None:
        reference_w = min(r.final_w for r in records)
    _rewrite_hits(records, reference_w, base.hit_rel_tol)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("alpha,beta,rho,q,performance_pct,w_stddev\n")
        for c, (alpha, beta, rho, q) in enumerate(cells):
            chunk = records[c * args.runs_per_cell:(c + 1) * args.runs_per_cell]
            stats = performance_percentage(chunk, reference_w,
                                           rel_tol=base.hit_rel_tol)
            fh.write(",".join([_fmt(alpha), _fmt(beta), _fmt(rho), _fmt(q),
                               _fmt(stats.performance_pct),
                               _fmt(stats.w_stddev)]) + "\n")
    print(f"swept {len(cells)} cells x {args.runs_per_cell} runs on "
          f"{data.name} ({mode} reference); wrote {path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "cluster":
            return cmd_cluster(args)
        if args.command == "benchmark":
            return cmd_benchmark(args)
        return cmd_sweep(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
