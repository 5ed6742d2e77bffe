"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 shape mismatch, 4 resource cap.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys
import time
import tracemalloc

import numpy as np

from . import baselines as bl
from .clustering import DEFAULT_MAX_SAMPLES as CLUSTER_CAP
from .clustering import LINKAGES, agglomerate, cut
from .cmet import SUPERVISED, UNSUPERVISED, _score
from .core import ClusterAssignment, validate_matrix
from .datagen import gen_rings, gen_swiss_roll, lift_2_9, load_point_cloud, read_header, write_point_cloud
from .dr_fixtures import PCA, RandomProjection, shuffle_embedding
from .exceptions import (
    InputError,
    InvalidClusterCountError,
    MissingLabelColumnError,
    ResourceCapError,
    ShapeError,
)
from .report import ScoreReport, scatter_svg, to_csv, to_json

EXIT_OK, EXIT_INPUT, EXIT_SHAPE, EXIT_CAP = 0, 2, 3, 4
METRICS = ("trustworthiness", "continuity", "lcmc")


class Measured:
    """Wall time (ms) and traced peak allocation (bytes) of a block."""

    def __enter__(self):
        tracemalloc.start()
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self._t0) * 1e3
        self.peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
        return False


def _thread_limit():
    value = os.environ.get("EMBEDQ_THREADS")
    if not value:
        return contextlib.nullcontext()
    try:
        threads = int(value)
        if threads < 1:
            raise ValueError
    except ValueError:
        raise InputError(f"EMBEDQ_THREADS must be a positive integer, got {value!r}") from None
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=threads)


# loading ---------------------------------------------------------------------

def _load_pair(args):
    header = read_header(args.original)
    has_labels = args.labels_col in header
    original = load_point_cloud(args.original, args.labels_col if has_labels else None)
    emb_header = read_header(args.embedding)
    embedding = load_point_cloud(args.embedding, args.labels_col if args.labels_col in emb_header else None)
    if original.X.shape[0] != embedding.X.shape[0]:
        raise ShapeError(f"original has {original.X.shape[0]} rows but embedding has "
                         f"{embedding.X.shape[0]}")
    return original, embedding, has_labels


def _resolve_mode(args, has_labels):
    if args.clusters is not None or args.mode == UNSUPERVISED:
        if args.clusters is None:
            raise InputError("unsupervised mode needs --clusters")
        return UNSUPERVISED
    if args.mode == SUPERVISED and not has_labels:
        raise MissingLabelColumnError(f"--mode supervised but {args.original} has no "
                                      f"{args.labels_col!r} column")
    if has_labels:
        return SUPERVISED
    raise InputError(f"no {args.labels_col!r} column in {args.original}; pass --clusters for "
                     "unsupervised mode")


def _base_report(args, original, embedding):
    return ScoreReport(dataset=str(args.original), embedding=str(args.embedding), mode=None, c=None,
                       n=original.X.shape[0], p=original.X.shape[1], q=embedding.X.shape[1],
                       seed=args.seed)


def _cmet_into(report, original, embedding, mode, args):
    if mode == SUPERVISED:
        a = original.labels
    else:
        with Measured() as mc:
            dendro = agglomerate(original.X, args.linkage, args.max_cluster_samples)
            a = cut(dendro, args.clusters)
        report.times_ms["clustering"] = mc.ms
        report.peak_memory_bytes = max(report.peak_memory_bytes, mc.peak)
    with Measured() as m:
        s = _score(original.X, embedding.X, a, mode)
    report.mode, report.c = mode, a.n_clusters
    report.cmet_local, report.cmet_global = s.local, s.global_
    report.times_ms["cmet"] = m.ms
    report.peak_memory_bytes = max(report.peak_memory_bytes, m.peak)
    return a


def _emit(args, reports, text=None):
    if text is None:
        text = to_csv(reports) if args.format == "csv" else to_json(reports) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands --------------------------------------------------------------------

def cmd_score(args):
    original, embedding, has_labels = _load_pair(args)
    mode = _resolve_mode(args, has_labels)
    report = _base_report(args, original, embedding)
    a = _cmet_into(report, original, embedding, mode, args)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(scatter_svg(embedding.X, a.labels))
    _emit(args, report)


def _int_list(raw, what):
    counts = []
    for chunk in raw or []:
        for tok in str(chunk).split(","):
            if tok.strip():
                try:
                    counts.append(int(tok))
                except ValueError:
                    raise InputError(f"{what} {tok!r} is not an integer") from None
    if not counts:
        raise InvalidClusterCountError(f"need at least one {what}")
    return counts


def cmd_sweep(args):
    counts = _int_list(args.clusters, "cluster count")
    original, embedding, _ = _load_pair(args)
    n = original.X.shape[0]
    bad = [c for c in counts if not 1 <= c <= n]
    if bad:
        raise InvalidClusterCountError(f"cluster counts {bad} outside 1..{n}")
    with Measured() as mc:
        dendro = agglomerate(original.X, args.linkage, args.max_cluster_samples)
    reports = []
    for c in counts:
        report = _base_report(args, original, embedding)
        with Measured() as m:
            s = _score(original.X, embedding.X, cut(dendro, c), UNSUPERVISED)
        report.mode, report.c = UNSUPERVISED, c
        report.cmet_local, report.cmet_global = s.local, s.global_
        report.times_ms = {"clustering": mc.ms, "cmet": m.ms}
        report.peak_memory_bytes = max(mc.peak, m.peak)
        reports.append(report)
    _emit(args, reports)


def cmd_baseline(args):
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = sorted(set(metrics) - set(METRICS))
    if unknown or not metrics:
        raise InputError(f"unknown metrics {unknown}; choose from {METRICS}")
    original, embedding, has_labels = _load_pair(args)
    n = original.X.shape[0]
    if args.max_rank_samples is not None and n > args.max_rank_samples:
        raise bl.TooLargeForRankMetricsError(
            f"{n} samples exceeds the rank-metric cap of {args.max_rank_samples}",
            n=n, cap=args.max_rank_samples)
    k = args.k if args.k is not None else bl.default_k(n)
    report = _base_report(args, original, embedding)
    report.k = k
    fns = {"trustworthiness": bl.trustworthiness, "continuity": bl.continuity, "lcmc": bl.lcmc}
    report.baselines = {}
    for name in metrics:
        with Measured() as m:
            report.baselines[name] = fns[name](original.X, embedding.X, k, args.max_rank_samples)
        report.times_ms[name] = m.ms
        report.peak_memory_bytes = max(report.peak_memory_bytes, m.peak)
    if args.clusters is not None or has_labels:
        _cmet_into(report, original, embedding, _resolve_mode(args, has_labels), args)
    _emit(args, report)


def cmd_gen(args):
    if args.name == "rings":
        ds = gen_rings(args.n_per_ring, args.seed)
    else:
        ds = gen_swiss_roll(args.n, args.seed)
    out = args.out or sys.stdout
    write_point_cloud(out, ds.X, ds.columns, ds.y, args.labels_col)


def cmd_embed(args):
    header = read_header(args.input)
    has_labels = args.labels_col in header
    ds = load_point_cloud(args.input, args.labels_col if has_labels else None)
    if args.method == "lift":
        Y = lift_2_9(ds.X)
    elif args.method == "pca":
        Y = PCA(args.q).fit_transform(ds.X)
    elif args.method == "random":
        Y = RandomProjection(args.q, args.seed).fit_transform(ds.X)
    else:
        Y = shuffle_embedding(ds.X, args.seed)
    write_point_cloud(args.out or sys.stdout, Y, None, ds.y if has_labels else None, args.labels_col)


def _blobs(n, p, c, rng):
    centers = rng.normal(scale=10.0, size=(c, p))
    labels = np.arange(n) % c
    return validate_matrix(centers[labels] + rng.normal(size=(n, p))), ClusterAssignment(labels, c)


def cmd_bench(args):
    sizes = _int_list(args.n_list, "sample size")
    rng = np.random.Generator(np.random.PCG64(args.seed))
    sys.stdout.write("n,p,c,metric,time_ms,peak_bytes,status\n")
    for n in sizes:
        X, a = _blobs(n, args.p, args.clusters, rng)
        Xp = RandomProjection(2, args.seed).fit_transform(X)
        with Measured() as m:
            _score(X, validate_matrix(Xp), a, SUPERVISED)
        sys.stdout.write(f"{n},{args.p},{args.clusters},cmet,{m.ms:.3f},{m.peak},ok\n")
        k = bl.default_k(n)
        try:
            with Measured() as m:
                bl.trustworthiness(X, Xp, k, args.max_rank_samples)
            sys.stdout.write(f"{n},{args.p},{args.clusters},trustworthiness,{m.ms:.3f},{m.peak},ok\n")
        except ResourceCapError:
            sys.stdout.write(f"{n},{args.p},{args.clusters},trustworthiness,,,capped\n")
        sys.stdout.flush()


# parser ----------------------------------------------------------------------

def _pair_args(p):
    p.add_argument("--original", required=True, help="CSV of the original data")
    p.add_argument("--embedding", required=True, help="CSV of the embedded data")
    p.add_argument("--labels-col", default="label", help="name of the label column (default: label)")
    p.add_argument("--mode", choices=(SUPERVISED, UNSUPERVISED),
                   help="default: supervised when the label column exists")
    p.add_argument("--linkage", choices=LINKAGES, default="ward")
    p.add_argument("--max-cluster-samples", type=int, default=CLUSTER_CAP)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="write here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="embedq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="local and global CMET scores of an embedding")
    _pair_args(p)
    p.add_argument("--clusters", type=int, help="force unsupervised mode with this many clusters")
    p.add_argument("--svg", help="also write a 2-d scatter of the embedding coloured by cluster")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("sweep", help="unsupervised scores over several cluster counts")
    _pair_args(p)
    p.add_argument("--clusters", nargs="*", required=True, help="cluster counts, e.g. 3 4 5 or 3,4,5")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="trustworthiness / continuity / LCMC")
    _pair_args(p)
    p.add_argument("--clusters", type=int)
    p.add_argument("--k", type=int, help="neighbourhood size (default max(1, floor(0.01 n)))")
    p.add_argument("--metrics", default=",".join(METRICS))
    p.add_argument("--max-rank-samples", type=int, default=bl.DEFAULT_MAX_SAMPLES)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("gen", help="write a synthetic labelled dataset as CSV")
    p.add_argument("name", choices=("rings", "swissroll"))
    p.add_argument("--n-per-ring", type=int, default=500)
    p.add_argument("--n", type=int, default=1500)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--labels-col", default="label")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("embed", help="apply a fixture transform (lift, pca, random, shuffle)")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("lift", "pca", "random", "shuffle"), required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--labels-col", default="label")
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("bench", help="time/memory of CMET vs trustworthiness as n grows (CSV)")
    p.add_argument("--n-list", nargs="+", default=["1000,2000,4000"])
    p.add_argument("--p", type=int, default=10)
    p.add_argument("--clusters", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-rank-samples", type=int, default=bl.DEFAULT_MAX_SAMPLES)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit():
            args.func(args)
    except ShapeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (InputError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
