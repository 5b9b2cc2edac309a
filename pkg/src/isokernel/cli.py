"""Command-line front end over the library: dataset generation, model
fitting and encoding, exact nearest-neighbor search, and the experiment
harness. Every command is file-based and seed-deterministic: the same
arguments, input files, and seed produce byte-identical output (bench wall
times are the one documented exception).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from sklearn.metrics.pairwise import euclidean_distances

from . import __version__
from .data import (
    Dataset,
    gen_gaussians,
    gen_w_gaussians,
    minmax_normalize,
    parse_libsvm,
    read_labels_csv,
    write_labels_csv,
    write_libsvm,
)
from .experiments import (
    best_eps_ami,
    cell_band,
    cell_probability_test,
    collision_allowance,
    collision_test,
    dp_cluster,
    hubness,
    instability_rows,
    synth_queries,
    vary_t_sweep,
)
from .experiments.clustering import ami as ami_score
from .experiments.montecarlo import DISTRIBUTIONS
from .index import (
    BallTree,
    IKFeature,
    NormalizedLinear,
    RawEuclidean,
    bench_index,
    brute_knn,
    precision_at_k,
)
from .kernel import IsolationKernel, gram
from .measures import (
    AdaptiveGaussianMeasure,
    GaussianMeasure,
    IKMeasure,
    LinearMeasure,
    LpMeasure,
    SNNMeasure,
)
from .model_io import load_model, save_codes, save_model
from .tables import write_table

METRICS = ("euclidean", "normalized-linear", "ik-feature")


class UsageError(Exception):
    """Bad argument combination detected after parsing; maps to exit 2."""


# ---------------------------------------------------------------- arg types


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str) -> list[str]:
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not names:
        raise argparse.ArgumentTypeError("expected a comma-separated list of names")
    return names


# ------------------------------------------------------------------ helpers


def _header_lines(args: argparse.Namespace) -> list[str]:
    """Reproducibility header: version plus the full resolved configuration."""
    skip = {"func", "command", "out"}
    pairs = []
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        pairs.append(f"{key.replace('_', '-')}={value}")
    return [f"isokernel v{__version__}", f"{args.command} " + " ".join(pairs)]


def _load_dataset(path: str, *, normalize: bool = False) -> Dataset:
    with open(path, "r", encoding="ascii") as fh:
        ds = parse_libsvm(fh, name=Path(path).stem)
    return minmax_normalize(ds) if normalize else ds


def _map_ordered(fn, items, workers: int) -> list:
    """Apply fn over items, preserving order; `workers` bounds parallelism."""
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _resolve_model(args: argparse.Namespace, ds: Dataset | None) -> IsolationKernel:
    if getattr(args, "model", None):
        return load_model(args.model)
    if ds is None:
        raise UsageError("--model is required here")
    return IsolationKernel(psi=args.psi, t=args.t, seed=args.seed).fit(ds.points)


def _resolve_metric(args: argparse.Namespace, ds: Dataset):
    if args.metric == "euclidean":
        return RawEuclidean()
    if args.metric == "normalized-linear":
        return NormalizedLinear()
    return IKFeature(_resolve_model(args, ds))


def _resolve_sigma(args: argparse.Namespace, ds: Dataset) -> float:
    """Fixed bandwidth, or the data convention: d times the mean pairwise
    distance for dense data, the mean alone when density is below 1%."""
    if args.sigma_convention == "fixed":
        return args.sigma
    D = euclidean_distances(ds.points)
    n = ds.n
    mu = float(D.sum() / (n * (n - 1))) if n > 1 else 1.0
    if sp.issparse(ds.points):
        density = ds.points.nnz / float(n * ds.dim)
    else:
        density = 1.0
    return ds.dim * mu if density >= 0.01 else mu


def _build_measure(token: str, args: argparse.Namespace, ds: Dataset):
    if token == "IK":
        if getattr(args, "model", None):
            return IKMeasure(load_model(args.model))
        model = IsolationKernel(psi=args.psi, t=args.t, seed=args.seed)
        return IKMeasure(model.fit(ds.points))
    if token == "GK":
        return GaussianMeasure(_resolve_sigma(args, ds))
    if token == "LK":
        return LinearMeasure()
    if token == "SNN":
        return SNNMeasure(args.snn_k).fit(ds.points)
    if token == "AG":
        return AdaptiveGaussianMeasure(args.ag_k).fit(ds.points)
    if token.startswith("L"):
        try:
            return LpMeasure(float(token[1:]))
        except ValueError:
            pass
    raise UsageError(
        f"unknown measure {token!r}; expected IK, GK, LK, SNN, AG, or L<p>"
    )


def _add_out(sp_, help_text: str = "output path (default: stdout)"):
    sp_.add_argument("--out", help=help_text)


def _add_seed(sp_):
    sp_.add_argument("--seed", type=_nonnegative_int, default=0, help="random seed")


def _add_workers(sp_):
    sp_.add_argument(
        "--workers",
        type=_positive_int,
        default=1,
        help="parallel workers over independent units; any value gives "
        "output identical to --workers 1",
    )


def _add_normalize(sp_):
    sp_.add_argument(
        "--normalize",
        action="store_true",
        help="min-max scale every attribute to [0, 1] before use",
    )


def _add_model_source(sp_, *, psi_default: int | None = 16):
    sp_.add_argument("--model", help="fitted model file (IKM1)")
    sp_.add_argument(
        "--psi",
        type=_positive_int,
        default=psi_default,
        help="reference points per partitioning (used when fitting here)",
    )
    sp_.add_argument(
        "--t", type=_positive_int, default=200, help="number of partitionings"
    )


def _add_measure_params(sp_, *, psi_default: int = 16):
    _add_model_source(sp_, psi_default=psi_default)
    sp_.add_argument(
        "--sigma",
        type=_positive_float,
        default=5.0,
        help="Gaussian kernel bandwidth (fixed convention)",
    )
    sp_.add_argument(
        "--sigma-convention",
        choices=("fixed", "data"),
        default="fixed",
        help="'data' sets sigma to d times the mean pairwise distance "
        "(the mean alone when nonzero density is below 1%%)",
    )
    sp_.add_argument(
        "--snn-k", type=_positive_int, default=10, help="SNN neighbor list size"
    )
    sp_.add_argument(
        "--ag-k",
        type=_positive_int,
        default=200,
        help="adaptive-Gaussian bandwidth neighbor rank",
    )


# ------------------------------------------------------------- subcommands


def cmd_gen(args) -> int:
    if args.kind == "gaussians":
        if args.d is None:
            raise UsageError("gen --kind gaussians requires --d")
        ds = gen_gaussians(args.d, args.n, separation=args.separation, seed=args.seed)
    else:
        if args.w is None:
            raise UsageError("gen --kind w-gaussians requires --w")
        ds = gen_w_gaussians(args.w, args.n, sd1=args.sd1, sd2=args.sd2, seed=args.seed)
    if args.normalize:
        ds = minmax_normalize(ds)
    write_libsvm(ds, args.out if args.out else sys.stdout, header_lines=_header_lines(args))
    return 0


def cmd_fit(args) -> int:
    ds = _load_dataset(args.input, normalize=args.normalize)
    model = IsolationKernel(psi=args.psi, t=args.t, seed=args.seed).fit(ds.points)
    save_model(model, args.out if args.out else sys.stdout)
    return 0


def cmd_encode(args) -> int:
    model = load_model(args.model)
    ds = _load_dataset(args.input, normalize=args.normalize)
    codes = model.encode(ds.points)
    save_codes(codes, args.out if args.out else sys.stdout)
    return 0


def cmd_knn(args) -> int:
    ds = _load_dataset(args.input)
    reference = ds
    if args.normalize:
        ds = minmax_normalize(ds)
    if args.queries:
        qds = _load_dataset(args.queries)
        if args.normalize:
            # queries scale by the indexed set's column ranges
            qds = minmax_normalize(qds, reference)
    else:
        qds = ds  # every indexed point queries the set, itself included
    metric = _resolve_metric(args, ds)
    if args.method == "balltree":
        tree = BallTree(ds.points, metric, leaf_size=args.leaf_size)

        def search(qi):
            return tree.query(qds.points[qi], args.k)[0]

    else:

        def search(qi):
            return brute_knn(ds.points, qds.points[qi], args.k, metric)[0]

    results = _map_ordered(search, range(qds.n), args.workers)
    rows = []
    for qi, pairs in enumerate(results):
        for rank, (idx, dist) in enumerate(pairs, start=1):
            rows.append([qi, rank, idx, float(dist)])
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["query_id", "rank", "neighbor_id", "distance"],
        rows,
    )
    return 0


def cmd_bench_index(args) -> int:
    ds = _load_dataset(args.input, normalize=args.normalize)
    metric = _resolve_metric(args, ds)
    report = bench_index(ds.points, metric, args.k, leaf_size=args.leaf_size)
    rows = [
        [r.method, r.metric, r.total_distance_evals, float(r.mean_wall_us)]
        for r in report.rows
    ]
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["method", "metric", "total_distance_evals", "mean_wall_us"],
        rows,
    )
    return 0


def cmd_precision(args) -> int:
    ds = _load_dataset(args.input, normalize=args.normalize)
    metric = _resolve_metric(args, ds)
    value = precision_at_k(ds, metric, args.k)
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["metric", "k", "precision"],
        [[metric.name, args.k, float(value)]],
    )
    return 0


def cmd_instability(args) -> int:
    def one_d(d: int):
        ds = gen_gaussians(d, args.n, separation=args.separation, seed=args.seed)
        if args.normalize:
            ds = minmax_normalize(ds)
        measures = [_build_measure(tok, args, ds) for tok in args.measures]
        return instability_rows(ds, measures, epsilon=args.epsilon, seed=args.seed)

    groups = _map_ordered(one_d, args.d_grid, args.workers)
    rows = [row for group in groups for row in group]
    rows.sort(key=lambda r: (r.measure, r.d, r.query_kind))
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["measure", "d", "query_kind", "variance_ratio", "n_epsilon", "epsilon", "seed"],
        [
            [r.measure, r.d, r.query_kind, float(r.variance_ratio), r.n_epsilon, float(r.epsilon), r.seed]
            for r in rows
        ],
    )
    return 0


def cmd_vary_t(args) -> int:
    ds = gen_gaussians(args.d, args.n, separation=args.separation, seed=args.seed)
    if args.normalize:
        ds = minmax_normalize(ds)
    q_between, q_sparse = synth_queries(ds)
    q = q_sparse if args.query == "sparse_center" else q_between
    sources = ["given_data", "uniform"] if args.source == "both" else [args.source]
    tasks = [(t, source) for t in args.t_grid for source in sources]

    def one_cell(cell):
        t, source = cell
        return vary_t_sweep(
            ds,
            q,
            args.psi,
            [t],
            trials=args.trials,
            source=source,
            epsilon=args.epsilon,
            seed=args.seed,
        )[0]

    rows = _map_ordered(one_cell, tasks, args.workers)
    rows.sort(key=lambda r: (r.t, r.source))
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["t", "source", "mean_n_eps", "stderr", "trials"],
        [[r.t, r.source, float(r.mean_n_eps), float(r.stderr), r.trials] for r in rows],
    )
    return 0


def cmd_lemma2(args) -> int:
    cells = [
        (psi, d, g)
        for psi in args.psi_grid
        for d in args.d_grid
        for g in args.distributions
    ]

    def one_cell(indexed):
        i, (psi, d, g) = indexed
        freqs = cell_probability_test(
            psi, g, args.point_dist, d, args.trials, seed=args.seed + i
        )
        lo, hi = cell_band(psi, args.trials)
        deviation = float(np.abs(freqs - 1.0 / psi).max())
        halfwidth = hi - 1.0 / psi
        return [
            psi,
            d,
            g,
            args.point_dist,
            args.trials,
            deviation,
            float(halfwidth),
            int(deviation <= halfwidth),
            args.seed + i,
        ]

    rows = _map_ordered(one_cell, list(enumerate(cells)), args.workers)
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["psi", "d", "g_dist", "f_dist", "trials", "max_abs_dev", "band_halfwidth", "within_band", "seed"],
        rows,
    )
    return 0


def cmd_theorem2(args) -> int:
    rate = collision_test(
        args.psi,
        args.t,
        args.d,
        args.trials,
        dist_g=args.g_dist,
        dist_f=args.f_dist,
        seed=args.seed,
    )
    bound, allowance = collision_allowance(args.psi, args.t, args.trials)
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["psi", "t", "d", "trials", "rate", "bound", "allowance", "within_band"],
        [[args.psi, args.t, args.d, args.trials, float(rate), float(bound), float(allowance), int(rate <= allowance)]],
    )
    return 0


def cmd_hubness(args) -> int:
    cells = [(tok, d) for tok in args.measures for d in args.d_grid]

    def one_cell(cell):
        tok, d = cell
        rng = np.random.default_rng(args.seed)
        X = rng.uniform(size=(args.n, d))
        ds = Dataset(f"uniform-d{d}-n{args.n}-seed{args.seed}", X, None)
        measure = _build_measure(tok, args, ds)
        return hubness(X, measure, args.k)

    groups = _map_ordered(one_cell, cells, args.workers)
    rows = [row for group in groups for row in group]
    rows.sort(key=lambda r: (r.measure, r.d, r.o_k))
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["measure", "d", "o_k", "p"],
        [[r.measure, r.d, r.o_k, float(r.p)] for r in rows],
    )
    return 0


def cmd_cluster_dp(args) -> int:
    if (args.eps_fraction is None) == (not args.best_eps):
        raise UsageError("give exactly one of --eps-fraction or --best-eps")
    ds = _load_dataset(args.input, normalize=args.normalize)
    measure = _build_measure(args.measure, args, ds)
    header = _header_lines(args)
    if args.best_eps:
        score, fraction = best_eps_ami(ds, measure, args.k)
        result = dp_cluster(ds, measure, args.k, fraction)
        header.append(f"best eps-fraction={fraction} ami={score!r}")
    else:
        result = dp_cluster(ds, measure, args.k, args.eps_fraction)
        if result.ami_vs_truth is not None:
            header.append(f"ami={result.ami_vs_truth!r}")
    header.append("centers=" + ",".join(str(c) for c in result.centers))
    write_labels_csv(
        result.labels, args.out if args.out else sys.stdout, header_lines=header
    )
    if args.summary_out:
        score = result.ami_vs_truth
        if score is None:
            raise UsageError("--summary-out needs a labeled input dataset")
        write_table(
            args.summary_out,
            _header_lines(args),
            ["dataset", "measure", "ami"],
            [[ds.name, measure.name, float(score)]],
        )
    return 0


def cmd_ami(args) -> int:
    a = read_labels_csv(args.a)
    b = read_labels_csv(args.b)
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        ["ami"],
        [[float(ami_score(a, b))]],
    )
    return 0


def cmd_export_gram(args) -> int:
    ds = _load_dataset(args.input, normalize=args.normalize)
    model = _resolve_model(args, ds)
    G = gram(model, ds.points)
    write_table(
        args.out if args.out else sys.stdout,
        _header_lines(args),
        [f"g{j}" for j in range(G.shape[1])],
        [[float(v) for v in row] for row in G],
    )
    return 0


def cmd_export_features(args) -> int:
    ds = _load_dataset(args.input, normalize=args.normalize)
    model = _resolve_model(args, ds)
    features = model.transform(ds.points)
    out_ds = Dataset(ds.name, features, ds.labels)
    header = _header_lines(args)
    header.append(f"columns={model.t * model.psi} nonzeros-per-row={model.t}")
    write_libsvm(out_ds, args.out if args.out else sys.stdout, header_lines=header)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isokernel",
        description="Isolation-kernel models, exact search, and experiments.",
    )
    parser.add_argument(
        "--version", action="version", version=f"isokernel {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sp_ = sub.add_parser("gen", help="generate a synthetic labeled dataset (LIBSVM)")
    sp_.add_argument("--kind", choices=("gaussians", "w-gaussians"), required=True)
    sp_.add_argument("--d", type=_positive_int, help="dimensions (gaussians)")
    sp_.add_argument(
        "--w", type=_positive_int, help="irrelevant leading dimensions (w-gaussians)"
    )
    sp_.add_argument(
        "--n", type=_positive_int, default=200, help="points per cluster"
    )
    sp_.add_argument(
        "--separation", type=_positive_float, default=10.0,
        help="distance between cluster means per dimension (gaussians)",
    )
    sp_.add_argument("--sd1", type=_positive_float, default=1.0)
    sp_.add_argument("--sd2", type=_positive_float, default=32.0)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_gen)

    sp_ = sub.add_parser("fit", help="fit a model on a LIBSVM dataset")
    sp_.add_argument("--input", required=True)
    sp_.add_argument("--psi", type=_positive_int, required=True)
    sp_.add_argument("--t", type=_positive_int, default=200)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_, "model output path (IKM1; default: stdout)")
    sp_.set_defaults(func=cmd_fit)

    sp_ = sub.add_parser("encode", help="encode points under a fitted model")
    sp_.add_argument("--model", required=True)
    sp_.add_argument("--input", required=True)
    _add_normalize(sp_)
    _add_out(sp_, "codes output path (IKC1; default: stdout)")
    sp_.set_defaults(func=cmd_encode)

    sp_ = sub.add_parser("knn", help="exact k nearest neighbors per query")
    sp_.add_argument("--input", required=True, help="indexed points (LIBSVM)")
    sp_.add_argument(
        "--queries", help="query points (LIBSVM; default: the indexed points)"
    )
    sp_.add_argument("--k", type=_positive_int, required=True)
    sp_.add_argument("--metric", choices=METRICS, default="euclidean")
    sp_.add_argument("--method", choices=("balltree", "brute"), default="balltree")
    sp_.add_argument("--leaf-size", type=_positive_int, default=15)
    _add_model_source(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_workers(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_knn)

    sp_ = sub.add_parser(
        "bench-index", help="brute force vs ball tree, every point as query"
    )
    sp_.add_argument("--input", required=True)
    sp_.add_argument("--k", type=_positive_int, default=5)
    sp_.add_argument("--metric", choices=METRICS, default="euclidean")
    sp_.add_argument("--leaf-size", type=_positive_int, default=15)
    _add_model_source(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_bench_index)

    sp_ = sub.add_parser(
        "precision", help="label-match precision of k-NN retrieval"
    )
    sp_.add_argument("--input", required=True, help="labeled dataset (LIBSVM)")
    sp_.add_argument("--k", type=_positive_int, default=5)
    sp_.add_argument("--metric", choices=METRICS, default="euclidean")
    _add_model_source(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_precision)

    sp_ = sub.add_parser(
        "instability",
        help="variance ratio and N-epsilon across a dimension sweep",
    )
    sp_.add_argument("--d-grid", type=_int_list, default=[10, 100, 1000, 10000])
    sp_.add_argument("--n", type=_positive_int, default=200, help="points per cluster")
    sp_.add_argument("--separation", type=_positive_float, default=10.0)
    sp_.add_argument(
        "--measures",
        type=_name_list,
        default=["IK", "GK"],
        help="comma-separated: IK, GK, LK, SNN, AG, L<p>",
    )
    sp_.add_argument("--epsilon", type=_positive_float, default=0.005)
    _add_measure_params(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_workers(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_instability)

    sp_ = sub.add_parser(
        "vary-t", help="N-epsilon vs number of partitionings, with error bars"
    )
    sp_.add_argument("--t-grid", type=_int_list, default=[5, 10, 20, 50, 100, 200])
    sp_.add_argument("--psi", type=_positive_int, default=16)
    sp_.add_argument("--d", type=_positive_int, default=10000)
    sp_.add_argument("--n", type=_positive_int, default=200)
    sp_.add_argument("--separation", type=_positive_float, default=10.0)
    sp_.add_argument("--trials", type=_positive_int, default=10)
    sp_.add_argument(
        "--source", choices=("given_data", "uniform", "both"), default="both"
    )
    sp_.add_argument(
        "--query", choices=("sparse_center", "between_clusters"),
        default="sparse_center",
    )
    sp_.add_argument("--epsilon", type=_positive_float, default=0.005)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_workers(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_vary_t)

    sp_ = sub.add_parser(
        "lemma2", help="Monte-Carlo check that every cell has probability 1/psi"
    )
    sp_.add_argument("--psi-grid", type=_int_list, default=[2, 4, 16])
    sp_.add_argument("--d-grid", type=_int_list, default=[2, 100, 1000])
    sp_.add_argument(
        "--distributions",
        type=_name_list,
        default=list(DISTRIBUTIONS),
        help="reference-point distributions to test",
    )
    sp_.add_argument(
        "--point-dist", choices=tuple(DISTRIBUTIONS), default="uniform",
        help="distribution of the located point",
    )
    sp_.add_argument("--trials", type=_positive_int, default=10000)
    _add_seed(sp_)
    _add_workers(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_lemma2)

    sp_ = sub.add_parser(
        "theorem2", help="Monte-Carlo collision rate of two distinct points"
    )
    sp_.add_argument("--psi", type=_positive_int, required=True)
    sp_.add_argument("--t", type=_positive_int, required=True)
    sp_.add_argument("--d", type=_positive_int, default=100)
    sp_.add_argument("--trials", type=_positive_int, default=100000)
    sp_.add_argument("--g-dist", choices=tuple(DISTRIBUTIONS), default="uniform")
    sp_.add_argument("--f-dist", choices=tuple(DISTRIBUTIONS), default="uniform")
    _add_seed(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_theorem2)

    sp_ = sub.add_parser(
        "hubness", help="k-occurrence distribution on uniform hypercube data"
    )
    sp_.add_argument("--d-grid", type=_int_list, default=[3, 100])
    sp_.add_argument("--n", type=_positive_int, default=1000)
    sp_.add_argument("--k", type=_positive_int, default=5)
    sp_.add_argument(
        "--measures", type=_name_list, default=["IK", "GK"],
        help="comma-separated: IK, GK, LK, SNN, AG, L<p>",
    )
    _add_measure_params(sp_, psi_default=32)
    _add_seed(sp_)
    _add_workers(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_hubness)

    sp_ = sub.add_parser(
        "cluster-dp", help="density-peaks clustering under a chosen measure"
    )
    sp_.add_argument("--input", required=True)
    sp_.add_argument("--measure", default="L2", help="IK, GK, LK, SNN, AG, or L<p>")
    sp_.add_argument("--k", type=_positive_int, required=True, help="number of clusters")
    sp_.add_argument(
        "--eps-fraction", type=_positive_float,
        help="density radius as a fraction of the maximum dissimilarity",
    )
    sp_.add_argument(
        "--best-eps", action="store_true",
        help="scan fractions 1%%..99%% and keep the best AMI (needs labels)",
    )
    sp_.add_argument(
        "--summary-out", help="also write a dataset,measure,ami summary row"
    )
    _add_measure_params(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_, "labels CSV output path (default: stdout)")
    sp_.set_defaults(func=cmd_cluster_dp)

    sp_ = sub.add_parser(
        "ami", help="adjusted mutual information between two labelings"
    )
    sp_.add_argument("--a", required=True, help="labels CSV (point_id,label)")
    sp_.add_argument("--b", required=True, help="labels CSV (point_id,label)")
    _add_out(sp_)
    sp_.set_defaults(func=cmd_ami)

    sp_ = sub.add_parser("export-gram", help="dense similarity matrix as CSV")
    sp_.add_argument("--input", required=True)
    _add_model_source(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_export_gram)

    sp_ = sub.add_parser(
        "export-features",
        help="embedded feature map rows in LIBSVM format (t ones of 1/sqrt(t))",
    )
    sp_.add_argument("--input", required=True)
    _add_model_source(sp_)
    _add_seed(sp_)
    _add_normalize(sp_)
    _add_out(sp_)
    sp_.set_defaults(func=cmd_export_features)

    return parser


def run(argv=None) -> int:
    """Parse and execute; returns the process exit code.

    0 on success, 2 on usage errors, 1 on data errors (bad files, schema
    violations, out-of-range values detected during the work).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits itself on usage errors / --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isokernel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"isokernel {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
