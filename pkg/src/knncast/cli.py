"""Command-line front end.

Subcommands cover the end-to-end workflow: ``simulate`` benchmark series,
dump ``similarity`` matrices, ``tune`` hyperparameters, ``forecast`` a
trailing horizon, and ``evaluate`` forecast files against actuals.

Conventions:

* exit codes: 0 success, 1 runtime error, 2 usage error
* data goes to files; diagnostics go to stderr
* every run writes one manifest JSON (command, resolved options, seed,
  input hashes, output paths, wall time) next to its outputs; manifests
  include timing and are the one output not expected to be byte-identical
  across runs
* seeds default to the fixed constant 1729 so casual runs reproduce;
  pass ``--seed random`` to opt into entropy
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import dataio
from .core import build_dataset
from .errors import KnncastError
from .forecast import knn_forecast, ols_baseline, seasonal_naive
from .similarity import WeightTriple, sp_matrix, st_matrix, sw_matrix, sx_matrix
from .simulation import SimulationConfig, simulate_series
from .tuning import TuningConfig, mape, random_search_tune

DEFAULT_SEED = 1729

_FAMILY_FLAGS = {
    "mvnorm-x": "mvnorm_x",
    "lin-to-sqrt": "lin_to_sqrt",
    "lin-coef-chng": "lin_coef_chng",
    "quad-to-cubic": "quad_to_cubic",
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be a nonnegative integer, got {text}")
    return value


def _resolve_seed(text: str) -> int:
    if text == "random":
        return int(np.random.SeedSequence().entropy)
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"seed must be a nonnegative integer or 'random', got {text!r}"
        ) from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be nonnegative, got {text}")
    return value


def _parse_weights(text: str, parser: argparse.ArgumentParser) -> WeightTriple:
    parts = text.split(",")
    if len(parts) != 3:
        parser.error(f"--weights needs three comma-separated values, got {text!r}")
    try:
        raw = [float(p) for p in parts]
    except ValueError:
        parser.error(f"--weights values must be numbers, got {text!r}")
    try:
        return WeightTriple.normalized(*raw)
    except ValueError as exc:
        parser.error(f"--weights: {exc}")


def _parse_metric(text: str, parser: argparse.ArgumentParser):
    from .distance import parse_metric

    try:
        return parse_metric(text)
    except ValueError as exc:
        parser.error(str(exc))


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(path, command: str, options: dict, seed, inputs, outputs,
                    started: float) -> None:
    doc = {
        "command": command,
        "options": options,
        "seed": seed,
        "input_hashes": {os.fspath(p): _sha256(p) for p in inputs},
        "output_paths": [os.fspath(p) for p in outputs],
        "wall_time_s": time.perf_counter() - started,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_simulate(args, parser) -> int:
    started = time.perf_counter()
    seed = _resolve_seed(args.seed)
    config = SimulationConfig(n=args.n, seed=seed, family=_FAMILY_FLAGS[args.family],
                              d=args.predictors)
    sim = simulate_series(config)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "series.csv")
    json_path = os.path.join(args.out, "components.json")
    dataio.write_simulated_series(sim, csv_path, json_path)
    _write_manifest(
        os.path.join(args.out, "manifest.json"),
        "simulate",
        {"family": args.family, "n": args.n, "predictors": args.predictors,
         "out": os.fspath(args.out)},
        seed, [], [csv_path, json_path], started,
    )
    print(f"simulate: wrote {csv_path} and {json_path}", file=sys.stderr)
    return 0


def _load_dataset(args, parser):
    schema = dataio.load_schema(args.schema)
    return dataio.read_dataset(args.input, schema)


def cmd_similarity(args, parser) -> int:
    started = time.perf_counter()
    metric = _parse_metric(args.metric, parser)
    dataset = _load_dataset(args, parser)
    if args.kind == "st":
        matrix = st_matrix(dataset.t)
    elif args.kind == "sp":
        matrix = sp_matrix(dataset.p, dataset.n_periods)
    elif args.kind == "sx":
        if dataset.X is None:
            parser.error("kind sx requires predictor columns in the schema")
        matrix = sx_matrix(dataset.X, metric)
    else:
        weights = _parse_weights(args.weights, parser)
        matrix = sw_matrix(dataset, weights, metric).sw
    dataio.write_matrix_csv(matrix.values, args.out)
    _write_manifest(
        os.fspath(args.out) + ".manifest.json",
        "similarity",
        {"input": os.fspath(args.input), "schema": os.fspath(args.schema),
         "kind": args.kind, "metric": args.metric, "weights": args.weights,
         "out": os.fspath(args.out)},
        None, [args.input, args.schema], [args.out], started,
    )
    print(f"similarity: wrote {args.out}", file=sys.stderr)
    return 0


def cmd_tune(args, parser) -> int:
    started = time.perf_counter()
    seed = _resolve_seed(args.seed)
    metric = _parse_metric(args.metric, parser)
    dataset = _load_dataset(args, parser)
    n = dataset.n
    if args.test_h + args.val_holdout > n - 2:
        parser.error(
            f"--test-h plus --val-holdout must be at most n - 2 = {n - 2}, "
            f"got {args.test_h + args.val_holdout}"
        )
    if dataset.X is None:
        parser.error("tuning requires predictor columns in the schema")
    components = sw_matrix(dataset, WeightTriple(1 / 3, 1 / 3, 1 / 3), metric)
    config = TuningConfig(grid_len=args.grid_len, test_h=args.test_h, seed=seed,
                          max_k=args.max_k, val_holdout_len=args.val_holdout)
    report = random_search_tune(components.st, components.sp, components.sx,
                                dataset.y, config, jobs=args.jobs)
    matrix_path = dataio.write_tuning_report(report, args.out)
    _write_manifest(
        os.fspath(args.out) + ".manifest.json",
        "tune",
        {"input": os.fspath(args.input), "schema": os.fspath(args.schema),
         "grid_len": args.grid_len, "test_h": args.test_h,
         "val_holdout": args.val_holdout, "max_k": args.max_k,
         "metric": args.metric, "jobs": args.jobs, "out": os.fspath(args.out)},
        seed, [args.input, args.schema], [args.out, matrix_path], started,
    )
    print(
        f"tune: best MAPE {report.test_mape:.4f} with k={report.k_opt}; wrote {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_forecast(args, parser) -> int:
    started = time.perf_counter()
    metric = _parse_metric(args.metric, parser)
    weights = _parse_weights(args.weights, parser)
    dataset = _load_dataset(args, parser)
    n = dataset.n
    if args.horizon > n - 1:
        parser.error(f"--horizon must leave at least one candidate, got {args.horizon} for n={n}")
    f_index = np.arange(n - args.horizon + 1, n + 1)
    matrices = sw_matrix(dataset, weights, metric)
    result = knn_forecast(matrices.sw, f_index, args.k, dataset.y)
    actuals = dataset.y[f_index - 1]
    dataio.write_forecast(result, actuals, args.out)
    _write_manifest(
        os.fspath(args.out) + ".manifest.json",
        "forecast",
        {"input": os.fspath(args.input), "schema": os.fspath(args.schema),
         "weights": args.weights, "k": args.k, "horizon": args.horizon,
         "metric": args.metric, "out": os.fspath(args.out)},
        None, [args.input, args.schema], [args.out], started,
    )
    print(f"forecast: wrote {args.out}", file=sys.stderr)
    return 0


def cmd_evaluate(args, parser) -> int:
    started = time.perf_counter()
    if args.baseline and not (args.input and args.schema):
        parser.error("--baseline requires --input and --schema")
    forecast_paths = [p for p in args.forecasts.split(",") if p]
    if not forecast_paths:
        parser.error("--forecasts needs at least one file")
    idx, actuals = dataio.read_indexed_column(args.actuals, "actual")
    order = np.argsort(idx)
    idx, actuals = idx[order], actuals[order]

    names, values = [], []
    estimates_all = []
    for path in forecast_paths:
        f_idx, est = dataio.read_indexed_column(path, "estimate")
        f_order = np.argsort(f_idx)
        f_idx, est = f_idx[f_order], est[f_order]
        if not np.array_equal(f_idx, idx):
            raise KnncastError(
                f"forecast {path} covers different indices than the actuals"
            )
        names.append(os.path.splitext(os.path.basename(path))[0])
        values.append(mape(actuals, est))
        estimates_all.append(est)
    if args.ensemble:
        names.append("ensemble")
        values.append(mape(actuals, np.mean(estimates_all, axis=0)))
    if args.baseline:
        dataset = _load_dataset(args, parser)
        if args.baseline == "seasonal-naive":
            est = seasonal_naive(dataset.y, dataset.p, idx)
            names.append("seasonal_naive")
        else:
            if dataset.X is None:
                parser.error("--baseline ols requires predictor columns in the schema")
            est = ols_baseline(dataset.X, dataset.y, idx)
            names.append("ols")
        values.append(mape(actuals, est))
    dataio.write_mape_table(names, values, args.out)
    inputs = [args.actuals, *forecast_paths]
    if args.baseline:
        inputs += [args.input, args.schema]
    _write_manifest(
        os.fspath(args.out) + ".manifest.json",
        "evaluate",
        {"actuals": os.fspath(args.actuals), "forecasts": forecast_paths,
         "ensemble": bool(args.ensemble), "baseline": args.baseline,
         "input": None if args.input is None else os.fspath(args.input),
         "schema": None if args.schema is None else os.fspath(args.schema),
         "out": os.fspath(args.out)},
        None, inputs, [args.out], started,
    )
    print(f"evaluate: wrote {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knncast",
        description="Weighted-similarity nearest-neighbor forecasting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a benchmark series")
    p.add_argument("--family", required=True, choices=sorted(_FAMILY_FLAGS))
    p.add_argument("--n", type=_positive_int, required=True, help="series length (>= 30)")
    p.add_argument("--seed", default=str(DEFAULT_SEED),
                   help=f"integer or 'random' (default {DEFAULT_SEED})")
    p.add_argument("--predictors", type=_positive_int, default=3,
                   help="predictor count for mvnorm-x (default 3)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("similarity", help="dump a similarity matrix as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True, help="dataset schema JSON")
    p.add_argument("--kind", required=True, choices=["st", "sp", "sx", "sw"])
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--weights", default="1,1,1",
                   help="alpha,beta,gamma for kind sw (normalized to sum to 1)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("tune", help="random-search hyperparameter tuning")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--grid-len", type=_positive_int, required=True)
    p.add_argument("--test-h", type=_positive_int, required=True)
    p.add_argument("--val-holdout", type=_nonnegative_int, default=0)
    p.add_argument("--max-k", type=_positive_int, default=None)
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--seed", default=str(DEFAULT_SEED))
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("forecast", help="forecast the trailing horizon")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--weights", required=True, help="alpha,beta,gamma")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--horizon", type=_positive_int, required=True)
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("evaluate", help="score forecast files against actuals")
    p.add_argument("--actuals", required=True,
                   help="CSV with 'index' and 'actual' columns")
    p.add_argument("--forecasts", required=True, help="comma-separated forecast CSVs")
    p.add_argument("--ensemble", action="store_true",
                   help="also score the equal-weight mean of the forecasts")
    p.add_argument("--baseline", choices=["seasonal-naive", "ols"], default=None)
    p.add_argument("--input", default=None, help="dataset CSV (baselines only)")
    p.add_argument("--schema", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except KnncastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
