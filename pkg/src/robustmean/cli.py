"""Command-line interface: one-shot estimation, benchmark sweeps, LOOCV.

Exit codes: 0 success, 2 usage/parse/estimation errors, 3 partial sweep
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .estimators import available_estimators, make_estimator
from .harness import emit_csv, emit_json, loocv_error, run_sweep, sweep_config_from_mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARTIAL = 3


class MatrixParseError(ValueError):
    pass


def read_matrix_csv(path) -> np.ndarray:
    """Read a rectangular numeric CSV into an (n, d) matrix.

    A single leading header row is skipped automatically when its first
    cell is not numeric.  Ragged rows, non-numeric cells, NaN/Inf entries
    and empty files raise :class:`MatrixParseError` naming the line.
    """
    path = Path(path)
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, cells in enumerate(reader, start=1):
            if not cells or (len(cells) == 1 and cells[0].strip() == ""):
                continue
            if lineno == 1 and not _is_number(cells[0]):
                continue  # header row
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise MatrixParseError(
                    f"{path}: line {lineno}: expected {width} values, "
                    f"got {len(cells)}")
            try:
                row = [float(c) for c in cells]
            except ValueError:
                raise MatrixParseError(
                    f"{path}: line {lineno}: non-numeric cell")
            if not all(np.isfinite(row)):
                raise MatrixParseError(
                    f"{path}: line {lineno}: NaN or Inf entry")
            rows.append(row)
    if not rows:
        raise MatrixParseError(f"{path}: no numeric rows found")
    return np.asarray(rows, dtype=float)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_matrix_csv(X, path) -> None:
    """Write a matrix in the format :func:`read_matrix_csv` ingests.

    Values use repr precision, so a write/read round trip reproduces the
    matrix bit for bit.
    """
    X = np.asarray(X, dtype=float)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _add_estimator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--estimator", default="sample_mean",
                        help="estimator name (see --list-estimators)")
    parser.add_argument("--tau", type=float, default=None,
                        help="expected corruption fraction")
    parser.add_argument("--threshold", choices=["legacy", "low_n"],
                        default=None, help="spectral detection threshold")
    parser.add_argument("--t", type=float, default=None,
                        help="confidence parameter of the low_n threshold")
    parser.add_argument("--k", type=int, default=None,
                        help="chunk count for median_of_means")
    parser.add_argument("--alpha", type=float, default=None,
                        help="entropy scale for que")
    parser.add_argument("--c-scale", type=float, default=None,
                        help="weight scale for lrv")
    parser.add_argument("--prune-slack", type=float, default=None,
                        help="tail slack multiplier for ev_filtering")
    parser.add_argument("--pruning",
                        choices=["gaussian_tail", "randomized", "fixed"],
                        default=None, help="ev_filtering pruning rule")
    parser.add_argument("--weighting", choices=["gaussian", "general"],
                        default=None, help="lrv weighting rule")
    parser.add_argument("--n-iter", type=int, default=None,
                        help="iteration count for pgd")
    parser.add_argument("--subset-frac", type=float, default=None,
                        help="initial-subset fraction for lee_valiant")
    parser.add_argument("--early-halt", action="store_true",
                        help="stop pruning past a 2*tau fraction")
    parser.add_argument("--trace-scale", action="store_true",
                        help="rescale by the estimated covariance trace")
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (ignored by deterministic "
                             "estimators)")


_FLAG_TO_PARAM = {
    "tau": "tau",
    "threshold": "threshold",
    "t": "t",
    "k": "k",
    "alpha": "alpha",
    "c_scale": "c_scale",
    "prune_slack": "prune_slack",
    "pruning": "pruning",
    "weighting": "weighting",
    "n_iter": "n_iter",
    "subset_frac": "subset_frac",
}


def _build_estimator(args):
    params = {}
    for flag, param in _FLAG_TO_PARAM.items():
        value = getattr(args, flag, None)
        if value is not None:
            params[param] = value
    if args.early_halt:
        params["early_halting"] = True
    if args.trace_scale:
        params["trace_scaling"] = True
    params = _filter_supported(args.estimator, params)
    if args.seed is not None:
        # deterministic estimators simply ignore the seed
        supported = make_estimator(args.estimator).get_params(deep=False)
        if "random_state" in supported:
            params["random_state"] = args.seed
    return make_estimator(args.estimator, **params)


def _filter_supported(name: str, params: dict) -> dict:
    supported = make_estimator(name).get_params(deep=False)
    unsupported = {k: v for k, v in params.items() if k not in supported}
    if unsupported:
        raise ValueError(
            f"estimator {name!r} does not accept {sorted(unsupported)}; "
            f"valid parameters: {sorted(supported)}")
    return params


def _write_vector(vector: np.ndarray, out: str | None) -> None:
    line = ",".join(f"{v:.10g}" for v in vector)
    if out:
        Path(out).write_text(line + "\n", encoding="utf-8")
    else:
        print(line)


def cmd_estimate(args) -> int:
    X = read_matrix_csv(args.input)
    est = _build_estimator(args)
    est.fit(X)
    _write_vector(est.location_, args.out)
    report = est.report_
    print(f"estimator={args.estimator}", file=sys.stderr)
    print(f"pruned_count={report.pruned_count}", file=sys.stderr)
    print(f"iterations={report.iterations}", file=sys.stderr)
    print(f"halted_early={report.halted_early}", file=sys.stderr)
    if report.top_eigenvalue is not None:
        print(f"top_eigenvalue={report.top_eigenvalue:.6g}", file=sys.stderr)
    return EXIT_OK


def _load_config(path: Path) -> dict:
    if path.suffix.lower() == ".toml":
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    if path.suffix.lower() == ".json":
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    raise ValueError(f"config must be .toml or .json, got {path.suffix!r}")


def cmd_bench(args) -> int:
    cfg = sweep_config_from_mapping(_load_config(Path(args.config)))
    print(f"sweep over {cfg.sweep_variable}: {len(cfg.values)} values x "
          f"{cfg.runs} runs x {len(cfg.estimators)} estimators",
          file=sys.stderr)
    result = run_sweep(cfg)
    emit_csv(result, args.out)
    if args.json_out:
        emit_json(result, args.json_out)
    for rec in result.records:
        print(f"{rec.sweep_var}={rec.value:g} {rec.estimator}: "
              f"{rec.mean_error:.4f} +/- {rec.std_error:.4f}",
              file=sys.stderr)
    if result.failures:
        for failure in result.failures:
            print(f"FAILED cell {failure}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_loocv(args) -> int:
    X = read_matrix_csv(args.input)
    est = _build_estimator(args)
    value = loocv_error(X, est, rng=args.seed)
    print(f"{value:.10g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustmean",
        description="Robust mean estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate",
                           help="estimate the mean of a matrix CSV")
    p_est.add_argument("input", help="matrix CSV path (rows are samples)")
    p_est.add_argument("--out", default=None,
                       help="write the estimate CSV row here (default stdout)")
    _add_estimator_flags(p_est)
    p_est.set_defaults(func=cmd_estimate)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep config")
    p_bench.add_argument("config", help="sweep config (.toml or .json)")
    p_bench.add_argument("--out", default="sweep.csv",
                         help="output CSV path")
    p_bench.add_argument("--json-out", default=None,
                         help="also write a JSON mirror here")
    p_bench.set_defaults(func=cmd_bench)

    p_loocv = sub.add_parser(
        "loocv", help="bottom-90% leave-one-out error of an estimator")
    p_loocv.add_argument("input", help="matrix CSV path")
    _add_estimator_flags(p_loocv)
    p_loocv.set_defaults(func=cmd_loocv)

    p_list = sub.add_parser("list-estimators", help="print estimator names")
    p_list.set_defaults(func=lambda args: print("\n".join(
        available_estimators())) or EXIT_OK)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or EXIT_OK
    except (ValueError, OSError, RuntimeError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
