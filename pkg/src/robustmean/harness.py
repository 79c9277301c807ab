"""Sweep experiments: paired trials, error metrics, aggregation, and export.

A sweep varies one experiment variable (n, d, eta or tau) over a value
grid.  For every (value, run) cell a fresh dataset is generated from a
seed mixed out of (base_seed, value index, run index), and every
estimator is scored on that same dataset, so comparisons are paired and
adding estimators never perturbs the data.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .datagen import InlierSpec, NoiseSpec, TrialDataset, assemble_trial, good_sample_mean
from .estimators import LocationEstimator, make_estimator
from .validation import as_rng, check_data_matrix

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "l2_error",
    "loocv_error",
    "run_trial",
    "run_sweep",
    "emit_csv",
    "emit_json",
    "sweep_config_from_mapping",
]

SWEEP_VARIABLES = ("n", "d", "eta", "tau")
GOOD_BASELINE = "good_sample_mean"
THREADS_ENV_VAR = "ROBUSTMEAN_THREADS"


def l2_error(mu, mu_hat) -> float:
    """Euclidean distance between the true and estimated means."""
    mu = np.asarray(mu, dtype=float).ravel()
    mu_hat = np.asarray(mu_hat, dtype=float).ravel()
    if mu.shape != mu_hat.shape:
        raise ValueError(
            f"dimension mismatch: {mu.shape} vs {mu_hat.shape}")
    return float(np.linalg.norm(mu - mu_hat))


def loocv_error(X, estimator: LocationEstimator, rng=None) -> float:
    """Leave-one-out prediction error, averaged over the smallest 90%.

    For each row i the estimator runs on the other rows and the distance
    to the held-out row is recorded; the floor(0.9*n) smallest fold errors
    are averaged.  Useful when no ground-truth mean exists.
    """
    X = check_data_matrix(X, min_rows=3)
    rng = as_rng(rng)
    n = X.shape[0]
    errors = np.empty(n)
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        mask[i] = False
        est = _clone_with_seed(estimator, _fold_seed(rng, i))
        try:
            est.fit(X[mask])
        except Exception as exc:
            raise RuntimeError(f"estimator failed on fold {i}: {exc}") from exc
        errors[i] = l2_error(X[i], est.location_)
        mask[i] = True
    keep = int(math.floor(0.9 * n))
    return float(np.sort(errors)[:keep].mean())


def _fold_seed(rng: np.random.Generator, i: int) -> int:
    return int(rng.integers(0, 2**63 - 1))


def _clone_with_seed(estimator: LocationEstimator, seed: int):
    params = estimator.get_params(deep=False)
    clone = estimator.__class__(**params)
    if "random_state" in params:
        clone.set_params(random_state=seed)
    return clone


def run_trial(dataset: TrialDataset, estimator):
    """Score one estimator on one trial.

    ``estimator`` is a LocationEstimator or the string
    ``"good_sample_mean"`` (mean over the inlier mask).  Returns
    ``(error, runtime_seconds, report)`` where runtime covers only the
    estimator call.
    """
    if isinstance(estimator, str):
        if estimator != GOOD_BASELINE:
            raise ValueError(f"unknown pseudo-estimator {estimator!r}")
        start = time.perf_counter()
        location = good_sample_mean(dataset)
        runtime = time.perf_counter() - start
        return l2_error(dataset.true_mean, location), runtime, None
    start = time.perf_counter()
    estimator.fit(dataset.data)
    runtime = time.perf_counter() - start
    return (l2_error(dataset.true_mean, estimator.location_), runtime,
            estimator.report_)


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep experiment.

    ``estimators`` maps display labels to estimator prototypes.  ``tau``
    of None applies the matched-corruption policy: tau follows the cell's
    eta when corrupted, 0.1 when clean (except while sweeping tau
    itself).  Estimators without a tau parameter are left untouched.
    """

    sweep_variable: str
    values: tuple
    estimators: dict
    inliers: InlierSpec = field(default_factory=InlierSpec)
    noise: NoiseSpec | None = None
    n: int = 500
    d: int = 500
    eta: float = 0.1
    tau: float | None = None
    runs: int = 5
    base_seed: int = 0
    rotate: bool = False

    def __post_init__(self):
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(
                f"sweep_variable must be one of {SWEEP_VARIABLES}")
        if len(self.values) == 0:
            raise ValueError("values must be nonempty")
        if list(self.values) != sorted(self.values):
            raise ValueError("values must be sorted ascending")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.estimators:
            raise ValueError("at least one estimator is required")


@dataclass(frozen=True)
class SweepRecord:
    sweep_var: str
    value: float
    estimator: str
    mean_error: float
    std_error: float
    mean_runtime_s: float


@dataclass
class SweepResult:
    """Aggregated per-(value, estimator) errors plus any per-cell failures."""

    records: list
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record_for(self, value, estimator: str) -> SweepRecord:
        for rec in self.records:
            if rec.estimator == estimator and rec.value == value:
                return rec
        raise KeyError(f"no record for ({value!r}, {estimator!r})")


def trial_seed(base_seed: int, value_index: int, run_index: int) -> int:
    """Deterministic 64-bit seed mixed from the cell coordinates."""
    ss = np.random.SeedSequence([int(base_seed), int(value_index),
                                 int(run_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _estimator_seed(base_seed: int, value_index: int, run_index: int,
                    label: str) -> int:
    tag = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence([int(base_seed), int(value_index),
                                 int(run_index), int(tag)])
    return int(ss.generate_state(1, np.uint64)[0])


def _cell_settings(cfg: SweepConfig, value):
    n, d, eta = cfg.n, cfg.d, cfg.eta
    if cfg.sweep_variable == "n":
        n = int(value)
    elif cfg.sweep_variable == "d":
        d = int(value)
    elif cfg.sweep_variable == "eta":
        eta = float(value)
    if cfg.sweep_variable == "tau":
        tau = float(value)
    elif cfg.tau is not None:
        tau = float(cfg.tau)
    else:
        tau = eta if eta > 0 else 0.1
    return n, d, eta, tau


def _evaluate_cell(cfg: SweepConfig, value_index: int, value, labels):
    """All runs of one sweep cell; returns {label: ([errors], [runtimes])}
    plus failure records."""
    n, d, eta, tau = _cell_settings(cfg, value)
    noise = None
    if cfg.noise is not None and eta > 0:
        noise = replace(cfg.noise, eta=eta)
    per_label = {label: ([], []) for label in labels}
    failures = []
    for run in range(cfg.runs):
        seed = trial_seed(cfg.base_seed, value_index, run)
        dataset = assemble_trial(cfg.inliers, noise, n=n, d=d, seed=seed,
                                 rotate=cfg.rotate)
        for label in labels:
            try:
                if label not in cfg.estimators:
                    err, runtime, _ = run_trial(dataset, GOOD_BASELINE)
                else:
                    est = _clone_with_seed(
                        cfg.estimators[label],
                        _estimator_seed(cfg.base_seed, value_index, run, label))
                    if "tau" in est.get_params(deep=False):
                        est.set_params(tau=tau)
                    err, runtime, _ = run_trial(dataset, est)
            except Exception as exc:
                failures.append({"value": value, "estimator": label,
                                 "run": run, "error": str(exc)})
                continue
            errors, runtimes = per_label[label]
            errors.append(err)
            runtimes.append(runtime)
    return per_label, failures


def _sweep_labels(cfg: SweepConfig):
    labels = list(cfg.estimators)
    if GOOD_BASELINE not in labels:
        labels.append(GOOD_BASELINE)
    if cfg.sweep_variable == "eta":
        corrupted = cfg.noise is not None and any(v > 0 for v in cfg.values)
    else:
        corrupted = cfg.noise is not None and cfg.eta > 0
    if corrupted and "sample_mean" not in labels:
        labels.append("sample_mean")
        return labels, {"sample_mean": make_estimator("sample_mean")}
    return labels, {}


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run every (value, estimator) cell of the sweep.

    Baseline rows for ``good_sample_mean`` (and ``sample_mean`` on
    corrupted sweeps) are added automatically.  Cell failures are
    recorded and the sweep continues; results are deterministic given the
    config regardless of the worker count (``ROBUSTMEAN_THREADS``).
    """
    labels, extra = _sweep_labels(cfg)
    if extra:
        cfg = replace(cfg, estimators={**cfg.estimators, **extra})

    workers = max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    cells = list(enumerate(cfg.values))
    if workers == 1:
        outcomes = [_evaluate_cell(cfg, i, v, labels) for i, v in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(
                lambda iv: _evaluate_cell(cfg, iv[0], iv[1], labels), cells))

    records, failures = [], []
    for (value_index, value), (per_label, cell_failures) in zip(cells, outcomes):
        failures.extend(cell_failures)
        for label in labels:
            errors, runtimes = per_label[label]
            if not errors:
                continue
            records.append(SweepRecord(
                sweep_var=cfg.sweep_variable, value=float(value),
                estimator=label,
                mean_error=float(np.mean(errors)),
                std_error=float(np.std(errors)),  # population std over runs
                mean_runtime_s=float(np.mean(runtimes))))
    return SweepResult(records=records, failures=failures)


CSV_HEADER = "sweep_var,value,estimator,mean_error,std_error,mean_runtime_s"


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def emit_csv(result: SweepResult, path) -> None:
    """Write records as CSV: 6 significant digits, UTF-8, LF endings."""
    lines = [CSV_HEADER]
    for rec in result.records:
        lines.append(",".join([
            rec.sweep_var, _fmt(rec.value), rec.estimator,
            _fmt(rec.mean_error), _fmt(rec.std_error),
            _fmt(rec.mean_runtime_s)]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_json(result: SweepResult, path) -> None:
    """JSON mirror of the CSV schema, same field names."""
    payload = {
        "records": [dataclasses.asdict(rec) for rec in result.records],
        "failures": result.failures,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def sweep_config_from_mapping(raw: dict) -> SweepConfig:
    """Build a SweepConfig from a flat config mapping (parsed TOML/JSON).

    Collects every invalid field into a single ValueError so config
    mistakes surface all at once.
    """
    problems = []
    known = {"sweep_variable", "values", "estimators", "inliers", "noise",
             "n", "d", "eta", "tau", "runs", "base_seed", "rotate"}
    for key in raw:
        if key not in known:
            problems.append(f"unknown field {key!r}")

    sweep_variable = raw.get("sweep_variable")
    if sweep_variable not in SWEEP_VARIABLES:
        problems.append(
            f"sweep_variable must be one of {list(SWEEP_VARIABLES)}, "
            f"got {sweep_variable!r}")
    values = raw.get("values")
    if not isinstance(values, (list, tuple)) or not values:
        problems.append("values must be a nonempty list")

    estimators = {}
    entries = raw.get("estimators")
    if not isinstance(entries, (list, tuple)) or not entries:
        problems.append("estimators must be a nonempty list")
        entries = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"name": entry}
        if not isinstance(entry, dict) or "name" not in entry:
            problems.append(f"estimator entry {entry!r} needs a name")
            continue
        params = {k: v for k, v in entry.items() if k not in ("name", "label")}
        label = str(entry.get("label", entry["name"]))
        if "," in label or "\n" in label:
            problems.append(f"estimator label {label!r} may not contain "
                            "commas or newlines")
            continue
        if label in estimators:
            problems.append(f"duplicate estimator label {label!r}")
            continue
        try:
            estimators[label] = make_estimator(entry["name"], **params)
        except ValueError as exc:
            problems.append(str(exc))

    inliers = raw.get("inliers", {})
    noise = raw.get("noise")
    try:
        inlier_spec = InlierSpec(**inliers) if isinstance(inliers, dict) \
            else InlierSpec(kind=str(inliers))
    except (TypeError, ValueError) as exc:
        problems.append(f"inliers: {exc}")
        inlier_spec = InlierSpec()
    noise_spec = None
    if noise is not None:
        try:
            noise_spec = NoiseSpec(**noise) if isinstance(noise, dict) \
                else NoiseSpec(kind=str(noise))
        except (TypeError, ValueError) as exc:
            problems.append(f"noise: {exc}")

    if problems:
        raise ValueError("invalid sweep config: " + "; ".join(problems))

    return SweepConfig(
        sweep_variable=sweep_variable, values=tuple(values),
        estimators=estimators, inliers=inlier_spec, noise=noise_spec,
        n=int(raw.get("n", 500)), d=int(raw.get("d", 500)),
        eta=float(raw.get("eta", 0.1)),
        tau=None if raw.get("tau") is None else float(raw["tau"]),
        runs=int(raw.get("runs", 5)), base_seed=int(raw.get("base_seed", 0)),
        rotate=bool(raw.get("rotate", False)))
