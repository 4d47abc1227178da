"""End-to-end experiment orchestration and reporting.

Pipeline: load CSV -> normalize -> chronological split -> (optional hidden
size search) -> train the autoencoder on the training block -> build one
imputation task per test row with the designated column masked -> estimate
the masked value per task with each configured optimizer (and directly with
the random forest) -> score every method -> pairwise Welch comparison ->
persist a machine-readable report.

Determinism: every stochastic component receives a seed derived by hashing
(master seed, component, index), so method results are independent of which
other methods run and of grid execution order.  All emitted files except
``timings.json`` are byte-stable across re-runs with the same configuration
and master seed.
"""

from __future__ import annotations

import json
import math
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from time import perf_counter

import numpy as np

from . import __version__
from . import data as data_mod
from . import forest as forest_mod
from . import metrics as metrics_mod
from . import network as network_mod
from . import optimizers as optim_mod
from .objective import MissingDataObjective
from .seeding import derive_seed

OPTIMIZER_METHODS = ("ga", "sa", "pso", "ns")
ALL_METHODS = OPTIMIZER_METHODS + ("rf",)
TASK_KINDS = ("prediction", "classification")
FAILURE_MARKER = "FAILED.txt"
VERIFY_TOLERANCE = 1e-9


class ConfigError(ValueError):
    """A config file or experiment configuration is invalid."""


class ExperimentError(RuntimeError):
    """A pipeline stage failed; partial results were persisted."""


@dataclass
class ExperimentConfig:
    dataset_path: Path
    missing_column: int
    task_kind: str
    header: bool = False
    column_kinds: tuple[str, ...] | None = None
    hidden_size: int | str = "auto"
    methods: tuple[str, ...] = ALL_METHODS
    master_seed: int = 0
    output_dir: Path = Path("report")
    normalization_scope: str = "full"
    jobs: int = 1
    train: network_mod.TrainConfig = field(default_factory=network_mod.TrainConfig)
    ga: optim_mod.GaConfig = field(default_factory=optim_mod.GaConfig)
    sa: optim_mod.SaConfig = field(default_factory=optim_mod.SaConfig)
    pso: optim_mod.PsoConfig = field(default_factory=optim_mod.PsoConfig)
    ns: optim_mod.NsConfig = field(default_factory=optim_mod.NsConfig)
    rf: forest_mod.ForestConfig = field(default_factory=forest_mod.ForestConfig)

    def __post_init__(self) -> None:
        self.dataset_path = Path(self.dataset_path)
        self.output_dir = Path(self.output_dir)
        if self.task_kind not in TASK_KINDS:
            raise ConfigError(f"task must be one of {TASK_KINDS}, got {self.task_kind!r}")
        if self.missing_column < 0:
            raise ConfigError("missing_column must be a non-negative column index")
        self.methods = tuple(self.methods)
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        for m in self.methods:
            if m not in ALL_METHODS:
                raise ConfigError(f"unknown method {m!r}; expected among {ALL_METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods must not repeat")
        if self.hidden_size != "auto":
            if not isinstance(self.hidden_size, int) or self.hidden_size < 2:
                raise ConfigError("hidden_size must be 'auto' or an integer >= 2")
        if self.normalization_scope not in ("full", "train"):
            raise ConfigError("normalization_scope must be 'full' or 'train'")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


# --- config file parsing ----------------------------------------------------

_GLOBAL_KEYS = {
    "dataset": str,
    "header": bool,
    "columns": str,
    "missing_column": int,
    "task": str,
    "hidden_size": str,
    "methods": str,
    "seed": int,
    "output": str,
    "normalization_scope": str,
    "jobs": int,
}

_SECTION_TYPES = {
    "train": network_mod.TrainConfig,
    "ga": optim_mod.GaConfig,
    "sa": optim_mod.SaConfig,
    "pso": optim_mod.PsoConfig,
    "ns": optim_mod.NsConfig,
    "rf": forest_mod.ForestConfig,
}

# Per-section keys driven from config files; seeds are always derived from
# the master seed and test hooks stay out of the file format.
_SECTION_KEYS = {
    name: {
        f.name: f.type
        for f in fields(cfg_type)
        if f.name not in ("seed", "rng_seed", "bootstrap", "initial_positions", "initial_velocities")
    }
    for name, cfg_type in _SECTION_TYPES.items()
}


def _parse_scalar(key: str, raw: str, annotation: str):
    raw = raw.strip()
    if annotation in ("int", int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if annotation in ("float", float):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if annotation in ("bool", bool):
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(f"{key}: expected true/false, got {raw!r}")
    if "int | None" in str(annotation) or "float | None" in str(annotation):
        if raw.lower() in ("none", "auto"):
            return None
        return _parse_scalar(key, raw, "float" if "float" in str(annotation) else "int")
    return raw


def _parse_columns(raw: str) -> tuple:
    entries = [e.strip() for e in raw.split(",") if e.strip()]
    out = []
    for e in entries:
        if ":" in e:
            name, kind = e.split(":", 1)
            out.append((name.strip(), kind.strip()))
        else:
            out.append(e)
    return tuple(out)


def parse_config(path, seed_override: int | None = None, output_override=None) -> ExperimentConfig:
    """Parse a flat ``key = value`` config file with dotted sections.

    Global keys: dataset, header, columns, missing_column, task, hidden_size,
    methods, seed, output, normalization_scope, jobs.  Sectioned keys such as
    ``ga.population = 50`` override algorithm defaults.  Unknown keys are
    errors.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    globals_seen: dict[str, object] = {}
    sections: dict[str, dict[str, object]] = {name: {} for name in _SECTION_TYPES}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if "." in key:
            section, sub = key.split(".", 1)
            if section not in _SECTION_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown section {section!r}")
            if sub not in _SECTION_KEYS[section]:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            sections[section][sub] = _parse_scalar(key, raw, _SECTION_KEYS[section][sub])
        else:
            if key not in _GLOBAL_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            globals_seen[key] = _parse_scalar(key, raw, _GLOBAL_KEYS[key])

    for required in ("dataset", "missing_column", "task"):
        if required not in globals_seen:
            raise ConfigError(f"{path}: missing required key {required!r}")

    kwargs: dict[str, object] = {
        "dataset_path": Path(str(globals_seen["dataset"])),
        "missing_column": globals_seen["missing_column"],
        "task_kind": globals_seen["task"],
    }
    if "header" in globals_seen:
        kwargs["header"] = globals_seen["header"]
    if "columns" in globals_seen:
        kwargs["column_kinds"] = _parse_columns(str(globals_seen["columns"]))
    if "hidden_size" in globals_seen:
        raw = str(globals_seen["hidden_size"])
        kwargs["hidden_size"] = raw if raw == "auto" else _parse_scalar("hidden_size", raw, int)
    if "methods" in globals_seen:
        kwargs["methods"] = tuple(
            m.strip() for m in str(globals_seen["methods"]).split(",") if m.strip()
        )
    if "seed" in globals_seen:
        kwargs["master_seed"] = globals_seen["seed"]
    if "output" in globals_seen:
        kwargs["output_dir"] = Path(str(globals_seen["output"]))
    if "normalization_scope" in globals_seen:
        kwargs["normalization_scope"] = globals_seen["normalization_scope"]
    if "jobs" in globals_seen:
        kwargs["jobs"] = globals_seen["jobs"]

    for name, cfg_type in _SECTION_TYPES.items():
        if sections[name]:
            try:
                kwargs[name] = cfg_type(**sections[name])
            except ValueError as err:
                raise ConfigError(f"{path}: section {name!r}: {err}") from None

    if seed_override is not None:
        kwargs["master_seed"] = seed_override
    if output_override is not None:
        kwargs["output_dir"] = Path(output_override)
    try:
        return ExperimentConfig(**kwargs)
    except ValueError as err:
        raise ConfigError(str(err)) from None


# --- report -----------------------------------------------------------------

@dataclass
class ExperimentReport:
    version: str
    config_echo: dict
    task_kind: str
    split_counts: dict
    hidden_size_requested: int | str
    hidden_size_selected: int
    train_loss: float
    method_results: dict
    comparison: dict
    methodology: dict
    normalization: list
    net: network_mod.Autoencoder
    columns: tuple
    timings: dict

    def to_json_dict(self) -> dict:
        return _plain(
            {
                "toolkit_version": self.version,
                "config": self.config_echo,
                "task_kind": self.task_kind,
                "split_counts": self.split_counts,
                "hidden_size": {
                    "requested": self.hidden_size_requested,
                    "selected": self.hidden_size_selected,
                },
                "train_loss": self.train_loss,
                "methods": self.method_results,
                "comparison": self.comparison,
                "methodology": self.methodology,
                "normalization": self.normalization,
            }
        )


def _plain(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _config_echo(cfg: ExperimentConfig) -> dict:
    """Scientific configuration with resolved defaults.

    Execution concerns (output directory, job count) and derived per-run
    seeds are excluded so the echo is identical wherever and however the same
    experiment runs.
    """
    def section(dc, drop=("seed", "rng_seed", "initial_positions", "initial_velocities")):
        return {
            f.name: getattr(dc, f.name)
            for f in fields(dc)
            if f.name not in drop
        }

    return {
        "dataset": str(cfg.dataset_path),
        "header": cfg.header,
        "columns": list(cfg.column_kinds) if cfg.column_kinds else None,
        "missing_column": cfg.missing_column,
        "task": cfg.task_kind,
        "hidden_size": cfg.hidden_size,
        "methods": list(cfg.methods),
        "seed": cfg.master_seed,
        "normalization_scope": cfg.normalization_scope,
        "train": section(cfg.train),
        "ga": section(cfg.ga),
        "sa": section(cfg.sa),
        "pso": section(cfg.pso),
        "ns": section(cfg.ns),
        "rf": section(cfg.rf, drop=("seed", "bootstrap")),
    }


_METHODOLOGY = {
    "mae": "mean absolute error (absolute deviations, not squared)",
    "pearson_r": "sample correlation; null when either vector is constant",
    "t_test": (
        "Welch two-sample, two-tailed, over per-test-record errors: squared "
        "error for prediction tasks, absolute score error against the 0/1 "
        "truth for classification tasks"
    ),
    "roc_scores": (
        "imputed class-column values (optimizers) and mean tree vote (rf) "
        "used directly as scores; hard labels threshold at 0.5 with ties to 1"
    ),
    "timings": "wall-clock stage timings live in timings.json and are not byte-stable",
}


def _display(value: float) -> str:
    return f"{value:.2f}"


# --- pipeline ---------------------------------------------------------------

def _prepare_dataset(cfg: ExperimentConfig) -> data_mod.Dataset:
    ds = data_mod.load_csv(cfg.dataset_path, schema=cfg.column_kinds, header=cfg.header)
    if not 0 <= cfg.missing_column < ds.n_columns:
        raise ConfigError(
            f"missing_column {cfg.missing_column} out of range for "
            f"{ds.n_columns}-column dataset"
        )
    if cfg.normalization_scope == "train":
        n = ds.n_rows
        fit_rows = n - 2 * (n // 4)  # size of the leading training block
        ds = data_mod.normalize(ds, fit_row_count=fit_rows)
    else:
        ds = data_mod.normalize(ds)
    return data_mod.split(ds)


def _impute_cell(net, task, method: str, cfg: ExperimentConfig, seed: int):
    """One (method, task) grid cell; returns the imputed scalar and run stats."""
    obj = MissingDataObjective(net, task)
    method_cfg = replace(getattr(cfg, method), seed=seed)
    result = optim_mod.run(obj, method, method_cfg)
    imputed = obj.impute(result)
    return float(imputed[cfg.missing_column]), result.best_value, result.evaluations


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentReport:
    """Execute the full pipeline; deterministic given the config and seed.

    ``progress`` is an optional callable receiving stage-name strings.  On
    any stage failure the partial results gathered so far are written to the
    output directory next to a failure marker, and the error is re-raised as
    :class:`ExperimentError` with the stage name.
    """
    notify = progress or (lambda msg: None)
    timings: dict[str, float] = {}
    partial: dict = {"config": _config_echo(cfg), "toolkit_version": __version__}
    stage = "prepare"

    def clock(name, fn, *args, **kwargs):
        start = perf_counter()
        out = fn(*args, **kwargs)
        timings[name] = perf_counter() - start
        return out

    try:
        notify("loading dataset")
        ds = clock("prepare", _prepare_dataset, cfg)
        counts = {label: int((ds.split == label).sum()) for label in data_mod.SPLIT_LABELS}
        partial["split_counts"] = counts

        stage = "hidden-size"
        if cfg.hidden_size == "auto":
            notify("searching hidden sizes")
            search_cfg = replace(cfg.train, rng_seed=cfg.master_seed)
            hidden = clock(
                "hidden_search",
                network_mod.select_hidden_size,
                ds.train_rows,
                ds.validation_rows,
                search_cfg,
            )
        else:
            hidden = int(cfg.hidden_size)
        partial["hidden_size_selected"] = hidden

        stage = "train"
        notify(f"training autoencoder (hidden={hidden})")
        train_cfg = replace(cfg.train, rng_seed=derive_seed(cfg.master_seed, "train"))
        net, train_loss = clock("train", network_mod.train, ds.train_rows, hidden, train_cfg)
        partial["train_loss"] = train_loss

        stage = "tasks"
        tasks = data_mod.make_tasks(ds, {cfg.missing_column})
        truth = np.array([t.true_values[cfg.missing_column] for t in tasks])
        target_spec = ds.columns[cfg.missing_column]

        stage = "impute"
        notify(f"imputing {len(tasks)} test records per method")
        start = perf_counter()
        optimizer_methods = [m for m in cfg.methods if m in OPTIMIZER_METHODS]
        imputed: dict[str, np.ndarray] = {}
        evaluations: dict[str, int] = {}

        cells = [
            (method, i, derive_seed(cfg.master_seed, method, i))
            for method in optimizer_methods
            for i in range(len(tasks))
        ]
        if cfg.jobs > 1 and cells:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                outcomes = list(
                    pool.map(
                        lambda cell: _impute_cell(net, tasks[cell[1]], cell[0], cfg, cell[2]),
                        cells,
                    )
                )
        else:
            outcomes = [
                _impute_cell(net, tasks[i], method, cfg, seed)
                for method, i, seed in cells
            ]
        for (method, i, _), (value, _, evals) in zip(cells, outcomes):
            imputed.setdefault(method, np.empty(len(tasks)))[i] = value
            evaluations[method] = evals

        rf_mtry_resolved: int | None = None
        if "rf" in cfg.methods:
            notify("fitting random forest")
            rf_cfg = replace(cfg.rf, seed=derive_seed(cfg.master_seed, "rf"))
            fitted = forest_mod.fit(
                ds.train_rows,
                cfg.missing_column,
                rf_cfg,
                binary_target=cfg.task_kind == "classification",
            )
            predictor_cols = list(fitted.predictor_columns)
            if rf_cfg.mtry is None:
                rf_mtry_resolved = max(1, math.isqrt(len(predictor_cols)))
            else:
                rf_mtry_resolved = rf_cfg.mtry
            rf_values = np.array(
                [fitted.predict(t.true_values[predictor_cols]) for t in tasks]
            )
            imputed["rf"] = rf_values
        timings["impute"] = perf_counter() - start

        stage = "score"
        notify("scoring methods")
        method_results: dict[str, dict] = {}
        errors: dict[str, np.ndarray] = {}
        for method in cfg.methods:
            values = imputed[method]
            block: dict = {
                "imputed": [
                    {"row": i, "true": float(truth[i]), "imputed": float(values[i])}
                    for i in range(len(tasks))
                ]
            }
            if method in evaluations:
                block["evaluations_per_task"] = evaluations[method]
            if method == "rf":
                block["mtry_resolved"] = rf_mtry_resolved
            if cfg.task_kind == "prediction":
                scores = metrics_mod.prediction_scores(truth, values)
                block["metrics"] = {
                    "mse": scores.mse,
                    "rmse": scores.rmse,
                    "mae": scores.mae,
                    "pearson_r": scores.pearson_r,
                }
                block["display"] = {
                    k: (_display(v) if v is not None else "undefined")
                    for k, v in block["metrics"].items()
                }
                errors[method] = (truth - values) ** 2
            else:
                if not np.isin(truth, (0.0, 1.0)).all():
                    raise ValueError(
                        "classification task needs a 0/1 target after scaling; "
                        f"column {target_spec.name!r} has other values"
                    )
                labels = truth.astype(int)
                roc = metrics_mod.roc_curve(values, labels)
                block["metrics"] = {"auc": roc.auc}
                block["display"] = {"auc": _display(roc.auc)}
                block["roc_points"] = [list(p) for p in roc.points]
                errors[method] = np.abs(values - truth)
            method_results[method] = block

        stage = "compare"
        comparison: dict = {}
        if len(cfg.methods) >= 2:
            matrix = metrics_mod.comparison_matrix(errors)
            comparison = {
                "methods": list(matrix.methods),
                "p_values": [[float(v) for v in row] for row in matrix.p_values],
                "pairs": [
                    {
                        "pair": f"{a.upper()}-{b.upper()}",
                        "p_value": p,
                        "display": _display(p),
                    }
                    for a, b, p in matrix.pairs()
                ],
            }

        return ExperimentReport(
            version=__version__,
            config_echo=partial["config"],
            task_kind=cfg.task_kind,
            split_counts=counts,
            hidden_size_requested=cfg.hidden_size,
            hidden_size_selected=hidden,
            train_loss=float(train_loss),
            method_results=method_results,
            comparison=comparison,
            methodology=dict(_METHODOLOGY),
            normalization=[
                {
                    "column": spec.name,
                    "kind": spec.kind,
                    "min": spec.observed_min,
                    "max": spec.observed_max,
                    "degenerate": spec.degenerate,
                }
                for spec in ds.columns
            ],
            net=net,
            columns=ds.columns,
            timings=timings,
        )
    except Exception as err:
        _persist_failure(cfg.output_dir, stage, err, partial)
        raise ExperimentError(f"stage {stage!r} failed: {err}") from err


def _persist_failure(out_dir: Path, stage: str, err: Exception, partial: dict) -> None:
    try:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        marker = f"stage: {stage}\nerror: {err}\n\n{traceback.format_exc()}"
        (out_dir / FAILURE_MARKER).write_text(marker, encoding="utf-8")
        (out_dir / "partial.json").write_text(
            json.dumps(_plain(partial), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError:
        pass  # never mask the original failure


# --- emission ---------------------------------------------------------------

def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit_report(report: ExperimentReport, out_dir) -> list[Path]:
    """Write the report's file set; emission is byte-stable per report.

    Files: report.json, metrics.csv, pvalues.csv, imputed_<method>.csv,
    roc_<method>.csv (classification only), model.txt, normalization.csv,
    and timings.json (the one file excluded from determinism guarantees).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, text: str) -> None:
        path = out_dir / name
        _write_text(path, text)
        written.append(path)

    emit("report.json", json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n")

    metric_lines = ["method,metric,value"]
    for method in report.method_results:
        for metric, value in report.method_results[method]["metrics"].items():
            cell = "undefined" if value is None else repr(float(value))
            metric_lines.append(f"{method},{metric},{cell}")
    emit("metrics.csv", "\n".join(metric_lines) + "\n")

    pair_lines = ["pair,p_value,display"]
    for entry in report.comparison.get("pairs", []):
        pair_lines.append(
            f"{entry['pair']},{repr(float(entry['p_value']))},{entry['display']}"
        )
    emit("pvalues.csv", "\n".join(pair_lines) + "\n")

    target_spec = _target_column_spec(report)
    for method, block in report.method_results.items():
        lines = ["row,true_value,imputed_value,true_original,imputed_original"]
        for entry in block["imputed"]:
            # Degenerate target columns are excluded from original-unit reporting.
            if not target_spec.degenerate:
                t_orig = repr(data_mod.denormalize(entry["true"], target_spec))
                i_orig = repr(data_mod.denormalize(entry["imputed"], target_spec))
            else:
                t_orig = i_orig = ""
            lines.append(
                f"{entry['row']},{repr(entry['true'])},{repr(entry['imputed'])},{t_orig},{i_orig}"
            )
        emit(f"imputed_{method}.csv", "\n".join(lines) + "\n")
        if report.task_kind == "classification":
            roc_lines = ["fpr,tpr"]
            roc_lines.extend(
                f"{repr(float(f))},{repr(float(t))}" for f, t in block["roc_points"]
            )
            emit(f"roc_{method}.csv", "\n".join(roc_lines) + "\n")

    model_path = out_dir / "model.txt"
    network_mod.save_model(report.net, model_path)
    written.append(model_path)

    emit("normalization.csv", data_mod.normalization_table(report.columns))

    timing_path = out_dir / "timings.json"
    _write_text(
        timing_path,
        json.dumps(_plain(report.timings), indent=2, sort_keys=True) + "\n",
    )
    written.append(timing_path)
    return written


def _target_column_spec(report: ExperimentReport):
    idx = report.config_echo["missing_column"]
    entry = report.normalization[idx]
    return data_mod.ColumnSpec(
        name=entry["column"],
        kind=entry["kind"],
        observed_min=entry["min"],
        observed_max=entry["max"],
        degenerate=entry["degenerate"],
    )


# --- verification -----------------------------------------------------------

def _read_csv_rows(path: Path) -> list[dict]:
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:] if line]


def verify_report(out_dir) -> list[tuple[str, bool, str]]:
    """Recompute every metric from the persisted imputed values.

    Returns (check name, passed, detail) tuples; metric comparisons use an
    absolute tolerance of 1e-9.  Missing files fail with an inventory of what
    was expected versus found.
    """
    out_dir = Path(out_dir)
    checks: list[tuple[str, bool, str]] = []
    report_path = out_dir / "report.json"
    if not report_path.exists():
        return [("inventory", False, f"missing {report_path.name}")]
    report = json.loads(report_path.read_text(encoding="utf-8"))
    task_kind = report["task_kind"]
    methods = list(report["methods"].keys())

    expected = ["report.json", "metrics.csv", "pvalues.csv", "model.txt", "normalization.csv"]
    expected += [f"imputed_{m}.csv" for m in methods]
    if task_kind == "classification":
        expected += [f"roc_{m}.csv" for m in methods]
    missing = [name for name in expected if not (out_dir / name).exists()]
    if missing:
        present = sorted(p.name for p in out_dir.iterdir())
        return [
            (
                "inventory",
                False,
                f"missing: {', '.join(missing)}; present: {', '.join(present)}",
            )
        ]
    checks.append(("inventory", True, f"{len(expected)} files present"))

    stored_metrics: dict[tuple[str, str], str] = {}
    for row in _read_csv_rows(out_dir / "metrics.csv"):
        stored_metrics[(row["method"], row["metric"])] = row["value"]

    errors: dict[str, np.ndarray] = {}
    for method in methods:
        rows = _read_csv_rows(out_dir / f"imputed_{method}.csv")
        truth = np.array([float(r["true_value"]) for r in rows])
        values = np.array([float(r["imputed_value"]) for r in rows])
        if task_kind == "prediction":
            scores = metrics_mod.prediction_scores(truth, values)
            recomputed = {
                "mse": scores.mse,
                "rmse": scores.rmse,
                "mae": scores.mae,
                "pearson_r": scores.pearson_r,
            }
            errors[method] = (truth - values) ** 2
        else:
            roc = metrics_mod.roc_curve(values, truth.astype(int))
            recomputed = {"auc": roc.auc}
            errors[method] = np.abs(values - truth)
            stored_points = [
                (float(r["fpr"]), float(r["tpr"]))
                for r in _read_csv_rows(out_dir / f"roc_{method}.csv")
            ]
            ok = len(stored_points) == len(roc.points) and all(
                abs(a - c) <= VERIFY_TOLERANCE and abs(b - d) <= VERIFY_TOLERANCE
                for (a, b), (c, d) in zip(stored_points, roc.points)
            )
            checks.append(
                (
                    f"roc_{method}",
                    ok,
                    "points match" if ok else "stored ROC points differ from recomputation",
                )
            )
        for metric, value in recomputed.items():
            key = (method, metric)
            if key not in stored_metrics:
                checks.append((f"{method}.{metric}", False, "absent from metrics.csv"))
                continue
            stored = stored_metrics[key]
            if value is None:
                ok = stored == "undefined"
                detail = "undefined as stored" if ok else f"stored {stored!r}, recomputed undefined"
            elif stored == "undefined":
                ok = False
                detail = f"stored undefined, recomputed {value!r}"
            else:
                ok = abs(float(stored) - value) <= VERIFY_TOLERANCE
                detail = (
                    "match"
                    if ok
                    else f"stored {float(stored)!r} vs recomputed {value!r}"
                )
            checks.append((f"{method}.{metric}", ok, detail))

    if len(methods) >= 2:
        matrix = metrics_mod.comparison_matrix(errors)
        # Pair names are unordered; the stored report may list methods in a
        # different order than the alphabetical recomputation here.
        recomputed_pairs = {
            frozenset((a.upper(), b.upper())): p for a, b, p in matrix.pairs()
        }
        for row in _read_csv_rows(out_dir / "pvalues.csv"):
            pair = row["pair"]
            key = frozenset(pair.split("-"))
            if key not in recomputed_pairs:
                checks.append((f"pvalue.{pair}", False, "unexpected pair"))
                continue
            ok = abs(float(row["p_value"]) - recomputed_pairs[key]) <= VERIFY_TOLERANCE
            checks.append(
                (
                    f"pvalue.{pair}",
                    ok,
                    "match"
                    if ok
                    else f"stored {row['p_value']} vs recomputed {recomputed_pairs[key]!r}",
                )
            )
    return checks
