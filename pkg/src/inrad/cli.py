"""Command line interface.

Subcommands:

* run            train on one dataset (or every entity under a root)
                 and write scores, metrics and figures
* encoder-bench  compare how fast each encoder's re-training phase
                 reaches a target loss on the same data
* sweep          re-run detection across a grid of one hyperparameter
* synth          generate a labelled synthetic dataset
* stats          print row counts and anomaly rates for datasets

Option values resolve in precedence order: explicit flag, then
--config file (key = value lines), then the INRAD_SEED environment
variable (seed only), then built-in defaults. Every command writes the
fully resolved configuration to <out>/config.resolved, which can be
fed back via --config to reproduce a run.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import data as data_mod
from .data import (
    DatasetBundle,
    SynthSpec,
    dataset_stats,
    generate_synthetic,
    list_entities,
    load_dataset,
    load_entity,
    save_dataset,
)
from .encodings import DEFAULT_INTERVAL_SECONDS, format_timestamp
from .errors import ConfigError, InputError, InradError, NumericError
from .evaluation import EvalResult, best_f1_search
from .model import SirenConfig, save_model
from .training import (
    ENCODERS,
    MODES,
    TrainConfig,
    detect_pipeline,
    encode_for_mode,
    fit,
)

SEED_ENV_VAR = "INRAD_SEED"

SWEEP_INT_PARAMS = ("patience", "hidden_dim", "n_hidden_layers", "max_epochs")
SWEEP_FLOAT_PARAMS = ("omega0_first", "omega0_hidden", "lr")
SWEEP_PARAMS = SWEEP_INT_PARAMS + SWEEP_FLOAT_PARAMS


@dataclass
class RunConfig:
    """Every knob the CLI exposes, with its default."""

    # data selection
    train: str | None = None
    test: str | None = None
    labels: str | None = None
    data_root: str | None = None
    synth: bool = False
    interval_seconds: int = DEFAULT_INTERVAL_SECONDS
    # synthetic dataset shape
    synth_train_len: int = 2000
    synth_test_len: int = 2000
    synth_dim: int = 3
    synth_anomalies: int = 3
    synth_segment_min: int = 3
    synth_segment_max: int = 6
    synth_magnitude: float = 8.0
    synth_noise: float = 0.07
    synth_period_min: float = 160.0
    synth_period_max: float = 2800.0
    # model
    encoder: str = "temporal"
    mode: str = "warm_start"
    hidden_dim: int = 256
    n_hidden_layers: int = 3
    omega0_first: float = 3000.0
    omega0_hidden: float = 30.0
    # training
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.99
    epsilon: float = 1e-8
    max_epochs: int = 10000
    patience: int = 30
    min_rel_improvement: float = 1e-6
    batch_size: int | None = None
    # command specific
    target_loss: float = 1.2e-2
    sweep_param: str | None = None
    sweep_values: str | None = None
    # misc
    seed: int = 0
    out: str | None = None
    jobs: int = 1
    plots: bool = True


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _converter(python_type):
    def convert(text: str):
        text = text.strip()
        if text.lower() == "none":
            return None
        if python_type is bool:
            return _parse_bool(text)
        try:
            return python_type(text)
        except ValueError as exc:
            raise ConfigError(f"expected {python_type.__name__}, got {text!r}") from exc

    return convert


_FIELD_CONVERTERS = {}
for _f in fields(RunConfig):
    _base = {"str | None": str, "int | None": int}.get(_f.type, None)
    if _base is None:
        _base = {"str": str, "int": int, "float": float, "bool": bool}[_f.type]
    _FIELD_CONVERTERS[_f.name] = _converter(_base)


def read_config_file(path) -> dict:
    """Parse key = value lines; '#' starts a comment, blank lines ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path} line {number}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_CONVERTERS:
            raise ConfigError(f"{path} line {number}: unknown option {key!r}")
        values[key] = _FIELD_CONVERTERS[key](value)
    return values


def write_resolved_config(path, cfg: RunConfig) -> None:
    lines = []
    for name, value in sorted(asdict(cfg).items()):
        if value is None:
            rendered = "none"
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{name} = {rendered}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults <- INRAD_SEED <- config file <- explicit flags."""
    merged = {}
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            merged["seed"] = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR}={env_seed!r} is not an integer") from exc
    config_path = getattr(args, "config", None)
    if config_path:
        merged.update(read_config_file(config_path))
    for key, value in vars(args).items():
        if key in _FIELD_CONVERTERS:
            merged[key] = value
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Argument parser


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data")
    g.add_argument("--train", help="training CSV")
    g.add_argument("--test", help="test CSV")
    g.add_argument("--labels", help="test label CSV (one 0/1 per line)")
    g.add_argument("--data-root", dest="data_root", help="directory of <entity>/train.csv,test.csv[,test_label.csv]")
    g.add_argument("--synth", action="store_true", help="generate data in memory instead of loading files")
    g.add_argument("--interval-seconds", dest="interval_seconds", type=int, help="spacing used when timestamps are absent")


def _add_synth_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthetic data")
    g.add_argument("--synth-train-len", dest="synth_train_len", type=int)
    g.add_argument("--synth-test-len", dest="synth_test_len", type=int)
    g.add_argument("--synth-dim", dest="synth_dim", type=int)
    g.add_argument("--synth-anomalies", dest="synth_anomalies", type=int)
    g.add_argument("--synth-segment-min", dest="synth_segment_min", type=int)
    g.add_argument("--synth-segment-max", dest="synth_segment_max", type=int)
    g.add_argument("--synth-magnitude", dest="synth_magnitude", type=float)
    g.add_argument("--synth-noise", dest="synth_noise", type=float)
    g.add_argument("--synth-period-min", dest="synth_period_min", type=float)
    g.add_argument("--synth-period-max", dest="synth_period_max", type=float)


def _add_model_flags(p: argparse.ArgumentParser, with_encoder: bool = True) -> None:
    g = p.add_argument_group("model")
    if with_encoder:
        g.add_argument("--encoder", choices=ENCODERS)
        g.add_argument("--mode", choices=MODES)
    g.add_argument("--hidden-dim", dest="hidden_dim", type=int)
    g.add_argument("--n-hidden-layers", dest="n_hidden_layers", type=int)
    g.add_argument("--omega0-first", dest="omega0_first", type=float)
    g.add_argument("--omega0-hidden", dest="omega0_hidden", type=float)


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training")
    g.add_argument("--lr", type=float)
    g.add_argument("--beta1", type=float)
    g.add_argument("--beta2", type=float)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--max-epochs", dest="max_epochs", type=int)
    g.add_argument("--patience", type=int)
    g.add_argument("--min-rel-improvement", dest="min_rel_improvement", type=float)
    g.add_argument("--batch-size", dest="batch_size", type=int)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--seed", type=int)
    g.add_argument("--config", help="key = value file of defaults")
    g.add_argument("--out", help="output directory")
    g.add_argument("--jobs", type=int, help="parallel workers across entities")
    g.add_argument("--no-plots", dest="plots", action="store_false", help="skip SVG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inrad",
        description="Anomaly detection by fitting an implicit neural representation to a time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="detect anomalies and write a report",
                           argument_default=argparse.SUPPRESS)
    for add in (_add_data_flags, _add_synth_flags, _add_model_flags, _add_train_flags, _add_common_flags):
        add(p_run)
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("encoder-bench", help="benchmark encoder convergence",
                             argument_default=argparse.SUPPRESS)
    _add_data_flags(p_bench)
    _add_synth_flags(p_bench)
    _add_model_flags(p_bench, with_encoder=False)
    _add_train_flags(p_bench)
    _add_common_flags(p_bench)
    p_bench.add_argument("--target-loss", dest="target_loss", type=float,
                         help="training loss the re-train phase must reach")
    p_bench.set_defaults(func=cmd_encoder_bench)

    p_sweep = sub.add_parser("sweep", help="grid over one hyperparameter",
                             argument_default=argparse.SUPPRESS)
    for add in (_add_data_flags, _add_synth_flags, _add_model_flags, _add_train_flags, _add_common_flags):
        add(p_sweep)
    p_sweep.add_argument("--param", dest="sweep_param", choices=SWEEP_PARAMS)
    p_sweep.add_argument("--values", dest="sweep_values", help="comma separated grid values")
    p_sweep.set_defaults(func=cmd_sweep)

    p_synth = sub.add_parser("synth", help="write a generated dataset to disk",
                             argument_default=argparse.SUPPRESS)
    _add_synth_flags(p_synth)
    p_synth.add_argument("--interval-seconds", dest="interval_seconds", type=int)
    _add_common_flags(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_stats = sub.add_parser("stats", help="summarize datasets",
                             argument_default=argparse.SUPPRESS)
    _add_data_flags(p_stats)
    _add_synth_flags(p_stats)
    _add_common_flags(p_stats)
    p_stats.set_defaults(func=cmd_stats)
    return parser


# ---------------------------------------------------------------------------
# Data selection shared by run/bench/sweep/stats


def _synth_spec(cfg: RunConfig) -> SynthSpec:
    return SynthSpec(
        train_len=cfg.synth_train_len,
        test_len=cfg.synth_test_len,
        dim=cfg.synth_dim,
        n_anomalies=cfg.synth_anomalies,
        segment_len_range=(cfg.synth_segment_min, cfg.synth_segment_max),
        magnitude=cfg.synth_magnitude,
        noise_sigma=cfg.synth_noise,
        period_range=(cfg.synth_period_min, cfg.synth_period_max),
        interval_seconds=cfg.interval_seconds,
        seed=cfg.seed,
    )


def _load_entities(cfg: RunConfig) -> list[tuple[str, DatasetBundle]]:
    sources = [s for s in (cfg.synth, cfg.data_root, cfg.train) if s]
    if cfg.synth and (cfg.data_root or cfg.train or cfg.test):
        raise ConfigError("--synth cannot be combined with --train/--test/--data-root")
    if cfg.data_root and (cfg.train or cfg.test):
        raise ConfigError("--data-root cannot be combined with --train/--test")
    if cfg.test and not cfg.train:
        raise ConfigError("--test requires --train")
    if not sources:
        raise ConfigError("no data given: use --train/--test, --data-root or --synth")
    if cfg.synth:
        bundle, _ = generate_synthetic(_synth_spec(cfg))
        return [("synth", bundle)]
    if cfg.data_root:
        return [
            (name, load_entity(cfg.data_root, name, cfg.interval_seconds))
            for name in list_entities(cfg.data_root)
        ]
    if not cfg.test:
        raise ConfigError("--train requires --test")
    bundle = load_dataset(
        cfg.train, cfg.test, cfg.labels, interval_seconds=cfg.interval_seconds,
        name=Path(cfg.test).parent.name or "series",
    )
    return [(bundle.test.name, bundle)]


def _single_entity(cfg: RunConfig, command: str) -> DatasetBundle:
    entities = _load_entities(cfg)
    if len(entities) != 1:
        raise ConfigError(f"{command} works on a single dataset, got {len(entities)} entities")
    return entities[0][1]


def _siren_template(cfg: RunConfig) -> SirenConfig:
    return SirenConfig(
        input_dim=1,
        output_dim=1,
        hidden_dim=cfg.hidden_dim,
        n_hidden_layers=cfg.n_hidden_layers,
        omega0_first=cfg.omega0_first,
        omega0_hidden=cfg.omega0_hidden,
        seed=cfg.seed,
    )


def _train_config(cfg: RunConfig) -> TrainConfig:
    return TrainConfig(
        lr=cfg.lr,
        beta1=cfg.beta1,
        beta2=cfg.beta2,
        epsilon=cfg.epsilon,
        max_epochs=cfg.max_epochs,
        patience=cfg.patience,
        min_rel_improvement=cfg.min_rel_improvement,
        batch_size=cfg.batch_size,
        seed=cfg.seed,
    )


def _require_out(cfg: RunConfig) -> Path:
    if not cfg.out:
        raise ConfigError("--out is required for this command")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _json_float(value: float) -> float | None:
    return value if math.isfinite(value) else None


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_scores_csv(path, series, scores) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("timestamp,score\n")
        for ts, score in zip(series.timestamps, scores):
            fh.write(f"{format_timestamp(ts)},{float(score)!r}\n")


# ---------------------------------------------------------------------------
# run


def _run_one(name: str, bundle: DatasetBundle, cfg: RunConfig, out_dir: Path) -> dict:
    result = detect_pipeline(
        bundle,
        mode=cfg.mode,
        encoder=cfg.encoder,
        siren=_siren_template(cfg),
        train_cfg=_train_config(cfg),
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_scores_csv(out_dir / "scores.csv", bundle.test, result.scores)
    save_model(result.model, out_dir / "model.json")
    report = {
        "mode": cfg.mode,
        "encoder": cfg.encoder,
        "phases": {name_: rep.to_dict() for name_, rep in result.reports.items()},
    }
    _write_json(out_dir / "train_report.json", report)

    metrics = None
    evaluation: EvalResult | None = None
    if bundle.test.labels is not None:
        evaluation = best_f1_search(result.scores, bundle.test.labels)
        metrics = {
            "precision": evaluation.precision,
            "recall": evaluation.recall,
            "f1": evaluation.f1,
            "threshold": _json_float(evaluation.threshold),
            "mode": cfg.mode,
            "encoder": cfg.encoder,
        }
        _write_json(out_dir / "metrics.json", metrics)
    if cfg.plots:
        from .plotting import save_loss_plot, save_score_plot

        save_score_plot(
            out_dir / "scores.svg",
            result.scores,
            labels=bundle.test.labels,
            threshold=evaluation.threshold if evaluation else None,
            title=f"anomaly scores: {name}",
        )
        save_loss_plot(
            out_dir / "loss.svg",
            {phase: rep.loss_trace for phase, rep in result.reports.items()},
            title=f"training loss: {name}",
        )
    return {"name": name, "metrics": metrics}


def cmd_run(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    entities = _load_entities(cfg)
    write_resolved_config(out / "config.resolved", cfg)
    multi = len(entities) > 1
    jobs = [(name, bundle, cfg, out / name if multi else out) for name, bundle in entities]
    if cfg.jobs > 1 and multi:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(lambda args: _run_one(*args), jobs))
    else:
        results = [_run_one(*args) for args in jobs]

    scored = [r for r in results if r["metrics"]]
    for r in results:
        if r["metrics"]:
            m = r["metrics"]
            print(
                f"{r['name']}: f1={m['f1']:.4f} precision={m['precision']:.4f} "
                f"recall={m['recall']:.4f} threshold={m['threshold']}"
            )
        else:
            print(f"{r['name']}: scores written (no labels, no metrics)")
    if multi and scored:
        summary = {
            "mode": cfg.mode,
            "encoder": cfg.encoder,
            "mean_f1": sum(r["metrics"]["f1"] for r in scored) / len(scored),
            "entities": {r["name"]: r["metrics"] for r in results},
        }
        _write_json(out / "metrics.json", summary)
        print(f"mean f1 over {len(scored)} entities: {summary['mean_f1']:.4f}")
    print(f"outputs in {out}")
    return 0


# ---------------------------------------------------------------------------
# encoder-bench


def cmd_encoder_bench(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    bundle = _single_entity(cfg, "encoder-bench")
    write_resolved_config(out / "config.resolved", cfg)
    siren = _siren_template(cfg)
    train_cfg = _train_config(cfg)
    from .data import fit_scaling, scale

    stats = fit_scaling(bundle.train.values)
    train_scaled = scale(bundle.train.values, stats)
    test_scaled = scale(bundle.test.values, stats)

    def first_at_or_below(trace, target):
        for i, loss in enumerate(trace, start=1):
            if loss <= target:
                return i
        return None

    rows = []
    traces = {}
    for encoder in ENCODERS:
        coords_train, coords_test, _ = encode_for_mode(
            bundle.train, bundle.test, "warm_start", encoder
        )
        from .model import init_model

        model = init_model(
            replace(siren, input_dim=coords_test.shape[1], output_dim=bundle.test.dim)
        )
        pre = fit(model, coords_train, train_scaled, train_cfg)
        retrain = fit(model, coords_test, test_scaled, train_cfg)
        # Convergence = both phases have brought their span's loss down to
        # the target; the epoch count is cumulative across the two fits,
        # so an encoder whose warm start survives the span change (the
        # test-span trace starts at or near the target) pays almost
        # nothing for the second phase.
        pre_cross = first_at_or_below(pre.loss_trace, cfg.target_loss)
        re_cross = first_at_or_below(retrain.loss_trace, cfg.target_loss)
        reached = pre_cross is not None and re_cross is not None
        rows.append(
            {
                "encoder": encoder,
                "reached_target": reached,
                "pretrain_epochs_to_target": pre_cross,
                "retrain_epochs_to_target": re_cross,
                "epochs_to_target": (pre_cross + re_cross) if reached else None,
                "seconds_to_target": (
                    pre_cross * pre.seconds_per_epoch
                    + re_cross * retrain.seconds_per_epoch
                    if reached
                    else None
                ),
                "seconds_per_epoch": (
                    (pre.wall_seconds + retrain.wall_seconds)
                    / max(pre.stopping_epoch + retrain.stopping_epoch, 1)
                ),
                "pretrain_best_loss": pre.best_loss,
                "best_loss": retrain.best_loss,
                "pretrain_epochs": pre.stopping_epoch,
                "stop_epoch": retrain.stopping_epoch,
            }
        )
        traces[encoder] = pre.loss_trace + retrain.loss_trace

    columns = [
        "encoder", "reached_target", "pretrain_epochs_to_target",
        "retrain_epochs_to_target", "epochs_to_target", "seconds_to_target",
        "seconds_per_epoch", "pretrain_best_loss", "best_loss",
        "pretrain_epochs", "stop_epoch",
    ]
    with open(out / "encoder_bench.csv", "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_render_cell(row[c]) for c in columns) + "\n")
    if cfg.plots:
        from .plotting import save_bench_plot, save_loss_plot

        save_bench_plot(out / "encoder_bench.svg", rows)
        save_loss_plot(
            out / "encoder_bench_loss.svg", traces, target=cfg.target_loss,
            title="training loss by encoder (pre-train, then re-train)",
        )
    for row in rows:
        state = (
            f"target {cfg.target_loss} in {row['epochs_to_target']} epochs "
            f"(pre-train {row['pretrain_epochs_to_target']}"
            f" + re-train {row['retrain_epochs_to_target']})"
            if row["reached_target"]
            else (
                f"target {cfg.target_loss} not reached "
                f"(best pre-train {row['pretrain_best_loss']:.3g}, "
                f"re-train {row['best_loss']:.3g})"
            )
        )
        print(f"{row['encoder']}: {state}")
    print(f"outputs in {out}")
    return 0


def _render_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# sweep


def _sweep_values(cfg: RunConfig) -> list:
    if not cfg.sweep_param or not cfg.sweep_values:
        raise ConfigError("sweep needs --param and --values")
    cast = int if cfg.sweep_param in SWEEP_INT_PARAMS else float
    values = []
    for chunk in cfg.sweep_values.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            values.append(cast(chunk))
        except ValueError as exc:
            raise ConfigError(
                f"--values entry {chunk!r} is not a valid {cast.__name__}"
            ) from exc
    if not values:
        raise ConfigError("--values is empty")
    return values


def cmd_sweep(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    bundle = _single_entity(cfg, "sweep")
    if bundle.test.labels is None:
        raise ConfigError("sweep needs labelled test data to report F1")
    values = _sweep_values(cfg)
    write_resolved_config(out / "config.resolved", cfg)

    rows = []
    for value in values:
        point = replace(cfg, **{cfg.sweep_param: value})
        result = detect_pipeline(
            bundle,
            mode=point.mode,
            encoder=point.encoder,
            siren=_siren_template(point),
            train_cfg=_train_config(point),
        )
        evaluation = best_f1_search(result.scores, bundle.test.labels)
        epochs = {name: rep.stopping_epoch for name, rep in result.reports.items()}
        rows.append(
            {
                "param": cfg.sweep_param,
                "value": value,
                "precision": evaluation.precision,
                "recall": evaluation.recall,
                "f1": evaluation.f1,
                "threshold": evaluation.threshold,
                "epochs": "+".join(str(epochs[k]) for k in sorted(epochs)),
            }
        )
        print(f"{cfg.sweep_param}={value}: f1={evaluation.f1:.4f}")

    columns = ["param", "value", "precision", "recall", "f1", "threshold", "epochs"]
    with open(out / "sweep.csv", "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_render_cell(row[c]) for c in columns) + "\n")
    if cfg.plots:
        from .plotting import save_sweep_plot

        save_sweep_plot(
            out / "sweep.svg", cfg.sweep_param, [r["value"] for r in rows], [r["f1"] for r in rows]
        )
    print(f"outputs in {out}")
    return 0


# ---------------------------------------------------------------------------
# synth and stats


def cmd_synth(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    spec = _synth_spec(cfg)
    bundle, inventory = generate_synthetic(spec)
    save_dataset(out, bundle)
    write_resolved_config(out / "config.resolved", cfg)
    _write_json(
        out / "anomalies.json",
        {
            "segments": [seg.to_dict() for seg in inventory],
            "test_len": spec.test_len,
            "train_len": spec.train_len,
            "dim": spec.dim,
            "seed": spec.seed,
        },
    )
    if cfg.plots:
        from .plotting import save_series_preview

        save_series_preview(out / "preview.svg", bundle.test.values, bundle.test.labels)
    print(
        f"wrote {data_mod.TRAIN_FILE}, {data_mod.TEST_FILE}, {data_mod.LABEL_FILE} "
        f"({spec.train_len}+{spec.test_len} rows, {len(inventory)} anomalies) to {out}"
    )
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    entities = _load_entities(cfg)
    rows = [dataset_stats(bundle) for _, bundle in entities]
    header = f"{'entity':<20} {'train':>8} {'test':>8} {'features':>8} {'anomaly%':>9} {'segments':>8}"
    print(header)
    print("-" * len(header))
    for row in rows:
        rate = f"{100 * row['anomaly_rate']:.2f}" if row["anomaly_rate"] is not None else "-"
        segments = row["anomaly_segments"] if row["anomaly_segments"] is not None else "-"
        print(
            f"{row['entity']:<20} {row['train_rows']:>8} {row['test_rows']:>8} "
            f"{row['features']:>8} {rate:>9} {segments:>8}"
        )
    if cfg.out:
        out = _require_out(cfg)
        _write_json(out / "stats.json", {"entities": rows})
        write_resolved_config(out / "config.resolved", cfg)
        print(f"outputs in {out}")
    return 0


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except InradError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
