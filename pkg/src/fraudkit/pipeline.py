"""End-to-end run: load -> undersample -> scale -> correlate -> outlier -> split -> train -> evaluate."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import warnings

from . import models as mdl
from .config import ConfigError, PipelineConfig
from .dataset import DataError, Dataset, class_counts, generate_synthetic, load_csv, stratified_split, write_csv
from .metrics import EvalReport, evaluate, render_report
from .preprocess import (
    apply_scaler,
    correlation_matrix,
    fit_scaler,
    random_undersample,
    remove_extreme_outliers,
    top_correlated_features,
)

log = logging.getLogger(__name__)

MANIFEST_SCHEMA = "fraudkit.manifest/1"
STAGES = ("load", "undersample", "scale", "correlate", "outlier", "split", "train", "evaluate")

# Per-stage seeds are master_seed + offset (mod 2**64).
SEED_OFFSETS = {"generate": 0, "undersample": 1, "split": 2, "logreg": 3, "knn": 4, "tree": 5, "svm": 6}

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_TRAINING, EXIT_IO = 0, 2, 3, 4, 5


class StageError(RuntimeError):
    def __init__(self, stage: str, exit_code: int, message: str):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage
        self.exit_code = exit_code


def stage_seed(master: int, stage: str) -> int:
    return (master + SEED_OFFSETS[stage]) % 2**64


def load_input(config: PipelineConfig) -> Dataset:
    if config.is_synthetic:
        return generate_synthetic(config.synthetic, stage_seed(config.seed, "generate"))
    return load_csv(config.input_path(), config.label_column)


def _counts(data: Dataset) -> dict:
    neg, pos = class_counts(data)
    return {"rows": data.n, "negatives": neg, "positives": pos}


def _file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class _Artifacts:
    """Tracks written files so a failed run can remove them."""

    def __init__(self, root: str):
        self.root = root
        self.written: list[str] = []
        self.made_dirs: list[str] = []

    def path(self, *parts: str) -> str:
        p = os.path.join(self.root, *parts)
        d = os.path.dirname(p)
        missing = []
        while d and not os.path.isdir(d):
            missing.append(d)
            d = os.path.dirname(d)
        for m in reversed(missing):
            os.mkdir(m)
            self.made_dirs.append(m)
        self.written.append(p)
        return p

    def write_text(self, text: str, *parts: str) -> None:
        with open(self.path(*parts), "w", newline="") as fh:
            fh.write(text)

    def rollback(self) -> None:
        for p in reversed(self.written):
            try:
                os.remove(p)
            except FileNotFoundError:
                pass
        for d in reversed(self.made_dirs):
            try:
                os.rmdir(d)
            except OSError:
                pass

    def relative(self) -> list[str]:
        return sorted(os.path.relpath(p, self.root).replace(os.sep, "/") for p in self.written)


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every stage and write artifacts under ``config.out_dir``.

    Returns the manifest. On failure raises StageError after deleting the
    files this run had written.
    """
    try:
        config.validate()
    except ConfigError as exc:
        raise StageError("config", EXIT_CONFIG, str(exc)) from exc
    out = _Artifacts(config.out_dir)
    try:
        return _run(config, out)
    except BaseException:
        out.rollback()
        raise


def _run(config: PipelineConfig, out: _Artifacts) -> dict:
    stages: list[dict] = []
    stage = "load"

    def fail(exc: Exception) -> StageError:
        if isinstance(exc, mdl.TrainingError):
            code = EXIT_TRAINING
        elif isinstance(exc, OSError):
            code = EXIT_IO
        elif isinstance(exc, ConfigError):
            code = EXIT_CONFIG
        else:
            code = EXIT_DATA
        return StageError(stage, code, str(exc))

    try:
        if not os.path.isdir(config.out_dir):
            os.makedirs(config.out_dir)
            out.made_dirs.insert(0, config.out_dir)
    except OSError as exc:
        raise StageError("output", EXIT_IO, str(exc)) from exc

    try:
        data = load_input(config)
        stages.append({"stage": "load", **_counts(data), "features": data.d})
        log.info("loaded %d rows, %d features", data.n, data.d)

        stage = "undersample"
        sub = random_undersample(data, config.undersample_ratio, stage_seed(config.seed, "undersample"))
        stages.append({"stage": stage, **_counts(sub)})
        write_csv(sub, out.path("subsample.csv"))

        stage = "scale"
        params = fit_scaler(sub, config.scaler)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            scaled = apply_scaler(sub, params)
        degenerate = [n for n, b in zip(params.feature_names, params.degenerate()) if b]
        stages.append({"stage": stage, **_counts(scaled), "method": params.method.value,
                       "degenerate_features": degenerate})
        for w in caught:
            log.warning("%s", w.message)

        stage = "correlate"
        correlation_matrix(data).write_csv(out.path("correlation_original.csv"))
        cm = correlation_matrix(scaled)
        cm.write_csv(out.path("correlation.csv"))
        k = min(config.outlier_top_k, scaled.d)
        top = top_correlated_features(cm, k)
        stages.append({"stage": stage, **_counts(scaled), "top_features": top,
                       "label_correlation": {f: cm.get(f, cm.label_name) for f in top}})

        stage = "outlier"
        if config.outlier_enabled:
            filtered, rep = remove_extreme_outliers(scaled, top, config.outlier_iqr_multiplier)
            stages.append({"stage": stage, **_counts(filtered), "enabled": True, "features": top,
                           "flagged": rep.flagged, "removed": rep.removed})
        else:
            filtered = scaled
            stages.append({"stage": stage, **_counts(filtered), "enabled": False, "removed": 0})

        stage = "split"
        train, test = stratified_split(filtered, config.test_fraction, stage_seed(config.seed, "split"))
        stages.append({"stage": stage, **_counts(filtered),
                       "train": _counts(train), "test": _counts(test)})

        stage = "train"
        trained = []
        for kind in config.models:
            model = mdl.train(kind, train, config.hyperparams, stage_seed(config.seed, kind))
            out.write_text(mdl.dumps(model) + "\n", kind, "model.json")
            trained.append(model)
        stages.append({"stage": stage, **_counts(train), "models": list(config.models)})

        stage = "evaluate"
        reports: list[EvalReport] = []
        for model in trained:
            scores = mdl.score_many(model, test.rows)
            rep = evaluate(mdl.DISPLAY_NAMES[model.kind], test.labels, scores, mdl.default_threshold(model))
            rep.roc.write_csv(out.path(model.kind, "roc.csv"))
            reports.append(rep)
        stages.append({"stage": stage, **_counts(test)})

        for fmt in config.formats:
            out.write_text(render_report(reports, fmt), f"report.{fmt}")
    except StageError:
        raise
    except (ValueError, OSError) as exc:
        raise fail(exc) from exc

    stage = "manifest"
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "config_sha256": config.sha256(),
        "config": config.to_dict(),
        "input_sha256": None if config.is_synthetic else _file_sha256(config.input_path()),
        "seed": config.seed,
        "stage_seeds": {s: stage_seed(config.seed, s) for s in SEED_OFFSETS},
        "stages": stages,
        "models": [dict(kind=m.kind, **r.to_dict()) for m, r in zip(trained, reports)],
    }
    manifest_path = out.path("manifest.json")
    manifest["artifacts"] = out.relative()
    try:
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise StageError(stage, EXIT_IO, str(exc)) from exc
    return manifest


def reports_from_manifest(manifest: dict) -> list[EvalReport]:
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise DataError(f"unsupported manifest schema {manifest.get('schema')!r}")
    return [EvalReport.from_dict(m) for m in manifest["models"]]


def inspect_dataset(data: Dataset) -> str:
    """Plain-text summary: size, class balance, per-feature statistics, null check."""
    neg, pos = class_counts(data)
    frac = pos / data.n if data.n else float("nan")
    lines = [
        f"rows: {data.n}",
        f"features: {data.d}",
        f"negatives (0): {neg}",
        f"positives (1): {pos}",
        f"positive fraction: {frac:.3g}",
        "null/non-finite cells: none",
        "",
    ]
    header = f"{'feature':<16}{'min':>14}{'max':>14}{'mean':>14}{'stddev':>14}"
    lines.append(header)
    x = data.rows
    stats = zip(data.feature_names, x.min(0), x.max(0), x.mean(0), x.std(0)) if data.n else []
    for name, lo, hi, mu, sd in stats:
        lines.append(f"{name:<16}{lo:>14.6g}{hi:>14.6g}{mu:>14.6g}{sd:>14.6g}")
    return "\n".join(lines) + "\n"


__all__ = [
    "EXIT_CONFIG", "EXIT_DATA", "EXIT_IO", "EXIT_OK", "EXIT_TRAINING", "MANIFEST_SCHEMA", "SEED_OFFSETS",
    "STAGES", "StageError", "inspect_dataset", "load_input", "reports_from_manifest", "run_pipeline",
    "stage_seed",
]
