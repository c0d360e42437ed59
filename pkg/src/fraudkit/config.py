"""Flat ``key = value`` pipeline configuration.

Example::

    # fraudkit pipeline
    input = synthetic            # or a path to a CSV, relative to this file
    label_column = Class
    seed = 42
    synthetic.n_total = 20000
    synthetic.positive_fraction = 0.01
    synthetic.d = 8
    synthetic.separation = 2.5
    synthetic.noise = 1.0
    scaler = standardize         # minmax | meannorm | standardize
    undersample_ratio = 1.0      # majority:minority after undersampling
    outlier.enabled = true
    outlier.top_k = 3
    outlier.iqr_multiplier = 2.5
    test_fraction = 0.3
    models = logreg, knn, tree, svm
    logreg.learning_rate = 0.1
    logreg.epochs = 500
    logreg.l2 = 0.0001
    knn.k = 5
    tree.max_depth = 6           # or none
    tree.min_samples_leaf = 5
    svm.C = 1.0
    svm.epochs = 200
    svm.schedule = pegasos       # pegasos | constant
    svm.learning_rate = 0.01     # used by the constant schedule only
    out_dir = out
    formats = table, json, csv

Only ``seed`` is required. Keys are case-insensitive.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, replace

from .dataset import SyntheticSpec
from .models import MODEL_KINDS, Hyperparams, KnnParams, LogRegParams, SvmParams, TreeParams
from .preprocess import ScalingMethod

REPORT_FORMATS = ("table", "json", "csv")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    input: str = "synthetic"
    label_column: str = "Class"
    synthetic: SyntheticSpec = SyntheticSpec()
    scaler: ScalingMethod = ScalingMethod.STANDARDIZE
    undersample_ratio: float = 1.0
    outlier_enabled: bool = True
    outlier_top_k: int = 3
    outlier_iqr_multiplier: float = 2.5
    test_fraction: float = 0.3
    hyperparams: Hyperparams = Hyperparams()
    models: tuple[str, ...] = MODEL_KINDS
    out_dir: str = "out"
    formats: tuple[str, ...] = REPORT_FORMATS
    base_dir: str = field(default=".", compare=False)

    @property
    def is_synthetic(self) -> bool:
        return self.input == "synthetic"

    def input_path(self) -> str:
        return os.path.join(self.base_dir, os.path.expanduser(self.input))

    def validate(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not self.undersample_ratio > 0:
            raise ConfigError("undersample_ratio must be positive")
        if self.outlier_top_k < 1:
            raise ConfigError("outlier.top_k must be >= 1")
        if not self.outlier_iqr_multiplier > 0:
            raise ConfigError("outlier.iqr_multiplier must be positive")
        if not 0 < self.test_fraction < 1:
            raise ConfigError("test_fraction must lie in (0, 1)")
        unknown = [m for m in self.models if m not in MODEL_KINDS]
        if unknown or not self.models or len(set(self.models)) != len(self.models):
            raise ConfigError(f"models must be distinct names from {MODEL_KINDS}, got {list(self.models)}")
        bad = [f for f in self.formats if f not in REPORT_FORMATS]
        if bad or not self.formats:
            raise ConfigError(f"formats must be drawn from {REPORT_FORMATS}, got {list(self.formats)}")
        try:
            self.hyperparams.validate()
            if self.is_synthetic:
                self.synthetic.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        """Settings that determine results; the output location is excluded."""
        doc = asdict(self)
        doc.pop("base_dir")
        doc.pop("out_dir")
        doc["scaler"] = self.scaler.value
        doc["models"] = list(self.models)
        doc["formats"] = list(self.formats)
        return doc

    def sha256(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def with_overrides(self, seed: int | None = None, out_dir: str | None = None) -> "PipelineConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if out_dir is not None:
            cfg = replace(cfg, out_dir=out_dir)
        return cfg


def _bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _list(v: str) -> tuple[str, ...]:
    return tuple(p.strip().lower() for p in v.split(",") if p.strip())


def _opt_int(v: str) -> int | None:
    return None if v.strip().lower() in ("none", "") else int(v)


# key -> (section, field, parser); section None means top level
_KEYS = {
    "seed": (None, "seed", int),
    "input": (None, "input", str),
    "label_column": (None, "label_column", str),
    "scaler": (None, "scaler", ScalingMethod.parse),
    "undersample_ratio": (None, "undersample_ratio", float),
    "outlier.enabled": (None, "outlier_enabled", _bool),
    "outlier.top_k": (None, "outlier_top_k", int),
    "outlier.iqr_multiplier": (None, "outlier_iqr_multiplier", float),
    "test_fraction": (None, "test_fraction", float),
    "models": (None, "models", _list),
    "out_dir": (None, "out_dir", str),
    "formats": (None, "formats", _list),
    "synthetic.n_total": ("synthetic", "n_total", int),
    "synthetic.positive_fraction": ("synthetic", "positive_fraction", float),
    "synthetic.d": ("synthetic", "d", int),
    "synthetic.separation": ("synthetic", "class_mean_separation", float),
    "synthetic.noise": ("synthetic", "noise_stddev", float),
    "logreg.learning_rate": ("logreg", "learning_rate", float),
    "logreg.epochs": ("logreg", "epochs", int),
    "logreg.l2": ("logreg", "l2", float),
    "knn.k": ("knn", "k", int),
    "tree.max_depth": ("tree", "max_depth", _opt_int),
    "tree.min_samples_leaf": ("tree", "min_samples_leaf", int),
    "svm.c": ("svm", "C", float),
    "svm.epochs": ("svm", "epochs", int),
    "svm.schedule": ("svm", "schedule", lambda v: v.strip().lower()),
    "svm.learning_rate": ("svm", "learning_rate", float),
}


def parse_config(text: str, base_dir: str = ".") -> PipelineConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string("[pipeline]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    top: dict = {}
    sub: dict[str, dict] = {"synthetic": {}, "logreg": {}, "knn": {}, "tree": {}, "svm": {}}
    for key, raw in parser["pipeline"].items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        section, name, conv = _KEYS[key]
        try:
            value = conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from exc
        (top if section is None else sub[section])[name] = value
    if "seed" not in top:
        raise ConfigError("config must set 'seed'")
    hp = Hyperparams(
        logreg=LogRegParams(**sub["logreg"]),
        knn=KnnParams(**sub["knn"]),
        tree=TreeParams(**sub["tree"]),
        svm=SvmParams(**sub["svm"]),
    )
    cfg = PipelineConfig(synthetic=SyntheticSpec(**sub["synthetic"]), hyperparams=hp, base_dir=base_dir, **top)
    cfg.validate()
    return cfg


def load_config(path: str | os.PathLike) -> PipelineConfig:
    path = os.fspath(path)
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))
