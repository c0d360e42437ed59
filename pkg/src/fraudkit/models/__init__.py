"""Four classifiers behind one train / score / predict contract."""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from ..dataset import Dataset
from .knn import KnnModel, train_knn
from .logreg import LogRegModel, logreg_gradient, logreg_loss, sigmoid, train_logreg
from .params import Hyperparams, KnnParams, LogRegParams, SvmParams, TrainingError, TreeParams
from .svm import SvmModel, train_svm
from .tree import TreeModel, train_tree

TrainedModel = Union[LogRegModel, KnnModel, TreeModel, SvmModel]

MODEL_KINDS = ("logreg", "knn", "tree", "svm")
DISPLAY_NAMES = {
    "logreg": "logistic regression",
    "knn": "K-nearest neighbor",
    "svm": "support vector machine",
    "tree": "decision tree",
}
MODEL_SCHEMA = "fraudkit.model/1"

_CLASSES = {"logreg": LogRegModel, "knn": KnnModel, "tree": TreeModel, "svm": SvmModel}
_PARAMS = {"logreg": LogRegParams, "knn": KnnParams, "tree": TreeParams, "svm": SvmParams}
_TRAINERS = {"logreg": train_logreg, "knn": train_knn, "tree": train_tree, "svm": train_svm}


def train(kind: str, data: Dataset, hp: Hyperparams = Hyperparams(), seed: int = 0) -> TrainedModel:
    if kind not in _TRAINERS:
        raise TrainingError(f"unknown model kind {kind!r}")
    return _TRAINERS[kind](data, getattr(hp, kind), seed)


def _as_matrix(model: TrainedModel, rows) -> np.ndarray:
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.d:
        raise ValueError(f"expected rows of length {model.d}, got shape {np.shape(rows)}")
    return X


def score(model: TrainedModel, row) -> float:
    """Fraud score of one row. Only the ranking is meaningful across rows."""
    return float(model.score_batch(_as_matrix(model, row))[0])


def score_many(model: TrainedModel, rows) -> np.ndarray:
    return model.score_batch(_as_matrix(model, rows))


def default_threshold(model: TrainedModel) -> float:
    return 0.0 if model.kind == "svm" else 0.5


def predict(model: TrainedModel, row, threshold: float | None = None) -> int:
    t = default_threshold(model) if threshold is None else threshold
    return int(score(model, row) >= t)


def predict_many(model: TrainedModel, rows, threshold: float | None = None) -> np.ndarray:
    t = default_threshold(model) if threshold is None else threshold
    return (score_many(model, rows) >= t).astype(np.int8)


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "schema": MODEL_SCHEMA,
        "kind": model.kind,
        "seed": model.seed,
        "d": model.d,
        "hyperparams": vars(model.params).copy(),
        "state": model.state(),
    }


def model_from_dict(doc: dict) -> TrainedModel:
    if doc.get("schema") != MODEL_SCHEMA:
        raise ValueError(f"unsupported model schema {doc.get('schema')!r}")
    kind = doc["kind"]
    params = _PARAMS[kind](**doc["hyperparams"])
    return _CLASSES[kind].from_state(doc["state"], params, int(doc["seed"]))


def dumps(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), indent=1, sort_keys=True)


def loads(text: str) -> TrainedModel:
    return model_from_dict(json.loads(text))


__all__ = [
    "DISPLAY_NAMES", "Hyperparams", "KnnModel", "KnnParams", "LogRegModel", "LogRegParams", "MODEL_KINDS",
    "SvmModel", "SvmParams", "TrainedModel", "TrainingError", "TreeModel", "TreeParams", "default_threshold",
    "dumps", "loads", "logreg_gradient", "logreg_loss", "model_from_dict", "model_to_dict", "predict",
    "predict_many", "score", "score_many", "sigmoid", "train", "train_knn", "train_logreg", "train_svm",
    "train_tree",
]
