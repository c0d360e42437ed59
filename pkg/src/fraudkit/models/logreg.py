"""Logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset
from .params import LogRegParams, TrainingError


def sigmoid(z):
    return np.exp(-np.logaddexp(0.0, -z))


def logreg_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean binary cross-entropy plus ``l2/2 * ||w||^2`` (bias unpenalised)."""
    z = X @ w + b
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))


def logreg_gradient(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> tuple[np.ndarray, float]:
    resid = sigmoid(X @ w + b) - y
    n = X.shape[0]
    return X.T @ resid / n + l2 * w, float(resid.sum() / n)


@dataclass(frozen=True, eq=False)
class LogRegModel:
    weights: np.ndarray
    bias: float
    params: LogRegParams
    seed: int
    loss_history: tuple[float, ...] = ()

    kind = "logreg"

    @property
    def d(self) -> int:
        return self.weights.shape[0]

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(X @ self.weights + self.bias)

    def state(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias, "loss_history": list(self.loss_history)}

    @classmethod
    def from_state(cls, state: dict, params: LogRegParams, seed: int) -> "LogRegModel":
        return cls(np.array(state["weights"], dtype=np.float64), float(state["bias"]), params, seed,
                   tuple(state.get("loss_history", ())))


def train_logreg(train: Dataset, params: LogRegParams = LogRegParams(), seed: int = 0) -> LogRegModel:
    """Gradient descent from zero weights; records the loss before every epoch and at the end.

    The seed is stored for provenance only: full-batch descent from zeros is
    already deterministic.
    """
    params.validate()
    if train.n == 0 or len(set(train.labels.tolist())) < 2:
        raise TrainingError("logistic regression needs both classes in the training data")
    X = train.rows
    y = train.labels.astype(np.float64)
    w = np.zeros(train.d)
    b = 0.0
    history = []
    for _ in range(params.epochs):
        history.append(logreg_loss(w, b, X, y, params.l2))
        gw, gb = logreg_gradient(w, b, X, y, params.l2)
        w = w - params.learning_rate * gw
        b = b - params.learning_rate * gb
    history.append(logreg_loss(w, b, X, y, params.l2))
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise TrainingError("logistic regression diverged; lower the learning rate")
    return LogRegModel(w, float(b), params, seed, tuple(history))
