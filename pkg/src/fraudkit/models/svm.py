"""Linear SVM trained in the primal with Pegasos stochastic subgradient steps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._backend import kernels
from ..dataset import Dataset
from .params import SvmParams, TrainingError


@dataclass(frozen=True, eq=False)
class SvmModel:
    weights: np.ndarray
    bias: float
    params: SvmParams
    seed: int

    kind = "svm"

    @property
    def d(self) -> int:
        return self.weights.shape[0]

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        """Signed margin ``w.x + b``; larger means more fraud-like."""
        return X @ self.weights + self.bias

    def state(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_state(cls, state: dict, params: SvmParams, seed: int) -> "SvmModel":
        return cls(np.array(state["weights"], dtype=np.float64), float(state["bias"]), params, seed)


def train_svm(train: Dataset, params: SvmParams = SvmParams(), seed: int = 0) -> SvmModel:
    """Minimise ``lambda/2 ||w||^2 + mean(hinge)`` with ``lambda = 1 / (C n)``.

    The bias is learned as the weight of an appended constant feature (so it is
    regularised like the others). Each epoch visits every row once in an order
    drawn from ``seed``; the last iterate is returned.
    """
    params.validate()
    labels = train.labels
    if train.n == 0 or len(set(labels.tolist())) < 2:
        raise TrainingError("SVM needs both classes in the training data")
    n = train.n
    X = np.ascontiguousarray(np.column_stack([train.rows, np.ones(n)]))
    y = np.where(labels == 1, 1.0, -1.0)
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(n) for _ in range(params.epochs)]).astype(np.intp)
    lam = 1.0 / (params.C * n)
    w = np.asarray(kernels.pegasos_train(X, y, order, lam, params.learning_rate, params.schedule == "constant"))
    if not np.all(np.isfinite(w)):
        raise TrainingError("SVM diverged")
    return SvmModel(w[:-1].copy(), float(w[-1]), params, seed)
