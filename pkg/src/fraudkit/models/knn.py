"""k-nearest-neighbour scorer (lazy: training just stores the rows)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._backend import kernels
from ..dataset import Dataset
from .params import KnnParams, TrainingError


@dataclass(frozen=True, eq=False)
class KnnModel:
    rows: np.ndarray
    labels: np.ndarray
    params: KnnParams
    seed: int = 0

    kind = "knn"

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    @property
    def k(self) -> int:
        return self.params.k

    def positive_counts(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        return np.asarray(kernels.knn_positive_counts(self.rows, self.labels, X, self.k))

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        """Fraction of the k nearest training rows labelled 1; ties at equal distance go to the lower row index."""
        return self.positive_counts(X) / self.k

    def state(self) -> dict:
        return {"rows": self.rows.tolist(), "labels": self.labels.tolist()}

    @classmethod
    def from_state(cls, state: dict, params: KnnParams, seed: int) -> "KnnModel":
        return cls(np.ascontiguousarray(state["rows"], dtype=np.float64),
                   np.ascontiguousarray(state["labels"], dtype=np.int8), params, seed)


def train_knn(train: Dataset, params: KnnParams = KnnParams(), seed: int = 0) -> KnnModel:
    params.validate()
    if params.k > train.n:
        raise TrainingError(f"k={params.k} exceeds the {train.n} training rows")
    return KnnModel(np.ascontiguousarray(train.rows), np.ascontiguousarray(train.labels, dtype=np.int8),
                    params, seed)
