"""Hyperparameters for the four classifiers, with textbook defaults."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


class TrainingError(ValueError):
    """Raised when a model cannot be trained on the given data or settings."""


@dataclass(frozen=True)
class LogRegParams:
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-4

    def validate(self) -> None:
        if not self.learning_rate > 0:
            raise TrainingError("logreg learning_rate must be > 0")
        if self.epochs < 1:
            raise TrainingError("logreg epochs must be >= 1")
        if not self.l2 >= 0:
            raise TrainingError("logreg l2 must be >= 0")


@dataclass(frozen=True)
class KnnParams:
    k: int = 5

    def validate(self) -> None:
        if self.k < 1:
            raise TrainingError("knn k must be >= 1")


@dataclass(frozen=True)
class TreeParams:
    max_depth: int | None = 6  # None grows until leaves are pure
    min_samples_leaf: int = 5

    def validate(self) -> None:
        if self.max_depth is not None and self.max_depth < 1:
            raise TrainingError("tree max_depth must be >= 1")
        if self.min_samples_leaf < 1:
            raise TrainingError("tree min_samples_leaf must be >= 1")


@dataclass(frozen=True)
class SvmParams:
    C: float = 1.0
    epochs: int = 200
    schedule: str = "pegasos"  # eta_t = 1/(lambda t); or "constant" at learning_rate
    learning_rate: float = 0.01

    def validate(self) -> None:
        if not self.C > 0:
            raise TrainingError("svm C must be > 0")
        if self.epochs < 1:
            raise TrainingError("svm epochs must be >= 1")
        if self.schedule not in ("pegasos", "constant"):
            raise TrainingError(f"svm schedule must be 'pegasos' or 'constant', got {self.schedule!r}")
        if not self.learning_rate > 0:
            raise TrainingError("svm learning_rate must be > 0")


@dataclass(frozen=True)
class Hyperparams:
    logreg: LogRegParams = LogRegParams()
    knn: KnnParams = KnnParams()
    tree: TreeParams = TreeParams()
    svm: SvmParams = SvmParams()

    def validate(self) -> None:
        for f in fields(self):
            getattr(self, f.name).validate()

    def to_dict(self) -> dict:
        return asdict(self)
