"""Seeded, from-scratch fraud-detection toolkit.

Imbalanced transaction data goes through random undersampling, feature
scaling, correlation-guided outlier removal and a stratified split; four
classifiers (logistic regression, k-NN, CART tree, linear SVM) are trained and
scored with precision / recall / F1 / ROC-AUC.
"""

from ._backend import BACKEND
from .dataset import DataError, Dataset, SyntheticSpec, class_counts, generate_synthetic, load_csv, stratified_split, write_csv
from .metrics import (
    ConfusionMatrix,
    EvalReport,
    RocCurve,
    auc,
    confusion_matrix,
    evaluate,
    precision_recall_f1,
    render_report,
    roc_auc,
    roc_curve,
)
from .preprocess import (
    CorrelationMatrix,
    ScalerParams,
    ScalingMethod,
    apply_scaler,
    correlation_matrix,
    fit_scaler,
    random_undersample,
    remove_extreme_outliers,
    top_correlated_features,
)

__version__ = "0.1.0"
