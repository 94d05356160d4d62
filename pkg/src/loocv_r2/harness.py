"""Leave-one-out cross-validation with three demonstration predictors.

The predictors exist to put realistic predictions in front of the metric:

``mean``
    the naive baseline; its fold prediction is the leave-one-out mean
``linear``
    least squares with an intercept, optionally ridge-penalized
``knn``
    unweighted k nearest neighbours, Euclidean, ties to the lower row index
"""

from dataclasses import dataclass

import numpy as np

from . import core, kernels
from .errors import EmptyTrainingSet, InvalidSpec, NonFiniteInput, SeriesTooShort, SingularFit

__all__ = [
    "PREDICTOR_KINDS",
    "SupervisedDataset",
    "PredictorSpec",
    "FoldResult",
    "fit_predict_mean",
    "fit_predict_linear",
    "fit_predict_knn",
    "run_loocv",
    "loocv_folds",
    "score_loocv",
]

PREDICTOR_KINDS = ("mean", "linear", "knn")


@dataclass(frozen=True, eq=False)
class SupervisedDataset:
    """``features`` is coerced to an (n, d) float array; d may be 0."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        y = core.as_targets(self.targets)
        x = np.asarray(self.features, dtype=np.float64)
        if x.size == 0:
            x = np.empty((y.shape[0], 0))
        elif x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {x.shape}")
        if x.shape[0] != y.shape[0]:
            raise ValueError(f"{x.shape[0]} feature rows for {y.shape[0]} targets")
        if not np.isfinite(x).all():
            raise NonFiniteInput("features contain NaN or infinite values")
        object.__setattr__(self, "features", np.ascontiguousarray(x))
        object.__setattr__(self, "targets", y)

    @classmethod
    def from_targets(cls, targets):
        y = np.asarray(targets, dtype=np.float64)
        return cls(np.empty((y.shape[0], 0)), y)

    @property
    def n(self):
        return self.targets.shape[0]


@dataclass(frozen=True)
class PredictorSpec:
    kind: str = "mean"
    k: int = 3
    ridge: float = 0.0

    def __post_init__(self):
        if self.kind not in PREDICTOR_KINDS:
            raise InvalidSpec(f"unknown predictor {self.kind!r}; expected one of {PREDICTOR_KINDS}")
        if self.kind == "knn" and self.k < 1:
            raise InvalidSpec(f"k must be at least 1, got {self.k}")
        if not (np.isfinite(self.ridge) and self.ridge >= 0):
            raise InvalidSpec(f"ridge must be a nonnegative finite number, got {self.ridge}")

    def validate_for(self, n):
        if self.kind == "knn" and self.k > n - 1:
            raise InvalidSpec(
                f"k = {self.k} exceeds the {n - 1} training rows available per fold"
            )


@dataclass(frozen=True)
class FoldResult:
    held_out_index: int
    prediction: float
    training_mean: float


# ---------------------------------------------------------------------------
# single-fold predictors
# ---------------------------------------------------------------------------

def fit_predict_mean(train_targets):
    t = np.asarray(train_targets, dtype=np.float64)
    if t.size == 0:
        raise EmptyTrainingSet("cannot fit the mean of an empty training set")
    return kernels.compensated_sum(np.ascontiguousarray(t.ravel())) / t.size


def fit_predict_linear(train_features, train_targets, test_row, ridge=0.0):
    """Least squares with an unpenalized intercept via the normal equations.

    ``ridge`` is added to the diagonal of the Gram matrix for the slope
    terms only. With ``ridge == 0`` a rank-deficient design raises
    :class:`SingularFit` instead of falling back to a pseudo-inverse.
    """
    y = np.asarray(train_targets, dtype=np.float64)
    if y.size == 0:
        raise EmptyTrainingSet("cannot fit a linear model on an empty training set")
    x = np.asarray(train_features, dtype=np.float64).reshape(y.shape[0], -1)
    row = np.asarray(test_row, dtype=np.float64).ravel()
    if row.shape[0] != x.shape[1]:
        raise ValueError(f"test row has {row.shape[0]} columns, training data {x.shape[1]}")
    if x.shape[1] == 0:
        return fit_predict_mean(y)

    design = np.column_stack([np.ones(y.shape[0]), x])
    p = design.shape[1]
    if ridge == 0 and np.linalg.matrix_rank(design) < p:
        raise SingularFit(
            f"design matrix has rank {np.linalg.matrix_rank(design)} < {p} columns"
        )
    gram = design.T @ design
    penalty = np.full(p, float(ridge))
    penalty[0] = 0.0
    gram[np.diag_indices(p)] += penalty
    try:
        coef = np.linalg.solve(gram, design.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularFit(f"normal equations are singular: {exc}") from exc
    return float(coef[0] + row @ coef[1:])


def fit_predict_knn(train_features, train_targets, test_row, k):
    y = np.ascontiguousarray(train_targets, dtype=np.float64)
    x = np.ascontiguousarray(np.asarray(train_features, dtype=np.float64).reshape(y.shape[0], -1))
    row = np.ascontiguousarray(test_row, dtype=np.float64).ravel()
    if not 1 <= k <= y.shape[0]:
        raise InvalidSpec(f"k must lie in [1, {y.shape[0]}], got {k}")
    if row.shape[0] != x.shape[1]:
        raise ValueError(f"test row has {row.shape[0]} columns, training data {x.shape[1]}")
    return float(kernels.knn_predict(x, y, row, k))


# ---------------------------------------------------------------------------
# cross-validation
# ---------------------------------------------------------------------------

def run_loocv(data, spec):
    """Predict every row from a model fitted on the other ``n - 1`` rows.

    Output is aligned with ``data.targets`` and deterministic. The mean
    predictor returns :func:`loocv_r2.core.loo_means` verbatim, so its
    corrected score is exactly zero.
    """
    if data.n < 2:
        raise SeriesTooShort(f"need at least 2 rows, got {data.n}")
    spec.validate_for(data.n)
    x, y = data.features, data.targets

    if spec.kind == "mean":
        return core.loo_means(y)
    if spec.kind == "knn":
        if x.shape[1] == 0:
            # no features: every row is equidistant, ties resolve by index
            x = np.zeros((data.n, 1))
        return kernels.knn_loo(x, y, spec.k)

    out = np.empty(data.n)
    keep = np.ones(data.n, dtype=bool)
    for i in range(data.n):
        keep[i] = False
        try:
            out[i] = fit_predict_linear(x[keep], y[keep], x[i], spec.ridge)
        except SingularFit as exc:
            raise SingularFit(f"fold {i}: {exc}") from exc
        keep[i] = True
    return out


def loocv_folds(data, spec):
    predictions = run_loocv(data, spec)
    means = core.loo_means(data.targets)
    return [
        FoldResult(held_out_index=i, prediction=float(p), training_mean=float(m))
        for i, (p, m) in enumerate(zip(predictions, means))
    ]


def score_loocv(data, spec):
    """Run LOOCV and score the predictions. Returns a :class:`ScoreReport`."""
    return core.score_report(data.targets, run_loocv(data, spec))
