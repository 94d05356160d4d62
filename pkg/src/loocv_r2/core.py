"""Coefficient of determination under leave-one-out cross-validation.

Under LOOCV the naive baseline predicts, for point ``i``, the mean of the
other ``n - 1`` targets. Scoring it with the textbook R² (denominator taken
about the full-sample mean) gives a negative number that depends only on
``n``::

    r2_naive(n) = 1 - n**2 / (n - 1)**2

The corrected score replaces the denominator with squared deviations from the
leave-one-out means, so the naive baseline lands exactly on zero. The two are
related for *any* predictions by::

    r2_cv = (r2 - r2_naive(n)) / (1 - r2_naive(n))

Notation used throughout:

* ``A`` -- residual sum of squares, sum (y_i - yhat_i)**2
* ``B`` -- total sum of squares about the mean, sum (y_i - ybar)**2
* ``C`` -- total sum of squares about the leave-one-out means
* ``alpha`` -- n**2 / (n - 1)**2, with C == alpha * B
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import LengthMismatch, NonFiniteInput, SeriesTooShort, ZeroVarianceTargets

__all__ = [
    "DecompositionTerms",
    "ScoreReport",
    "as_targets",
    "as_predictions",
    "loo_means",
    "r2_standard",
    "r2_cv_direct",
    "r2_naive_closed_form",
    "r2_naive_empirical",
    "adjust_r2",
    "decomposition_terms",
    "score_report",
]


@dataclass(frozen=True)
class DecompositionTerms:
    a: float
    b: float
    c: float
    alpha: float


@dataclass(frozen=True)
class ScoreReport:
    """Every score for one set of (targets, predictions)."""

    r2_standard: float
    r2_cv_direct: float
    r2_cv_adjusted: float
    r2_naive_closed: float
    r2_naive_empirical: float
    n: int

    def to_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# input coercion
# ---------------------------------------------------------------------------

def as_targets(values, name="targets"):
    """Return ``values`` as a contiguous 1-D float64 array with n >= 2.

    Raises
    ------
    SeriesTooShort
        Fewer than two values.
    NonFiniteInput
        Any value is NaN or infinite.
    """
    y = np.ascontiguousarray(values, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {y.shape}")
    if y.shape[0] < 2:
        raise SeriesTooShort(f"{name} needs at least 2 values, got {y.shape[0]}")
    if not np.isfinite(y).all():
        raise NonFiniteInput(f"{name} contains NaN or infinite values")
    return y


def as_predictions(values, targets):
    p = np.ascontiguousarray(values, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"predictions must be one-dimensional, got shape {p.shape}")
    if p.shape[0] != targets.shape[0]:
        raise LengthMismatch(
            f"{p.shape[0]} predictions for {targets.shape[0]} targets"
        )
    if not np.isfinite(p).all():
        raise NonFiniteInput("predictions contain NaN or infinite values")
    return p


def _pair(targets, predictions):
    y = as_targets(targets)
    return y, as_predictions(predictions, y)


def _check_n(n):
    if n < 2:
        raise SeriesTooShort(f"n must be at least 2, got {n}")


def _is_constant(y):
    # fsum(y) / n need not round-trip to y[0], so test constancy directly
    return y.min() == y.max()


def _mean(y):
    return float(y[0]) if _is_constant(y) else kernels.compensated_sum(y) / y.shape[0]


def _loo_means(y):
    return y.copy() if _is_constant(y) else kernels.loo_means(y)


def _total_sum_squares(y):
    return kernels.sum_sq_dev(y, _mean(y))


# ---------------------------------------------------------------------------
# scores
# ---------------------------------------------------------------------------

def loo_means(targets):
    """Mean of the targets with each index left out in turn.

    Uses the total-sum identity ``(sum(y) - y[i]) / (n - 1)``, so one pass.

    >>> loo_means([1.0, 2.0, 3.0]).tolist()
    [2.5, 2.0, 1.5]
    """
    return _loo_means(as_targets(targets))


def r2_standard(targets, predictions):
    """Textbook R², ``1 - A / B``.

    Raises
    ------
    ZeroVarianceTargets
        All targets are equal, so ``B == 0`` and the score is undefined.
    """
    y, p = _pair(targets, predictions)
    b = _total_sum_squares(y)
    if b == 0.0:
        raise ZeroVarianceTargets("targets have zero variance; R² is undefined")
    return 1.0 - kernels.sum_sq_diff(y, p) / b


def r2_cv_direct(targets, predictions):
    """Cross-validated R², ``1 - A / C``, with ``C`` built from the LOO means."""
    y, p = _pair(targets, predictions)
    c = kernels.sum_sq_diff(y, _loo_means(y))
    if c == 0.0:
        raise ZeroVarianceTargets("targets have zero variance; R²_cv is undefined")
    return 1.0 - kernels.sum_sq_diff(y, p) / c


def r2_naive_closed_form(n):
    """Standard R² that the LOO mean predictor scores on ``n`` points.

    Strictly negative and increasing in ``n``; -3 at ``n = 2``.
    """
    _check_n(n)
    n = float(n)
    return 1.0 - (n * n) / ((n - 1.0) * (n - 1.0))


def r2_naive_empirical(targets):
    """``1 - C / B`` measured on actual targets.

    Equal to :func:`r2_naive_closed_form` for every target series with
    nonzero variance, whatever its scale.
    """
    y = as_targets(targets)
    b = _total_sum_squares(y)
    if b == 0.0:
        raise ZeroVarianceTargets("targets have zero variance; R²_naive is undefined")
    return 1.0 - kernels.sum_sq_diff(y, _loo_means(y)) / b


def adjust_r2(r2, n):
    """Map a standard R² measured by LOOCV onto the corrected scale."""
    naive = r2_naive_closed_form(n)
    return (r2 - naive) / (1.0 - naive)


def decomposition_terms(targets, predictions):
    """Compute ``A``, ``B``, ``C`` and ``alpha`` by direct summation.

    This is the reference path: the leave-one-out means are re-summed for
    every index (O(n²)) and every sum is compensated, so it is strictly more
    accurate than the scoring functions above and shares no code with their
    O(n) route. Constant targets are allowed here and give ``B = C = 0``.
    """
    y, p = _pair(targets, predictions)
    n = y.shape[0]
    ybar = _mean(y)
    a = kernels.compensated_sum_sq_diff(y, p)
    b = kernels.compensated_sum_sq_diff(y, np.full(n, ybar))
    c = kernels.compensated_sum_sq_diff(y, y if _is_constant(y) else kernels.brute_loo_means(y))
    nf = float(n)
    return DecompositionTerms(a=a, b=b, c=c, alpha=(nf * nf) / ((nf - 1.0) * (nf - 1.0)))


def score_report(targets, predictions):
    y, p = _pair(targets, predictions)
    n = y.shape[0]
    r2 = r2_standard(y, p)
    return ScoreReport(
        r2_standard=r2,
        r2_cv_direct=r2_cv_direct(y, p),
        r2_cv_adjusted=adjust_r2(r2, n),
        r2_naive_closed=r2_naive_closed_form(n),
        r2_naive_empirical=r2_naive_empirical(y),
        n=n,
    )
