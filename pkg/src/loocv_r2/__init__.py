"""R² scoring corrected for leave-one-out cross-validation."""

from .core import (
    DecompositionTerms,
    ScoreReport,
    adjust_r2,
    decomposition_terms,
    loo_means,
    r2_cv_direct,
    r2_naive_closed_form,
    r2_naive_empirical,
    r2_standard,
    score_report,
)
from .errors import (
    CsvError,
    EmptyTrainingSet,
    InvalidSpec,
    LengthMismatch,
    MissingColumn,
    NonFiniteInput,
    R2Error,
    SeriesTooShort,
    SingularFit,
    ZeroVarianceTargets,
)
from .harness import PredictorSpec, SupervisedDataset, run_loocv, score_loocv
from .kernels import BACKEND

__version__ = "0.1.0"
