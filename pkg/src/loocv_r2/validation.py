"""Randomized numerical checks of the LOO R² identities.

Each ``verify_*`` function draws seeded random series, compares the fast
scoring path in :mod:`loocv_r2.core` against brute-force quantities, and
returns the worst gap it saw in a :class:`VerificationReport`.

Random numbers come from numpy's PCG64 bit generator. Every (check, n) pair
gets its own stream, seeded from ``SeedSequence([seed, check, distribution,
n])``, so a report depends only on its config, not on what ran before it.
Draws with zero variance are skipped and counted rather than failed.
"""

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import core, kernels

__all__ = [
    "DISTRIBUTIONS",
    "DEFAULT_N_VALUES",
    "TOLERANCES",
    "ExperimentConfig",
    "VerificationReport",
    "oracle_loo_means",
    "verify_c_equals_alpha_b",
    "verify_adjustment_identity",
    "verify_variance_independence",
    "verify_translation_invariance",
    "verify_all",
]

DISTRIBUTIONS = ("uniform", "normal", "lognormal")
DEFAULT_N_VALUES = (2, 3, 5, 10, 50, 200)

# report field -> largest acceptable value
TOLERANCES = {
    "max_abs_identity_gap": 1e-9,
    "max_rel_c_alpha_b_gap": 1e-10,
    "max_rel_naive_gap": 1e-9,
    "max_rel_translation_gap": 1e-9,
    "max_rel_oracle_gap": 1e-12,
}

_CHECK_IDS = {"c_alpha_b": 1, "identity": 2, "variance": 3, "translation": 4}

MAX_SHIFT = 1e6
LOG10_STD_RANGE = (-3.0, 3.0)


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple = DEFAULT_N_VALUES
    trials: int = 1000
    seed: int = 42
    distribution: str = "normal"

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values or min(self.n_values) < 2:
            raise ValueError(f"every n must be at least 2, got {self.n_values}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; expected one of {DISTRIBUTIONS}"
            )

    def rng(self, check, n):
        seq = np.random.SeedSequence(
            [self.seed, _CHECK_IDS[check], DISTRIBUTIONS.index(self.distribution), n]
        )
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class VerificationReport:
    """Worst gaps seen; a gap a check does not measure stays at 0.

    ``max_abs_identity_gap`` is ``|adjusted - direct| / max(1, |direct|)``:
    the absolute gap for scores in [-1, 1], relative beyond that.
    """

    max_abs_identity_gap: float = 0.0
    max_rel_c_alpha_b_gap: float = 0.0
    max_rel_naive_gap: float = 0.0
    max_rel_translation_gap: float = 0.0
    max_rel_oracle_gap: float = 0.0
    trials_run: int = 0
    skipped: int = 0

    def merge(self, other):
        merged = {}
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            merged[f.name] = a + b if f.name in ("trials_run", "skipped") else max(a, b)
        return VerificationReport(**merged)

    def failures(self, tolerances=None):
        """Names of the gaps that exceed their tolerance."""
        tolerances = TOLERANCES if tolerances is None else tolerances
        return [name for name, tol in tolerances.items() if not getattr(self, name) <= tol]

    @property
    def passed(self):
        return not self.failures()

    def to_dict(self):
        return asdict(self)


class _Worst:
    # running max that treats NaN as an infinitely bad gap
    def __init__(self):
        self.value = 0.0

    def update(self, gap):
        gap = float(gap)
        if math.isnan(gap):
            gap = math.inf
        if gap > self.value:
            self.value = gap


def draw(rng, distribution, size):
    if distribution == "uniform":
        return rng.uniform(-1.0, 1.0, size)
    if distribution == "normal":
        return rng.standard_normal(size)
    if distribution == "lognormal":
        return rng.lognormal(0.0, 1.0, size)
    raise ValueError(f"unknown distribution {distribution!r}")


def _scaled_draw(rng, distribution, n):
    # spread over six decades, location within ten spreads of zero
    scale = 10.0 ** rng.uniform(*LOG10_STD_RANGE)
    loc = scale * rng.uniform(-10.0, 10.0)
    return loc + scale * draw(rng, distribution, n), scale


def _standardized_draw(rng, distribution, n):
    x = draw(rng, distribution, n)
    std = x.std()
    if std == 0.0:
        return None
    return (x - x.mean()) / std


def _rel(a, b):
    return abs(a - b) / abs(b)


def oracle_loo_means(targets):
    """Leave-one-out means by literal re-summation, O(n²).

    Independent of :func:`loocv_r2.core.loo_means`, which uses the
    total-sum identity.
    """
    return kernels.brute_loo_means(core.as_targets(targets))


def verify_c_equals_alpha_b(config):
    """Check ``C == alpha * B`` with both sums from the brute-force oracle.

    Also records how far the O(n) leave-one-out means drift from the O(n²)
    ones, relative to the largest target magnitude.
    """
    worst, oracle, run, skipped = _Worst(), _Worst(), 0, 0
    for n in config.n_values:
        rng = config.rng("c_alpha_b", n)
        for _ in range(config.trials):
            y, _scale = _scaled_draw(rng, config.distribution, n)
            terms = core.decomposition_terms(y, y)
            if terms.c == 0.0:
                skipped += 1
                continue
            worst.update(abs(terms.c - terms.alpha * terms.b) / terms.c)
            gap = np.max(np.abs(oracle_loo_means(y) - core.loo_means(y)))
            oracle.update(gap / np.max(np.abs(y)))
            run += 1
    return VerificationReport(
        max_rel_c_alpha_b_gap=worst.value,
        max_rel_oracle_gap=oracle.value,
        trials_run=run,
        skipped=skipped,
    )


def verify_adjustment_identity(config):
    """Check ``adjust_r2(r2_standard) == r2_cv_direct`` on random predictions.

    Predictions are the targets plus noise whose size ranges from 1e-3 to 10
    times the target spread, so scores run from near 1 to far below 0.
    """
    worst, run, skipped = _Worst(), 0, 0
    for n in config.n_values:
        rng = config.rng("identity", n)
        for _ in range(config.trials):
            y, scale = _scaled_draw(rng, config.distribution, n)
            noise = scale * 10.0 ** rng.uniform(-3.0, 1.0)
            p = y + noise * draw(rng, config.distribution, n)
            try:
                adjusted = core.adjust_r2(core.r2_standard(y, p), n)
                direct = core.r2_cv_direct(y, p)
            except core.ZeroVarianceTargets:
                skipped += 1
                continue
            worst.update(abs(adjusted - direct) / max(1.0, abs(direct)))
            run += 1
    return VerificationReport(max_abs_identity_gap=worst.value, trials_run=run, skipped=skipped)


def verify_variance_independence(config):
    """Check that the naive score depends on ``n`` only, across target scales."""
    worst, run, skipped = _Worst(), 0, 0
    for n in config.n_values:
        rng = config.rng("variance", n)
        closed = core.r2_naive_closed_form(n)
        for _ in range(config.trials):
            std = 10.0 ** rng.uniform(*LOG10_STD_RANGE)
            y = std * draw(rng, config.distribution, n)
            try:
                empirical = core.r2_naive_empirical(y)
            except core.ZeroVarianceTargets:
                skipped += 1
                continue
            worst.update(_rel(empirical, closed))
            run += 1
    return VerificationReport(max_rel_naive_gap=worst.value, trials_run=run, skipped=skipped)


def verify_translation_invariance(config):
    """Shift targets (and predictions) by ``c`` in [-1e6, 1e6].

    ``B`` and ``C`` must not move under a target shift, ``A`` must not move
    when targets and predictions shift together. Targets and residuals are
    both standardized: with unit spread the shifted values keep about ten
    significant digits, enough to resolve a 1e-9 relative change.
    """
    worst, run, skipped = _Worst(), 0, 0
    for n in config.n_values:
        rng = config.rng("translation", n)
        for _ in range(config.trials):
            y = _standardized_draw(rng, config.distribution, n)
            residual = _standardized_draw(rng, config.distribution, n)
            shift = rng.uniform(-MAX_SHIFT, MAX_SHIFT)
            if y is None or residual is None:
                skipped += 1
                continue
            p = y + residual
            before = core.decomposition_terms(y, p)
            after = core.decomposition_terms(y + shift, p + shift)
            for x0, x1 in ((before.a, after.a), (before.b, after.b), (before.c, after.c)):
                worst.update(_rel(x1, x0))
            run += 1
    return VerificationReport(max_rel_translation_gap=worst.value, trials_run=run, skipped=skipped)


CHECKS = (
    verify_c_equals_alpha_b,
    verify_adjustment_identity,
    verify_variance_independence,
    verify_translation_invariance,
)


def verify_all(trials=1000, seed=42, n_values=DEFAULT_N_VALUES, distributions=DISTRIBUTIONS):
    """Run every check for every distribution and merge the reports."""
    report = VerificationReport()
    for distribution in distributions:
        config = ExperimentConfig(
            n_values=n_values, trials=trials, seed=seed, distribution=distribution
        )
        for check in CHECKS:
            report = report.merge(check(config))
    return report
