from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import exact_terms
from loocv_r2 import core
from loocv_r2.errors import LengthMismatch, NonFiniteInput, SeriesTooShort, ZeroVarianceTargets


def series(min_size=2, max_size=60, bound=1e3):
    return st.lists(
        st.floats(-bound, bound, allow_nan=False, allow_subnormal=False),
        min_size=min_size,
        max_size=max_size,
    )


def well_conditioned(y):
    # keeps the spread far above the rounding of the values themselves;
    # the identities below are exact, the tolerance budget is for rounding only
    y = np.asarray(y)
    return y.std() > 1e-3 * max(1.0, np.abs(y).max())


def rel_gap(a, b):
    return abs(a - b) / max(1.0, abs(b))


# ---------------------------------------------------------------------------
# loo_means
# ---------------------------------------------------------------------------

def test_loo_means_worked_example():
    assert core.loo_means([1, 2, 3]).tolist() == [2.5, 2.0, 1.5]


@pytest.mark.parametrize("c, n", [(5.0, 2), (-3.25, 7), (1e6, 40), (0.1, 3), (0.7, 11)])
def test_loo_means_constant(c, n):
    assert core.loo_means([c] * n).tolist() == [c] * n


def test_loo_means_errors():
    with pytest.raises(SeriesTooShort):
        core.loo_means([1.0])
    with pytest.raises(NonFiniteInput):
        core.loo_means([1.0, np.nan])
    with pytest.raises(NonFiniteInput):
        core.loo_means([1.0, np.inf, 2.0])


@given(series())
def test_loo_means_identity(y):
    y = np.array(y)
    n = y.shape[0]
    means = core.loo_means(y)
    total = float(sum(Fraction(v) for v in y))
    scale = max(1.0, np.abs(y).max()) * n
    np.testing.assert_allclose(means * (n - 1) + y, total, rtol=0, atol=1e-12 * scale)


# ---------------------------------------------------------------------------
# r2_standard / r2_cv_direct
# ---------------------------------------------------------------------------

def test_r2_standard_examples():
    y = [1.0, 2.0, 3.0]
    assert core.r2_standard(y, [2.0, 2.0, 2.0]) == 0.0
    assert core.r2_standard(y, y) == 1.0
    assert core.r2_standard(y, [2.5, 2.0, 1.5]) == -1.25


def test_r2_cv_direct_examples():
    y = np.array([1.0, 2.0, 3.0])
    assert core.r2_cv_direct(y, core.loo_means(y)) == 0.0
    assert core.r2_cv_direct(y, y) == 1.0
    assert core.r2_cv_direct(y, y + 1) == pytest.approx(1 / 3, rel=1e-15)


@pytest.mark.parametrize("fn", [core.r2_standard, core.r2_cv_direct])
def test_scores_reject_bad_input(fn):
    with pytest.raises(ZeroVarianceTargets):
        fn([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(LengthMismatch):
        fn([1.0, 2.0, 3.0], [1.0, 2.0])
    with pytest.raises(NonFiniteInput):
        fn([1.0, 2.0, 3.0], [1.0, np.nan, 2.0])
    with pytest.raises(SeriesTooShort):
        fn([1.0], [1.0])


@given(series())
def test_mean_prediction_scores_zero(y):
    y = np.array(y)
    assume(well_conditioned(y))
    assert abs(core.r2_standard(y, np.full_like(y, y.mean()))) <= 1e-12
    assert abs(core.r2_cv_direct(y, core.loo_means(y))) <= 1e-12


@given(series(), st.data())
def test_scores_are_at_most_one(y, data):
    y = np.array(y)
    assume(well_conditioned(y))
    p = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=len(y), max_size=len(y))))
    report = core.score_report(y, p)
    for name in ("r2_standard", "r2_cv_direct", "r2_cv_adjusted", "r2_naive_closed"):
        assert getattr(report, name) <= 1.0


@given(series(), st.data(), st.floats(0.01, 100.0), st.booleans())
def test_scale_invariance(y, data, s, negate):
    y = np.array(y)
    assume(well_conditioned(y))
    p = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=len(y), max_size=len(y))))
    s = -s if negate else s
    for fn in (core.r2_standard, core.r2_cv_direct):
        assert rel_gap(fn(y * s, p * s), fn(y, p)) <= 1e-9


# ---------------------------------------------------------------------------
# naive scores and the adjustment
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "n, expected",
    [(2, -3.0), (3, -1.25), (5, -0.5625), (10, -0.2345679012345679), (30, -0.07015457788347206)],
)
def test_naive_closed_form_values(n, expected):
    # expected values: 1 - n^2/(n-1)^2 in exact rationals, rounded once
    assert expected == float(1 - Fraction(n * n, (n - 1) ** 2))
    assert core.r2_naive_closed_form(n) == pytest.approx(expected, rel=1e-15, abs=0)


def test_naive_closed_form_at_two_is_exact():
    assert core.r2_naive_closed_form(2) == -3.0


def test_naive_closed_form_monotone_negative():
    values = [core.r2_naive_closed_form(n) for n in range(2, 5000)]
    assert all(v < 0 for v in values)
    assert all(a < b for a, b in zip(values, values[1:]))
    assert -1e-6 < core.r2_naive_closed_form(10**7) < 0


@pytest.mark.parametrize("n", [1, 0, -4])
def test_naive_closed_form_rejects_small_n(n):
    with pytest.raises(SeriesTooShort):
        core.r2_naive_closed_form(n)
    with pytest.raises(SeriesTooShort):
        core.adjust_r2(0.5, n)


def test_naive_empirical_examples():
    assert core.r2_naive_empirical([1.0, 2.0, 3.0]) == pytest.approx(-1.25, rel=1e-14)
    assert core.r2_naive_empirical([-7.3, 12.0]) == pytest.approx(-3.0, rel=1e-14)
    with pytest.raises(ZeroVarianceTargets):
        core.r2_naive_empirical([4.0, 4.0])


@given(series(), st.floats(1e-3, 1e3), st.booleans())
def test_naive_empirical_depends_on_n_only(y, s, negate):
    y = np.array(y)
    assume(well_conditioned(y))
    closed = core.r2_naive_closed_form(len(y))
    s = -s if negate else s
    assert core.r2_naive_empirical(y) == pytest.approx(closed, rel=1e-10)
    assert core.r2_naive_empirical(s * y) == pytest.approx(closed, rel=1e-10)


@pytest.mark.parametrize("n", [2, 3, 10, 1000])
def test_adjust_fixed_points(n):
    assert core.adjust_r2(1.0, n) == 1.0
    assert core.adjust_r2(core.r2_naive_closed_form(n), n) == 0.0


def test_adjust_naive_at_three():
    assert core.adjust_r2(-1.25, 3) == 0.0
    assert core.adjust_r2(-0.5, 3) == pytest.approx(1 / 3, rel=1e-15)


@settings(max_examples=300)
@given(series(max_size=500, bound=1e6), st.data())
def test_adjustment_identity(y, data):
    y = np.array(y)
    assume(well_conditioned(y))
    p = np.array(data.draw(st.lists(st.floats(-1e6, 1e6), min_size=len(y), max_size=len(y))))
    adjusted = core.adjust_r2(core.r2_standard(y, p), len(y))
    assert rel_gap(adjusted, core.r2_cv_direct(y, p)) <= 1e-9


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def test_decomposition_worked_example():
    t = core.decomposition_terms([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert (t.a, t.b, t.c, t.alpha) == (3.0, 2.0, 4.5, 2.25)


def test_decomposition_two_points():
    t = core.decomposition_terms([0.0, 1.0], [0.0, 1.0])
    assert (t.a, t.b, t.c, t.alpha) == (0.0, 0.5, 2.0, 4.0)


@pytest.mark.parametrize("c", [0.1, 0.7, -1e-300, 3e200])
def test_constant_targets_have_zero_variance(c):
    y = [c] * 7
    for fn in (core.r2_standard, core.r2_cv_direct):
        with pytest.raises(ZeroVarianceTargets):
            fn(y, np.arange(7.0))
    with pytest.raises(ZeroVarianceTargets):
        core.r2_naive_empirical(y)
    t = core.decomposition_terms(y, y)
    assert t.b == 0.0 and t.c == 0.0


def test_decomposition_constant_targets():
    t = core.decomposition_terms([0.0] * 4, [1.0, -2.0, 3.0, 0.5])
    assert t.b == 0.0 and t.c == 0.0
    assert t.a == pytest.approx(1 + 4 + 9 + 0.25)


def test_decomposition_errors():
    with pytest.raises(LengthMismatch):
        core.decomposition_terms([1.0, 2.0], [1.0])
    with pytest.raises(NonFiniteInput):
        core.decomposition_terms([1.0, np.inf], [1.0, 2.0])


@given(series(max_size=40), st.data())
def test_decomposition_matches_exact_arithmetic(y, data):
    p = data.draw(st.lists(st.floats(-1e3, 1e3), min_size=len(y), max_size=len(y)))
    t = core.decomposition_terms(y, p)
    a, b, c, alpha = exact_terms(y, p)
    assert t.alpha == float(alpha)
    for got, want in ((t.a, a), (t.b, b), (t.c, c)):
        assert got >= 0.0
        assert got == pytest.approx(float(want), rel=1e-12, abs=1e-300)


@given(series(max_size=200))
def test_c_equals_alpha_b(y):
    t = core.decomposition_terms(y, y)
    assume(t.b > 0)
    assert t.alpha > 1
    assert t.c == pytest.approx(t.alpha * t.b, rel=1e-10)


@given(series(max_size=50, bound=10.0), st.data(), st.floats(-1e6, 1e6))
def test_translation_invariance(y, data, shift):
    y = np.array(y)
    assume(y.std() > 0.5)
    r = np.array(data.draw(st.lists(st.floats(-10, 10), min_size=len(y), max_size=len(y))))
    assume(np.sqrt(np.mean(r * r)) > 0.5)
    p = y + r
    before = core.decomposition_terms(y, p)
    after = core.decomposition_terms(y + shift, p + shift)
    assert after.b == pytest.approx(before.b, rel=1e-9)
    assert after.c == pytest.approx(before.c, rel=1e-9)
    assert after.a == pytest.approx(before.a, rel=1e-9)


def test_score_report_fields():
    r = core.score_report([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert r.n == 3
    assert r.r2_standard == -0.5
    assert r.r2_cv_direct == pytest.approx(1 / 3, rel=1e-15)
    assert r.r2_cv_adjusted == pytest.approx(r.r2_cv_direct, rel=1e-9)
    assert r.r2_naive_closed == 1 - 9 / 4
    assert r.r2_naive_empirical == pytest.approx(r.r2_naive_closed, rel=1e-10)
    assert list(r.to_dict()) == [
        "r2_standard", "r2_cv_direct", "r2_cv_adjusted",
        "r2_naive_closed", "r2_naive_empirical", "n",
    ]
