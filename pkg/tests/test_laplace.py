import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benford_laplace import (
    AccuracyWarning,
    DigitSpec,
    DomainError,
    Exponential,
    LogNormal,
    LogUniform,
    NumericError,
    UniformFromOne,
    benford_term,
    cm_catalog,
    delta_extrema,
    delta_tilde,
    digit_prob_oracle,
    error_bound,
    f_tilde_profile,
    invert,
    l1_norm,
    route_difference,
    scale_pdf,
    stehfest_weights,
    total_error,
)
from benford_laplace.laplace import StehfestWeights

T = np.geomspace(0.1, 10.0, 50)


def quiet(func, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        return func(*args, **kwargs)


class TestWeights:
    def test_small_orders(self):
        assert list(stehfest_weights(2).weights) == [2.0, -2.0]
        assert list(stehfest_weights(4).weights) == [-2.0, 26.0, -48.0, 24.0]

    @pytest.mark.parametrize("order", range(2, 21, 2))
    def test_identities(self, order):
        w = stehfest_weights(order)
        assert sum(w.exact) == 0
        assert sum(Fraction(v) / k for k, v in enumerate(w.exact, 1)) == 1
        assert all(float(e) == f for e, f in zip(w.exact, w.weights))

    @pytest.mark.parametrize("order", [0, 3, 22, 2.5, True])
    def test_bad_order(self, order):
        with pytest.raises(DomainError):
            stehfest_weights(order)

    def test_construction_rejects_broken_weights(self):
        with pytest.raises(DomainError):
            StehfestWeights(2, np.array([2.0, -1.0]))
        with pytest.raises(DomainError):
            StehfestWeights(2, np.array([2.0, -2.0]), (Fraction(2), Fraction(-1)))


class TestInvert:
    def test_constant_is_exact_at_order_two(self):
        assert invert(lambda s: 1 / s, 3.7, stehfest_weights(2)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("order", range(4, 15, 2))
    def test_linear_error_is_the_weight_moment(self, order):
        # for 1/s^2 the estimate is t / ln 2 * sum V_k / k^2, and that moment is only near ln 2
        w = stehfest_weights(order)
        moment = float(sum(v / k**2 for k, v in enumerate(w.exact, 1)))
        got = invert(lambda s: 1 / s**2, 2.0, w)
        assert got - 2.0 == pytest.approx(2.0 / math.log(2) * (moment - math.log(2)), rel=1e-2)

    @pytest.mark.parametrize("order", [14, 16])
    def test_linear_within_micro(self, order):
        assert invert(lambda s: 1 / s**2, 2.0, stehfest_weights(order)) == pytest.approx(2.0, abs=1e-6)

    def test_shifted_pole_example(self):
        assert invert(lambda s: 1 / (s + 1), 1.0, stehfest_weights(12)) == pytest.approx(math.exp(-1), abs=1e-4)

    @pytest.mark.parametrize("name, transform, exact", [
        ("1/s", lambda s: 1 / s, lambda t: np.ones_like(t)),
        ("1/s^2", lambda s: 1 / s**2, lambda t: t),
    ])
    def test_polynomial_corpus_relative(self, name, transform, exact):
        rel = np.abs(invert(transform, T, 12) - exact(T)) / exact(T)
        assert rel.max() <= 1e-4, name

    @pytest.mark.parametrize("a", [0.5, 1.0, 4.0])
    def test_shifted_pole_absolute_floor(self, a):
        # relative accuracy is lost where exp(-a t) underflows the absolute floor
        err = np.abs(invert(lambda s: 1 / (s + a), T, 12) - np.exp(-a * T))
        assert err.max() <= 2e-4

    def test_scalar_callable_fallback(self):
        assert invert(lambda s: 1.0 / float(s), 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_non_finite_carries_abscissa(self):
        with pytest.raises(NumericError) as info:
            invert(lambda s: np.where(s > 5, np.inf, 1 / s), 0.5)
        assert info.value.abscissa > 5

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_bad_t(self, t):
        with pytest.raises(DomainError):
            invert(lambda s: 1 / s, t)


class TestProfiles:
    def test_exponential_is_a_point_mass(self):
        prof = f_tilde_profile(Exponential(3.0))
        assert prof.method == "analytic-delta"
        assert prof.location == pytest.approx(math.log(3.0))
        assert l1_norm(prof).value == 1.0

    def test_lognormal_norm(self):
        assert quiet(l1_norm, f_tilde_profile(LogNormal(5, 1))).value == pytest.approx(1.610, abs=0.05)

    def test_oscillation_grows_as_sigma_shrinks(self):
        window = dict(s_min=-25.0, s_max=15.0, points=8001)
        wide = f_tilde_profile(LogNormal(5, 1.0), **window)
        narrow = f_tilde_profile(LogNormal(5, 0.3), **window)
        assert np.any(wide.spectrum.values < 0)
        assert np.abs(narrow.spectrum.values).max() > np.abs(wide.spectrum.values).max()

    @pytest.mark.parametrize("pdf", [LogUniform(1), LogUniform(3), cm_catalog("exp-power", a=1.0, c=0.0, alpha=0.5),
                                     cm_catalog("inverse-power", c=1.0, alpha=2.0)], ids=lambda p: p.describe())
    def test_unit_norm(self, pdf):
        assert quiet(l1_norm, f_tilde_profile(pdf)).value == pytest.approx(1.0, abs=0.02)

    @pytest.mark.parametrize("pdf", [LogNormal(1.0, 1.0), LogNormal(-2.0, 0.7),
                                     cm_catalog("power-exp", a=1.0, alpha=1.0, nu=0.5)], ids=lambda p: p.describe())
    @pytest.mark.parametrize("a", [0.2, 3.0, 50.0])
    def test_horizontal_shift(self, pdf, a):
        window = dict(s_min=-20.0, s_max=15.0, points=7001)
        base = f_tilde_profile(pdf, **window)
        moved = f_tilde_profile(scale_pdf(pdf, a), **window)
        s = moved.spectrum.s
        inside = (s > base.spectrum.s_min - math.log(a)) & (s < base.spectrum.s_max - math.log(a))
        diff = moved.spectrum.values - base.shifted(math.log(a)).spectrum.at(s)
        assert np.abs(diff[inside]).max() <= 1e-4

    def test_uniform_is_flagged_smoothed(self):
        prof = f_tilde_profile(UniformFromOne(10))
        assert prof.smoothed and "logistic" in prof.note

    def test_csv_export(self, tmp_path):
        path = tmp_path / "profile.csv"
        f_tilde_profile(LogNormal(5, 1), points=200).to_csv(path)
        rows = path.read_text().splitlines()
        assert rows[0] == "s,f_tilde" and len(rows) == 201
        delta = tmp_path / "delta.csv"
        f_tilde_profile(Exponential(2.0)).to_csv(delta)
        assert "point mass" in delta.read_text()

    def test_bad_window(self):
        with pytest.raises(DomainError):
            f_tilde_profile(LogNormal(0, 1), s_min=1.0, s_max=0.0)
        with pytest.raises(DomainError):
            f_tilde_profile(LogNormal(0, 1), s_min=0.0, s_max=1.0, points=4)

    def test_coarse_grid_warns(self):
        prof = f_tilde_profile(LogNormal(5, 0.3), s_min=-20.0, s_max=10.0, points=40)
        with pytest.warns(AccuracyWarning):
            res = l1_norm(prof)
        assert res.warning


class TestBounds:
    def test_exponential(self):
        for rate in (0.01, 1.0, 250.0):
            bound = error_bound(Exponential(rate), DigitSpec())
            assert -0.03 < bound.lo and bound.hi < 0.03

    def test_lognormal(self):
        bound = quiet(error_bound, LogNormal(5, 1), DigitSpec())
        assert -0.05 < bound.lo < -0.045 and 0.045 < bound.hi < 0.05
        dev = digit_prob_oracle(LogNormal(5, 1), DigitSpec()) - benford_term(DigitSpec())
        assert dev in bound

    def test_cm_digit_nine(self):
        lo, hi = delta_extrema(DigitSpec(10, 9, 1))
        bound = error_bound(cm_catalog("inverse-power", c=1.0, alpha=3.0), DigitSpec(10, 9, 1))
        assert (bound.lo, bound.hi) == (lo, hi)
        assert max(-lo, hi) == pytest.approx(0.0053, abs=5e-5)

    @settings(max_examples=50, deadline=None)
    @given(a=st.floats(0.05, 5.0), c=st.floats(0.0, 3.0), alpha=st.floats(0.3, 1.0))
    def test_catalog_containment(self, a, c, alpha):
        pdf = cm_catalog("exp-power", a=a, c=c, alpha=alpha)
        spec = DigitSpec()
        assert digit_prob_oracle(pdf, spec) - benford_term(spec) in error_bound(pdf, spec)


class TestErrorTerm:
    def test_exponential_sifting(self):
        term = total_error(Exponential(1.0), DigitSpec())
        assert term.method == "analytic-delta"
        assert term.value == pytest.approx(delta_tilde(DigitSpec(), 0.0), abs=1e-15)
        assert abs(route_difference(Exponential(1.0), DigitSpec())) <= 1e-6

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("d", [1, 4, 9])
    def test_log_uniform_zero(self, m, d):
        spec = DigitSpec(10, d, 1)
        assert abs(total_error(LogUniform(m), spec).value) <= 1e-8
        assert abs(digit_prob_oracle(LogUniform(m), spec) - benford_term(spec)) <= 1e-8

    @pytest.mark.parametrize("pdf", [LogNormal(math.log(5), 1.0), LogNormal(5, 1), LogNormal(0.0, 0.5),
                                     cm_catalog("exp-power", a=1.0, c=0.5, alpha=0.7),
                                     cm_catalog("inverse-power", c=2.0, alpha=1.5)], ids=lambda p: p.describe())
    def test_route_equivalence(self, pdf):
        for d in (1, 5):
            assert abs(quiet(route_difference, pdf, DigitSpec(10, d, 1))) <= 0.005

    def test_narrow_lognormal_is_unstable(self):
        term = quiet(total_error, LogNormal(math.log(5), 0.3), DigitSpec())
        assert term.unstable and term.reason
