import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cmgen
from benford_laplace import (
    CmRuleError,
    DigitSpec,
    DomainError,
    NumericError,
    Normal,
    benford_term,
    build,
    cm_catalog,
    delta_extrema,
    digit_prob_oracle,
    normalize,
    numeric_cm_check,
    transform_pdf,
)
from benford_laplace import cm

GRID = np.logspace(-2, 2, 50)


class TestBuild:
    def test_product_rule(self):
        expr = cm.product(cm.leaf_exp(1.0), cm.leaf_power(1.0, 1.0, 2.0))
        assert expr.certified
        assert expr(2.0) == pytest.approx(math.exp(-2) / 9)

    def test_exp_rule(self):
        expr = cm.exp_of(cm.leaf_power(1.0, 1.0, 1.0))
        assert expr.certified
        assert expr(1.0) == pytest.approx(math.exp(0.5))

    def test_negative_power_rejected(self):
        with pytest.raises(CmRuleError) as info:
            cm.leaf_power(1.0, 1.0, -1.0)
        assert info.value.rule == "leaf-power"

    @pytest.mark.parametrize("desc, rule", [
        ({"node": "leaf-exp", "params": {"a": -1}}, "leaf-exp"),
        ({"node": "leaf-log", "params": {"a": 0.5, "c": 1}}, "leaf-log"),
        ({"node": "leaf-power", "params": {"a": 0, "c": 0, "alpha": 1}}, "leaf-power"),
        ({"node": "combinator-linear", "params": {"a": -1, "c": 1},
          "children": [{"node": "leaf-exp", "params": {"a": 1}}] * 2}, "linear"),
        ({"node": "bernstein-power", "params": {"alpha": 0.5}}, "compose"),
        ({"node": "combinator-compose", "children": [{"node": "leaf-exp", "params": {"a": 1}},
                                                     {"node": "leaf-exp", "params": {"a": 1}}]}, "bernstein"),
        ({"node": "combinator-compose", "children": [{"node": "leaf-exp", "params": {"a": 1}},
                                                     {"node": "bernstein-power", "params": {"alpha": 2}}]}, "bernstein"),
        ({"node": "leaf-exp"}, "schema"),
        ({"node": "leaf-exp", "params": {"a": 1, "b": 2}}, "schema"),
        ({"node": "leaf-exp", "params": {"a": "1"}}, "schema"),
        ({"node": "leaf-exp", "params": {"a": float("nan")}}, "schema"),
        ({"node": "combinator-exp"}, "schema"),
        ({"node": "mystery"}, "schema"),
        ([1, 2], "schema"),
    ])
    def test_rejections_name_the_rule(self, desc, rule):
        with pytest.raises(CmRuleError) as info:
            build(desc)
        assert info.value.rule == rule
        assert isinstance(info.value, DomainError)

    def test_json_roundtrip(self):
        expr = cm.catalog_expr("exp-log-power", a=2.0, c=1.5, alpha=1.0)
        text = expr.to_json()
        again = build(text)
        assert again == expr
        assert json.loads(text)["node"] == "combinator-compose"
        assert build(json.loads(text))(3.0) == pytest.approx(expr(3.0))


class TestEvaluate:
    def test_leaf_exp(self):
        assert cm.leaf_exp(1.0)(0.7) == pytest.approx(math.exp(-0.7), rel=1e-15)

    def test_linear_near_zero(self):
        expr = cm.linear(1.0, cm.leaf_exp(1.0), 1.0, cm.leaf_exp(2.0))
        assert expr(1e-12) == pytest.approx(2.0, abs=1e-11)

    def test_catalog_power_exp(self):
        expr = cm.catalog_expr("power-exp", a=0.5, alpha=1.0, nu=0.5)
        assert expr(1.0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_overflow_is_numeric_error(self):
        expr = cm.exp_of(cm.leaf_power(0.0, 1.0, 1.0))
        with pytest.raises(NumericError) as info:
            expr(1e-320)
        assert info.value.abscissa == 1e-320

    def test_domain(self):
        with pytest.raises(DomainError):
            cm.leaf_exp(1.0)(0.0)

    def test_vectorized(self):
        out = cm.leaf_exp(2.0)(np.array([1.0, 2.0]))
        assert out.shape == (2,)


class TestNumericCheck:
    def test_exponential_passes(self):
        assert numeric_cm_check(lambda x: math.exp(-x), n_max=6)

    def test_x_exp_fails_on_the_slope(self):
        verdict = numeric_cm_check(lambda x: x * math.exp(-x), n_max=2)
        assert not verdict and verdict.order == 1 and verdict.x < 1
        assert str(verdict).startswith("fail(n=1")

    def test_transformed_normal_passes(self):
        pdf = transform_pdf(Normal(0.0, 1.0), "shifted-square")
        assert numeric_cm_check(pdf.pdf, n_max=6)

    def test_non_finite(self):
        with pytest.raises(NumericError):
            numeric_cm_check(lambda x: math.inf)

    def test_bad_order(self):
        with pytest.raises(DomainError):
            numeric_cm_check(lambda x: 1.0, n_max=9)

    def test_certification_soundness(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            expr = cmgen.integrable_expr(rng)
            verdict = numeric_cm_check(expr, n_max=6, grid=GRID, tol=1e-6)
            assert verdict, (expr.to_json(), str(verdict))


class TestNormalize:
    def test_unit_mass(self):
        pdf = normalize(cm.leaf_power(1.0, 1.0, 2.0))
        assert pdf.raw_integral == pytest.approx(1.0, abs=1e-10)
        assert pdf.normalization == pytest.approx(1.0, abs=1e-10)

    def test_exponential(self):
        assert normalize(cm.leaf_exp(1.0)).normalization == pytest.approx(1.0, abs=1e-10)
        assert normalize(cm.leaf_exp(4.0)).normalization == pytest.approx(4.0, rel=1e-10)

    def test_divergent(self):
        with pytest.raises(DomainError, match="diverge|integrate"):
            normalize(cm.leaf_power(1.0, 1.0, 1.0))

    def test_accepts_description(self):
        pdf = normalize({"node": "leaf-exp", "params": {"a": 2.0}})
        assert pdf.cdf(1.0) == pytest.approx(1 - math.exp(-2.0), abs=1e-10)


class TestCatalog:
    @pytest.mark.parametrize("form", sorted(cm.CATALOG_FORMS))
    def test_forms_build_from_closure_rules(self, form):
        rng = np.random.default_rng(len(form))
        for _ in range(10):
            assert cm.catalog_expr(form, **cmgen.catalog_params(rng, form)).certified

    @pytest.mark.parametrize("form, params", [
        ("exp-power", dict(a=1.0, c=0.0, alpha=1.5)),
        ("expm1-power", dict(a=1.0, c=1.0, alpha=0.5)),
        ("inverse-power", dict(c=1.0, alpha=1.0)),
        ("power-exp", dict(a=1.0, alpha=1.0, nu=1.0)),
        ("exp-log-power", dict(a=1.0, c=0.5, alpha=1.0)),
    ])
    def test_out_of_range(self, form, params):
        with pytest.raises(CmRuleError, match=f"catalog:{form}"):
            cm.catalog_expr(form, **params)

    def test_unknown_form_and_params(self):
        with pytest.raises(DomainError):
            cm.catalog_expr("gamma", a=1.0)
        with pytest.raises(DomainError):
            cm.catalog_expr("inverse-power", c=1.0)

    def test_expm1_form_value(self):
        expr = cm.catalog_expr("expm1-power", a=2.0, c=1.0, alpha=-2.0)
        x = 1.7
        assert expr(x) == pytest.approx(math.expm1(2.0 * (x + 1.0) ** -2.0), rel=1e-13)

    def test_exp_log_power_value(self):
        expr = cm.catalog_expr("exp-log-power", a=2.0, c=1.5, alpha=1.0)
        assert expr(3.0) == pytest.approx(4.5**-2.0, rel=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_catalog_containment(self, seed):
        name, params = cmgen.catalog_member(np.random.default_rng(seed))
        pdf = cm_catalog(name, **params)
        for d in (1, 9):
            spec = DigitSpec(10, d, 1)
            lo, hi = delta_extrema(spec)
            assert lo <= digit_prob_oracle(pdf, spec) - benford_term(spec) <= hi


def test_composed_containment_within_amplitude():
    pdfs = cmgen.random_pdfs(seed=5, count=20)
    spec = DigitSpec()
    for pdf in pdfs:
        assert abs(digit_prob_oracle(pdf, spec) - benford_term(spec)) <= 0.0298
