import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from enhorder import DomainError
from enhorder.dist import (
    Baseline,
    ENHParams,
    ESSpec,
    HazardShape,
    classify_hazard_shape,
    enh_cdf,
    enh_hazard,
    enh_pdf,
    enh_quantile,
    es_cdf,
    exponential,
    ge,
    nh,
    prob_grid,
)

shape = st.floats(0.2, 5.0)
scale = st.floats(0.2, 5.0)
probs = st.floats(1e-6, 1 - 1e-6)


def _dps(x):
    # enough digits that 1 + lam*x keeps its small part for tiny x
    return 50 + (int(-math.log10(x)) if 0 < x < 1 else 0)


def mp_cdf(a, l, b, x):
    """High-precision oracle for the ENH CDF, straight from the closed form."""
    with mpmath.workdps(_dps(x)):
        a, l, b, x = map(mpmath.mpf, (a, l, b, x))
        return float((1 - mpmath.exp(1 - (1 + l * x) ** a)) ** b)


def mp_pdf(a, l, b, x):
    with mpmath.workdps(_dps(x)):
        a, l, b, x = map(mpmath.mpf, (a, l, b, x))
        z = 1 - (1 + l * x) ** a
        return float(a * b * l * (1 + l * x) ** (a - 1) * mpmath.exp(z) * (1 - mpmath.exp(z)) ** (b - 1))


# --- documented values ----------------------------------------------------

@pytest.mark.parametrize(
    "params, x, expected",
    [
        ((1, 1, 1), math.log(2), 0.5),
        ((2, 1, 1), 1.0, 1 - math.exp(-3)),
        ((0.5, 1, 2), 3.0, (1 - math.exp(-1)) ** 2),
    ],
)
def test_cdf_values(params, x, expected):
    assert enh_cdf(ENHParams(*params), x) == pytest.approx(expected, rel=1e-14)


def test_cdf_spot_decimals():
    assert enh_cdf(ENHParams(2, 1, 1), 1.0) == pytest.approx(0.9502129, abs=5e-8)
    assert enh_cdf(ENHParams(0.5, 1, 2), 3.0) == pytest.approx(0.3995764, abs=5e-8)


def test_pdf_values():
    assert enh_pdf(ENHParams(1, 1, 1), 0.0) == pytest.approx(1.0, rel=1e-15)
    assert enh_pdf(ENHParams(2, 1, 1), 1.0) == pytest.approx(4 * math.exp(-3), rel=1e-14)
    assert enh_pdf(ENHParams(2, 1, 1), 1.0) == pytest.approx(0.1991483, abs=5e-8)


def test_pdf_diverges_at_zero_for_small_beta():
    assert enh_pdf(ENHParams(1.5, 2.0, 0.5), 0.0) == math.inf
    assert enh_hazard(ENHParams(1.5, 2.0, 0.5), 0.0) == math.inf


@pytest.mark.parametrize("params", [(1, 1, 1), (2, 1, 1), (0.5, 1, 2), (0.3, 2, 0.7), (3, 0.5, 4)])
def test_pdf_integrates_to_one(params):
    p = ENHParams(*params)
    total, err = quad(lambda x: float(p.pdf(x)), 0, np.inf, limit=400)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_quantile_values():
    assert enh_quantile(ENHParams(1, 1, 1), 0.5) == pytest.approx(math.log(2), rel=1e-15)
    assert enh_quantile(ENHParams(0.5, 1, 2), (1 - math.exp(-1)) ** 2) == pytest.approx(3.0, rel=1e-13)
    assert enh_quantile(ENHParams(0.5, 1, 2), 0.3995764) == pytest.approx(3.0, abs=1e-5)


def test_hazard_values():
    x = np.linspace(0.1, 10, 25)
    assert np.allclose(enh_hazard(ENHParams(1, 1, 1), x), 1.0, rtol=1e-12)
    assert np.allclose(enh_hazard(ENHParams(1, 2, 1), x), 2.0, rtol=1e-12)
    assert enh_hazard(ENHParams(2, 1, 1), 1.0) == pytest.approx(4.0, rel=1e-13)


def test_hazard_far_tail_is_finite():
    # survival ~ e^-(1e4); the log-domain ratio stays finite (NH hazard a*l*(1+lx)^(a-1))
    p = ENHParams(2, 1, 1)
    assert enh_hazard(p, 100.0) == pytest.approx(2 * 101.0, rel=1e-10)


@pytest.mark.parametrize(
    "params, expected",
    [
        ((1, 1, 1), HazardShape.CONSTANT),
        ((2, 1, 1), HazardShape.INCREASING),
        ((0.5, 1, 0.5), HazardShape.DECREASING),
        ((0.5, 1, 2), HazardShape.UNIMODAL),
        ((2, 1, 0.5), HazardShape.BATHTUB),
    ],
)
def test_hazard_shapes(params, expected):
    assert classify_hazard_shape(ENHParams(*params)) is expected


def test_hazard_shape_brute_force_agreement():
    # oracle: sign changes of a finite-difference hazard derivative on a dense x grid
    for params in [(2, 1, 1), (0.5, 1, 0.5), (0.5, 1, 2), (2, 1, 0.5)]:
        p = ENHParams(*params)
        x = np.asarray(p.quantile(np.linspace(1e-4, 1 - 1e-4, 4000)))
        h = np.array([mp_pdf(*params, xi) / (1 - mp_cdf(*params, xi)) for xi in x[::20]])
        s = np.sign(np.diff(h))
        changes = int(np.count_nonzero(np.diff(s[s != 0])))
        label = classify_hazard_shape(p)
        assert changes == {HazardShape.INCREASING: 0, HazardShape.DECREASING: 0,
                           HazardShape.UNIMODAL: 1, HazardShape.BATHTUB: 1}[label]


def test_classifier_needs_64_points():
    with pytest.raises(DomainError):
        classify_hazard_shape(ENHParams(1, 1, 1), np.linspace(0.1, 0.9, 10))


def test_es_cdf_values():
    assert es_cdf(ESSpec(1, 1, Baseline("exponential")), math.log(2)) == pytest.approx(0.5, rel=1e-15)
    assert es_cdf(ESSpec(2, 1, Baseline("nh", 1.0)), 1.0) == pytest.approx((1 - math.exp(-1)) ** 2, rel=1e-14)


def test_es_matches_enh_on_random_points():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a0, lam, beta = rng.uniform(0.2, 4, 3)
        x = rng.uniform(0, 5)
        assert es_cdf(ESSpec(beta, lam, Baseline("nh", a0)), x) == pytest.approx(
            enh_cdf(ENHParams(a0, lam, beta), x), rel=1e-12, abs=1e-300)


def test_as_es_roundtrip():
    p = ENHParams(0.7, 1.3, 2.2)
    x = np.linspace(0, 5, 40)
    assert np.allclose(p.as_es().cdf(x), p.cdf(x), rtol=1e-12, atol=0)


# --- validation -----------------------------------------------------------

@pytest.mark.parametrize("args, field", [((-1, 1, 1), "alpha"), ((1, 0, 1), "lambda"), ((1, 1, math.nan), "beta")])
def test_invalid_params_name_field(args, field):
    with pytest.raises(DomainError) as exc:
        ENHParams(*args)
    assert exc.value.field == field


def test_domain_errors():
    p = ENHParams(1, 1, 1)
    with pytest.raises(DomainError):
        p.cdf(-0.1)
    for u in (0.0, 1.0, 1.5):
        with pytest.raises(DomainError):
            p.quantile(u)


def test_exponential_baseline_has_no_shape():
    with pytest.raises(DomainError):
        Baseline("exponential", 2.0)


# --- properties against independent oracles --------------------------------

@settings(max_examples=150, deadline=None)
@given(shape, scale, shape, st.floats(0.0, 20.0))
def test_cdf_matches_high_precision(a, l, b, x):
    got = float(enh_cdf(ENHParams(a, l, b), x))
    want = mp_cdf(a, l, b, x)
    assert got == pytest.approx(want, rel=1e-11, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(shape, scale, shape, probs)
def test_quantile_roundtrip(a, l, b, u):
    p = ENHParams(a, l, b)
    assert float(p.cdf(p.quantile(u))) == pytest.approx(u, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(shape, scale, shape, st.floats(0.01, 0.99))
def test_pdf_is_cdf_derivative(a, l, b, u):
    p = ENHParams(a, l, b)
    x = float(p.quantile(u))
    # relative step: the density is singular at 0 when beta < 1, so a step
    # that is large next to x measures curvature instead of slope
    h = 1e-6 * x
    fd = (mp_cdf(a, l, b, x + h) - mp_cdf(a, l, b, x - h)) / (2 * h)
    assert float(p.pdf(x)) == pytest.approx(fd, rel=1e-5)


@settings(max_examples=100, deadline=None)
@given(shape, scale, shape, st.floats(0.01, 0.99))
def test_hazard_times_survival_is_density(a, l, b, u):
    p = ENHParams(a, l, b)
    x = p.quantile(u)
    assert float(p.hazard(x) * p.sf(x)) == pytest.approx(float(p.pdf(x)), rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(shape, scale, shape)
def test_cdf_monotone_from_zero(a, l, b):
    p = ENHParams(a, l, b)
    x = np.concatenate([[0.0], np.geomspace(1e-8, 1e3, 300)])
    F = p.cdf(x)
    assert F[0] == 0.0
    assert np.all(np.diff(F) >= 0)


def test_reductions_pointwise():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, lam, b = rng.uniform(0.2, 4, 3)
        x = np.asarray(ENHParams(a, lam, b).quantile(prob_grid()))
        nh_ref = -np.expm1(1 - (1 + lam * x) ** a)
        ge_ref = (-np.expm1(-lam * x)) ** b
        exp_ref = -np.expm1(-lam * x)
        assert np.max(np.abs(nh(a, lam).cdf(x) - nh_ref)) <= 1e-12
        assert np.max(np.abs(ge(lam, b).cdf(x) - ge_ref)) <= 1e-12
        assert np.max(np.abs(exponential(lam).cdf(x) - exp_ref)) <= 1e-12


def test_extreme_beta_is_stable():
    # large beta pushes mass right; log-domain evaluation keeps the quantile exact
    p = ENHParams(1.0, 1.0, 5000.0)
    x = p.quantile(0.5)
    assert float(p.cdf(x)) == pytest.approx(0.5, rel=1e-12)
    assert x == pytest.approx(-math.log(-math.expm1(math.log(0.5) / 5000.0)), rel=1e-12)


def test_scalar_in_scalar_out():
    p = ENHParams(1, 1, 1)
    assert isinstance(p.cdf(1.0), float)
    assert isinstance(p.quantile(0.3), float)
    assert p.cdf([1.0, 2.0]).shape == (2,)


@pytest.mark.parametrize("params", [(2, 1, 1), (0.5, 1, 2), (1, 1, 3), (0.3, 2, 5000), (2, 1, 0.5)])
def test_log_survival_deep_tail(params):
    a, l, b = params
    p = ENHParams(*params)
    for x in (0.5, 5.0, 30.0, 100.0, 1e3):
        with mpmath.workdps(60):
            # 1 - (1 - e^z)^b written with expm1/log1p so e^z ~ e^-1e6 is not lost
            t = mpmath.exp(1 - (1 + mpmath.mpf(l) * x) ** a)
            ref = float(mpmath.log(-mpmath.expm1(b * mpmath.log1p(-t))))
        assert float(p.logsf(x)) == pytest.approx(ref, rel=1e-12)
