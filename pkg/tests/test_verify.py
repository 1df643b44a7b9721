import math

import numpy as np
import pytest

from enhorder import DomainError
from enhorder.copula import INDEPENDENCE, clayton, gumbel
from enhorder.dist import Baseline
from enhorder.orders import ProbGrid
from enhorder.verify import (
    SCENARIOS,
    check_lemma_g_decreasing,
    check_schur_concave_numeric,
    counterexample_scan,
    fd_step,
    lemma_g,
    run_scenario,
    verify_max_convex_transform,
    verify_max_disp,
    verify_max_lr,
    verify_max_st_scale,
    verify_max_st_shape,
    verify_min_st_copula,
    verify_schur_lemma,
)
from enhorder.extremes import SampleSpec, max_cdf
from enhorder.dist import ENHParams

EXP = Baseline("exponential")


# --- single instances ---------------------------------------------------------

def test_max_st_shape_examples():
    assert verify_max_st_shape([0.5, 1.5], [1, 1.5], 1, 1).passed
    same = verify_max_st_shape([0.5, 1.5], [0.5, 1.5], 1, 1)
    assert same.passed and same.conclusion_verdict.worst_margin == 0.0
    assert verify_max_st_shape([0.5, 0.8], [1, 1], 1, 1).passed


def test_max_st_shape_rejects_unrelated_pair():
    r = verify_max_st_shape([1, 1], [0.5, 1.5], 1, 1)
    assert not r.hypotheses_ok and not r.passed and r.hypothesis_rejections == 1


def test_max_st_scale_examples():
    assert verify_max_st_scale([1, 3], [2, 3], 0.5, 1).passed
    same = verify_max_st_scale([1, 3], [1, 3], 0.5, 1)
    assert same.passed and same.conclusion_verdict.worst_margin == 0.0
    assert verify_max_st_scale([1, 2], [2, 2], 0.8, 1).passed
    assert not verify_max_st_scale([1, 3], [2, 3], 1.5, 1).hypotheses_ok


def test_max_lr_examples():
    assert verify_max_lr(1.3, 0.7, [1, 2], [0.5, 1]).passed
    equal = verify_max_lr(1.3, 0.7, [1, 2], [2, 1])
    assert equal.passed and equal.conclusion_verdict.worst_margin == 0.0
    # the converse: smaller beta sum, lr fails and the report says it is expected
    conv = verify_max_lr(1.3, 0.7, [0.5, 1], [1, 2])
    assert conv.passed
    assert not conv.conclusion_verdict.holds
    assert conv.conclusion_verdict.witness > 0


def test_max_disp_examples():
    assert verify_max_disp(0.8, 1, [0.3, 0.3], [0.2, 0.2]).passed
    same = verify_max_disp(0.8, 1, [0.3, 0.3], [0.3, 0.3])
    assert same.passed and abs(same.conclusion_verdict.worst_margin) <= 1e-12
    assert verify_max_disp(0.5, 1, [0.4, 0.4], [0.1, 0.2]).passed
    assert not verify_max_disp(0.5, 1, [0.6, 0.6], [0.1, 0.2]).hypotheses_ok
    assert not verify_max_disp(1.5, 1, [0.3, 0.3], [0.2, 0.2]).hypotheses_ok


def test_max_convex_examples():
    assert verify_max_convex_transform(0.5, 1, 1, 1, [1, 1], [0.5, 1.5]).passed
    same = verify_max_convex_transform(0.8, 0.8, 1.3, 1.3, [1, 1], [1, 1])
    assert same.passed and abs(same.conclusion_verdict.worst_margin) <= 1e-7
    assert verify_max_convex_transform(1, 2, 2, 1, [0.7, 1.3], [1, 1]).passed
    assert not verify_max_convex_transform(2, 1, 1, 1, [1, 1], [1, 1]).hypotheses_ok


def test_min_st_examples():
    assert verify_min_st_copula([1, 3], [2, 3], 1, EXP, INDEPENDENCE, gumbel(2)).passed
    same = verify_min_st_copula([1, 3], [1, 3], 1, EXP, clayton(2), clayton(2))
    assert same.passed and same.conclusion_verdict.worst_margin == 0.0
    enh = verify_min_st_copula([0.5, 2], [1, 2], 1, Baseline("nh", 0.7), gumbel(1.2), gumbel(2.4))
    assert enh.passed
    # psi_2 o phi_1 = t**(1/2) is not super-additive
    assert not verify_min_st_copula([1, 3], [2, 3], 1, EXP, gumbel(2), INDEPENDENCE).hypotheses_ok


def test_schur_lemma_instance():
    assert verify_schur_lemma([0.5, 1.5], [1, 1], 1, 1, 1.0).passed


# --- numeric lemmas ------------------------------------------------------------

def test_lemma_g_values():
    assert lemma_g(2.0) == pytest.approx(2 * math.exp(-1) / (1 - math.exp(-1)), rel=1e-15)
    assert lemma_g(2.0) == pytest.approx(1.163953, abs=1e-6)
    assert lemma_g(3.0) == pytest.approx(0.469553, abs=1e-6)
    assert 0 < lemma_g(25.0) < 1e-6


def test_lemma_g_decreasing():
    r = check_lemma_g_decreasing()
    assert r.holds and r.margin > 0
    with pytest.raises(DomainError):
        check_lemma_g_decreasing([0.5, 2.0, 3.0])
    with pytest.raises(DomainError):
        check_lemma_g_decreasing([3.0, 2.0])


def test_lemma_g_against_high_precision():
    import mpmath

    for x in (1.000001, 1.5, 2.0, 10.0, 40.0):
        with mpmath.workdps(40):
            X = mpmath.mpf(x)
            ref = float(X * mpmath.exp(1 - X) / (1 - mpmath.exp(1 - X)))
        assert lemma_g(x) == pytest.approx(ref, rel=1e-13)


def test_fd_step():
    assert fd_step(0.5) == 1e-5 and fd_step(-20.0) == pytest.approx(2e-4)


def test_schur_calibration():
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = rng.uniform(0.2, 3.0, int(rng.integers(2, 6)))
        assert check_schur_concave_numeric(lambda x: float(np.prod(x)), v).holds
        if np.ptp(v) > 1e-3:
            r = check_schur_concave_numeric(lambda x: float(np.sum(x ** 2)), v)
            assert not r.holds and len(r.witness) == 2


def test_schur_examples():
    f = lambda v: float(max_cdf(SampleSpec(tuple(ENHParams(a, 1, 1) for a in v)), 1.0))  # noqa: E731
    assert check_schur_concave_numeric(f, [0.5, 1.5]).holds
    sym = check_schur_concave_numeric(f, [1.2, 1.2, 1.2])
    assert sym.holds and sym.margin == pytest.approx(1e-8, abs=1e-15)
    with pytest.raises(DomainError):
        check_schur_concave_numeric(f, [1.0])


# --- harness --------------------------------------------------------------------

@pytest.mark.parametrize("theorem_id", sorted(SCENARIOS))
def test_every_scenario_passes_small_run(theorem_id):
    r = run_scenario(theorem_id, trials=8, seed=3, grid=ProbGrid.uniform(128))
    assert r.passed, [f.as_dict() for f in r.failures]
    assert r.hypothesis_rejections == 0


def test_run_scenario_deterministic():
    a = run_scenario("max_st_shape", trials=5, seed=11).as_dict()
    b = run_scenario("max_st_shape", trials=5, seed=11).as_dict()
    assert a == b


def test_run_scenario_explicit_params():
    r = run_scenario("max_lr", params={"alpha": 1, "lambda": 1, "betas": [1, 2], "betas_star": [0.5, 1]})
    assert r.passed and r.trials == 1


def test_run_scenario_unknown_id():
    with pytest.raises(DomainError):
        run_scenario("not_a_result")


def test_scan_lr_converse_finds_violations():
    v = counterexample_scan("max_lr", n_samples=40, seed=5, relation="none")
    assert v
    for viol in v:
        assert sum(viol.params["betas"]) < sum(viol.params["betas_star"])


def test_scan_inside_hypotheses_is_clean():
    assert counterexample_scan("max_st_shape", n_samples=20, seed=2, relation="w_super") == []
    assert counterexample_scan("min_st_copula", n_samples=10, seed=2, relation="w_super") == []


def test_scan_is_deterministic():
    a = [v.as_dict() for v in counterexample_scan("max_disp", {"beta_sum": [1, 3]}, 15, seed=9)]
    b = [v.as_dict() for v in counterexample_scan("max_disp", {"beta_sum": [1, 3]}, 15, seed=9)]
    assert a == b and a


def test_report_serialisation():
    d = run_scenario("max_st_scale", trials=3, seed=1).as_dict()
    assert set(d) == {"theorem_id", "passed", "hypotheses_ok", "trials", "hypothesis_rejections",
                      "conclusion_verdict", "failures"}
    assert d["conclusion_verdict"]["order"] == "st"
