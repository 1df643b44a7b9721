"""Randomised harness for the ordering results on extreme order statistics.

Each scenario draws parameter sets that satisfy a result's hypotheses,
checks the hypotheses with the predicates from :mod:`enhorder.majorize` and
:mod:`enhorder.copula`, and then tests the conclusion with the grid checkers
of :mod:`enhorder.orders`. Nothing here is a proof: a clean report says no
violation was found on the scanned grid for the drawn parameters.

Scenario ids
------------
``max_st_shape``                parallel systems, shapes weakly supermajorized -> st
``max_st_shape_componentwise``  parallel systems, shapes ordered componentwise -> st
``max_st_scale``                parallel systems, scales (weak supermaj. or componentwise), alpha <= 1 -> st
``max_lr``                      common alpha, lam: lr holds iff sum(beta) >= sum(beta*)
``max_disp``                    alpha < 1, sum(beta*) <= sum(beta) < 1 -> disp, plus DHR of the max
``max_convex``                  alpha1 <= alpha2, equal beta sums -> convex transform and Lorenz
``min_st_copula``               series systems, ES marginals, Archimedean copulas -> st
``min_st_prh``                  as above with unit scale (proportional reversed hazards)
``min_st_enh_copula``           as above with ENH marginals (NH baseline, beta as exponent)
``g_decreasing``                ``x e^(1-x) / (1 - e^(1-x))`` decreasing on ``(1, inf)``
``schur_lemma``                 max CDF in the shapes: increasing, Schur-concave, orders w-super pairs

Throughout, "``a`` dominates ``a*``" in the weak supermajorization sense is
``is_weak_supermajorized(a_star, a)``: the prefix sums of the sorted ``a*``
are at least those of ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._numeric import DomainError
from .copula import INDEPENDENCE, ArchGenerator, check_super_additive, clayton, gumbel
from .dist import Baseline, ENHParams, ESSpec
from .extremes import ParallelSystem, SampleSpec, SeriesSystem, max_cdf, max_density_ratio
from .majorize import is_weak_supermajorized, random_comparable_pair
from .orders import (
    TOL,
    OrderVerdict,
    ProbGrid,
    check_convex_transform,
    check_disp,
    check_lorenz,
    check_lr,
    check_st,
)

__all__ = [
    "SCENARIOS",
    "CheckResult",
    "Outcome",
    "ScenarioReport",
    "Violation",
    "lemma_g",
    "check_lemma_g_decreasing",
    "check_schur_concave_numeric",
    "fd_step",
    "verify_max_st_shape",
    "verify_max_st_scale",
    "verify_max_lr",
    "verify_max_disp",
    "verify_max_convex_transform",
    "verify_min_st_copula",
    "verify_schur_lemma",
    "run_scenario",
    "counterexample_scan",
]


@dataclass(frozen=True)
class CheckResult:
    """Verdict of a numeric check that is not a stochastic order."""

    holds: bool
    margin: float
    witness: Any = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {"holds": self.holds, "margin": self.margin, "witness": self.witness, "note": self.note}


@dataclass(frozen=True)
class Outcome:
    """One instance: were the hypotheses met, and did the conclusion come out as expected."""

    hypotheses_ok: bool
    verdict: OrderVerdict | CheckResult | None
    passed: bool
    expected: bool = True
    note: str = ""


@dataclass(frozen=True)
class Violation:
    trial: int
    seed: tuple[int, int]
    params: dict
    witness: Any
    margin: float
    note: str = ""

    def as_dict(self) -> dict:
        return {"trial": self.trial, "seed": list(self.seed), "params": self.params,
                "witness": self.witness, "margin": self.margin, "note": self.note}


@dataclass
class ScenarioReport:
    """Aggregate over trials; ``failures`` is empty iff every conclusion held."""

    theorem_id: str
    hypotheses_ok: bool
    conclusion_verdict: OrderVerdict | CheckResult | None
    trials: int
    failures: list[Violation] = field(default_factory=list)
    hypothesis_rejections: int = 0

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and not self.failures

    def as_dict(self) -> dict:
        v = self.conclusion_verdict
        return {
            "theorem_id": self.theorem_id,
            "passed": self.passed,
            "hypotheses_ok": self.hypotheses_ok,
            "trials": self.trials,
            "hypothesis_rejections": self.hypothesis_rejections,
            "conclusion_verdict": None if v is None else v.as_dict(),
            "failures": [f.as_dict() for f in self.failures],
        }


def _single(theorem_id: str, outcome: Outcome, params: dict) -> ScenarioReport:
    failures = []
    if outcome.hypotheses_ok and not outcome.passed:
        failures.append(Violation(0, (0, 0), params, _witness(outcome.verdict), _margin(outcome.verdict),
                                  outcome.note))
    return ScenarioReport(theorem_id, outcome.hypotheses_ok, outcome.verdict, 1, failures,
                          0 if outcome.hypotheses_ok else 1)


def _witness(v):
    return None if v is None else v.witness


def _margin(v) -> float:
    if v is None:
        return float("nan")
    return v.worst_margin if isinstance(v, OrderVerdict) else v.margin


# ---------------------------------------------------------------------------
# numeric lemmas

def fd_step(x: float) -> float:
    """Central-difference step ``1e-5 * max(1, |x|)``."""
    return 1e-5 * max(1.0, abs(x))


def lemma_g(x: ArrayLike) -> NDArray[np.float64]:
    """``x e^(1-x) / (1 - e^(1-x))``, written as ``x / expm1(x - 1)``."""
    x = np.asarray(x, dtype=float)
    return x / np.expm1(x - 1.0)


def check_lemma_g_decreasing(grid: ArrayLike | None = None) -> CheckResult:
    """Strict decrease of :func:`lemma_g` across ``grid`` (inside ``(1, inf)``)."""
    x = np.linspace(1.0 + 1e-6, 50.0, 10_000) if grid is None else np.asarray(grid, dtype=float)
    if np.any(x <= 1.0):
        raise DomainError("grid", "grid must lie inside (1, inf)")
    if np.any(np.diff(x) <= 0):
        raise DomainError("grid", "grid must be strictly increasing")
    g = lemma_g(x)
    steps = np.diff(g)
    k = int(np.argmax(steps))
    # strict decrease: every step must be negative
    return CheckResult(bool(steps[k] < 0), float(-steps[k]), float(x[k + 1]))


def check_schur_concave_numeric(
    f: Callable[[NDArray[np.float64]], float],
    point: ArrayLike,
    h: float | None = None,
    tol: float = 1e-8,
) -> CheckResult:
    """Schur's exchange condition for concavity at ``point``.

    For every pair ``i != j`` the central-difference partials must satisfy
    ``(x_i - x_j) * (df/dx_i - df/dx_j) <= tol``. The margin reported is
    ``tol`` minus the largest exchange term; the witness is the worst pair.
    """
    x = np.asarray(point, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("point", "need a vector with at least two coordinates")
    grad = np.empty_like(x)
    for i in range(x.size):
        step = h if h is not None else fd_step(x[i])
        if not (step > 0 and x[i] + step != x[i]):
            raise DomainError("h", f"step underflows at coordinate {i}")
        up, down = x.copy(), x.copy()
        up[i] += step
        down[i] -= step
        grad[i] = (f(up) - f(down)) / (2.0 * step)
    worst, pair = -np.inf, None
    for i in range(x.size):
        for j in range(i + 1, x.size):
            term = (x[i] - x[j]) * (grad[i] - grad[j])
            if term > worst:
                worst, pair = term, (i, j)
    return CheckResult(bool(worst <= tol), float(tol - worst), list(pair))


# ---------------------------------------------------------------------------
# single-instance checks

def _vec(v) -> NDArray[np.float64]:
    a = np.asarray(v, dtype=float).ravel()
    if a.size == 0 or not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("vector", "need a nonempty vector of positive finite values")
    return a


def _dominates(a, a_star) -> bool:
    """``a`` over ``a*`` in weak supermajorization, or componentwise ``a <= a*``."""
    return is_weak_supermajorized(a_star, a) or bool(np.all(np.asarray(a) <= np.asarray(a_star)))


def _parallel(shapes, scales, betas) -> ParallelSystem:
    return ParallelSystem([ENHParams(a, l, b) for a, l, b in zip(shapes, scales, betas)])


def _order_outcome(hyp: bool, verdict: OrderVerdict, expected: bool = True, note: str = "") -> Outcome:
    return Outcome(hyp, verdict, verdict.holds == expected, expected, note)


def _max_st_shape(alphas, alphas_star, lam, beta, grid, enforce=True) -> Outcome:
    a, a_s = _vec(alphas), _vec(alphas_star)
    hyp = a.size == a_s.size and _dominates(a, a_s)
    if enforce and not hyp:
        return Outcome(False, None, False, note="shapes not dominated")
    n = a.size
    X = _parallel(a, [lam] * n, [beta] * n)
    Xs = _parallel(a_s, [lam] * n, [beta] * n)
    return _order_outcome(hyp, check_st(Xs, X, grid))


def verify_max_st_shape(alphas, alphas_star, lam: float, beta: float,
                        grid: ProbGrid | None = None) -> ScenarioReport:
    """Parallel systems with ENH(alpha_i, lam, beta) components: ``X*_max <=_st X_max``.

    Hypothesis: ``alphas`` dominates ``alphas_star`` by weak supermajorization,
    or ``alphas <= alphas_star`` componentwise.
    """
    params = {"alphas": list(map(float, alphas)), "alphas_star": list(map(float, alphas_star)),
              "lambda": float(lam), "beta": float(beta)}
    return _single("max_st_shape", _max_st_shape(alphas, alphas_star, lam, beta, grid or ProbGrid()), params)


def _max_st_scale(lambdas, lambdas_star, alpha, beta, grid, enforce=True) -> Outcome:
    l, l_s = _vec(lambdas), _vec(lambdas_star)
    hyp = 0 < alpha <= 1 and l.size == l_s.size and _dominates(l, l_s)
    if enforce and not hyp:
        return Outcome(False, None, False, note="needs 0 < alpha <= 1 and dominated scales")
    n = l.size
    X = _parallel([alpha] * n, l, [beta] * n)
    Xs = _parallel([alpha] * n, l_s, [beta] * n)
    return _order_outcome(hyp, check_st(Xs, X, grid))


def verify_max_st_scale(lambdas, lambdas_star, alpha: float, beta: float,
                        grid: ProbGrid | None = None) -> ScenarioReport:
    """Parallel systems with ENH(alpha, lam_i, beta) components, ``alpha <= 1``: ``X*_max <=_st X_max``."""
    params = {"lambdas": list(map(float, lambdas)), "lambdas_star": list(map(float, lambdas_star)),
              "alpha": float(alpha), "beta": float(beta)}
    return _single("max_st_scale", _max_st_scale(lambdas, lambdas_star, alpha, beta, grid or ProbGrid()), params)


def _max_lr(alpha, lam, betas, betas_star, grid, enforce=True) -> Outcome:
    b, b_s = _vec(betas), _vec(betas_star)
    s, s_star = float(b.sum()), float(b_s.sum())
    hyp = True if enforce else s >= s_star
    expected = s >= s_star if enforce else True
    n = b.size
    X = _parallel([alpha] * n, [lam] * n, b)
    Xs = _parallel([alpha] * b_s.size, [lam] * b_s.size, b_s)
    verdict = check_lr(Xs, X, grid)
    # the closed-form density ratio must agree with the checker
    x = np.unique(np.concatenate([X.quantile(grid.u), Xs.quantile(grid.u)]))
    ratio = np.log(max_density_ratio(alpha, lam, b, b_s, x))
    ratio_up = bool(np.all(np.diff(ratio) >= -TOL))
    agree = ratio_up == verdict.holds
    note = "" if agree else "closed-form density ratio disagrees with lr checker"
    return Outcome(hyp, verdict, verdict.holds == expected and agree, expected, note)


def verify_max_lr(alpha: float, lam: float, betas, betas_star,
                  grid: ProbGrid | None = None) -> ScenarioReport:
    """Common alpha and lam: ``X*_max <=_lr X_max`` exactly when ``sum(betas) >= sum(betas_star)``.

    Both directions are asserted: the report fails if the lr verdict differs
    from the sign test in either direction.
    """
    params = {"alpha": float(alpha), "lambda": float(lam), "betas": list(map(float, betas)),
              "betas_star": list(map(float, betas_star))}
    return _single("max_lr", _max_lr(alpha, lam, betas, betas_star, grid or ProbGrid()), params)


def _hazard_nonincreasing(D, grid: ProbGrid) -> CheckResult:
    x = np.asarray(D.quantile(grid.u))
    h = np.asarray(D.hazard(x))
    dh = np.diff(h) / np.maximum(1.0, np.abs(h[:-1]))
    k = int(np.argmax(dh))
    return CheckResult(bool(dh[k] <= TOL), float(-dh[k]), float(x[k + 1]))


def _max_disp(alpha, lam, betas, betas_star, grid, enforce=True) -> Outcome:
    b, b_s = _vec(betas), _vec(betas_star)
    s, s_star = float(b.sum()), float(b_s.sum())
    hyp = alpha < 1 and s_star <= s < 1
    if enforce and not hyp:
        return Outcome(False, None, False, note="needs alpha < 1 and sum(beta*) <= sum(beta) < 1")
    X = _parallel([alpha] * b.size, [lam] * b.size, b)
    Xs = _parallel([alpha] * b_s.size, [lam] * b_s.size, b_s)
    verdict = check_disp(Xs, X, grid)
    dhr = _hazard_nonincreasing(X, grid)
    note = "" if dhr.holds else f"hazard of the maximum increases near x={dhr.witness}"
    return Outcome(hyp, verdict, verdict.holds and dhr.holds, True, note)


def verify_max_disp(alpha: float, lam: float, betas, betas_star,
                    grid: ProbGrid | None = None) -> ScenarioReport:
    """``alpha < 1`` and ``sum(beta*) <= sum(beta) < 1``: ``X*_max <=_disp X_max``; the max is DHR."""
    params = {"alpha": float(alpha), "lambda": float(lam), "betas": list(map(float, betas)),
              "betas_star": list(map(float, betas_star))}
    return _single("max_disp", _max_disp(alpha, lam, betas, betas_star, grid or ProbGrid()), params)


def convex_composition(alpha1: float, alpha2: float, lam1: float, lam2: float, x: ArrayLike):
    """``((1 + lam2 x)**(alpha2/alpha1) - 1) / lam1`` and its second derivative."""
    x = np.asarray(x, dtype=float)
    r = alpha2 / alpha1
    h = np.expm1(r * np.log1p(lam2 * x)) / lam1
    h2 = (lam2 / lam1) * r * lam2 * (r - 1.0) * (1.0 + lam2 * x) ** (r - 2.0)
    return h, h2


def _max_convex(alpha1, alpha2, lam1, lam2, betas, betas_star, grid, enforce=True) -> Outcome:
    b, b_s = _vec(betas), _vec(betas_star)
    s, s_star = float(b.sum()), float(b_s.sum())
    hyp = alpha1 <= alpha2 and abs(s - s_star) <= 1e-12 * max(s, s_star)
    if enforce and not hyp:
        return Outcome(False, None, False, note="needs alpha1 <= alpha2 and equal beta sums")
    X = _parallel([alpha1] * b.size, [lam1] * b.size, b)
    Xs = _parallel([alpha2] * b_s.size, [lam2] * b_s.size, b_s)
    verdict = check_convex_transform(Xs, X, grid)
    notes = []
    ok = verdict.holds
    if hyp:
        x = np.asarray(Xs.quantile(grid.u))
        h, h2 = convex_composition(alpha1, alpha2, lam1, lam2, x)
        numeric = np.asarray(X.quantile(grid.u))
        rel = np.max(np.abs(numeric - h) / np.maximum(1.0, np.abs(h)))
        if rel > 1e-8:
            ok = False
            notes.append(f"closed-form composition off by {rel:.3g}")
        if np.any(h2 < 0):
            ok = False
            notes.append("closed-form second derivative negative")
    lorenz = check_lorenz(Xs, X, grid)
    if not lorenz.holds:
        ok = False
        notes.append(f"Lorenz violated at u={lorenz.witness} (margin {lorenz.worst_margin:.3g})")
    return Outcome(hyp, verdict, ok, True, "; ".join(notes))


def verify_max_convex_transform(alpha1: float, alpha2: float, lam1: float, lam2: float,
                                betas, betas_star, grid: ProbGrid | None = None) -> ScenarioReport:
    """``X_i ~ ENH(alpha1, lam1, beta_i)``, ``X*_i ~ ENH(alpha2, lam2, beta*_i)``.

    With ``alpha1 <= alpha2`` and equal beta sums, ``X*_max <=_c X_max`` and
    hence ``X*_max <=_Lorenz X_max``; both are asserted, along with the
    closed form of ``F_max^-1(F*_max(x))``.
    """
    params = {"alpha1": float(alpha1), "alpha2": float(alpha2), "lambda1": float(lam1),
              "lambda2": float(lam2), "betas": list(map(float, betas)),
              "betas_star": list(map(float, betas_star))}
    return _single("max_convex",
                   _max_convex(alpha1, alpha2, lam1, lam2, betas, betas_star, grid or ProbGrid()), params)


def _min_st(alphas, alphas_star, lam, baseline, gen1, gen2, grid, enforce=True) -> Outcome:
    a, a_s = _vec(alphas), _vec(alphas_star)
    sa = check_super_additive(gen2, gen1)
    hyp = sa.super_additive and a.size == a_s.size and _dominates(a, a_s)
    if enforce and not hyp:
        note = "composition not super-additive" if not sa.super_additive else "exponents not dominated"
        return Outcome(False, None, False, note=note)
    try:
        X = SeriesSystem(SampleSpec(tuple(ESSpec(ai, lam, baseline) for ai in a), gen1))
        Xs = SeriesSystem(SampleSpec(tuple(ESSpec(ai, lam, baseline) for ai in a_s), gen2))
    except DomainError as exc:
        return Outcome(False, None, False, note=str(exc))
    return _order_outcome(hyp, check_st(X, Xs, grid))


def verify_min_st_copula(alphas, alphas_star, lam: float, baseline: Baseline,
                         gen1: ArchGenerator, gen2: ArchGenerator,
                         grid: ProbGrid | None = None) -> ScenarioReport:
    """Series systems of ES marginals: ``X_min <=_st X*_min``.

    ``X`` has exponents ``alphas`` and copula ``gen1``, ``X*`` has
    ``alphas_star`` and ``gen2``. Hypotheses: ``psi_2 o phi_1`` super-additive
    on the scan grid and ``alphas`` dominating ``alphas_star`` by weak
    supermajorization (or componentwise ``<=``).
    """
    params = {"alphas": list(map(float, alphas)), "alphas_star": list(map(float, alphas_star)),
              "lambda": float(lam), "baseline": _baseline_dict(baseline),
              "gen1": _gen_dict(gen1), "gen2": _gen_dict(gen2)}
    return _single("min_st_copula",
                   _min_st(alphas, alphas_star, lam, baseline, gen1, gen2, grid or ProbGrid()), params)


def _schur_lemma(alphas, alphas_star, lam, beta, x, enforce=True) -> Outcome:
    """Max CDF as a function of the shapes at fixed ``x``."""
    a, a_s = _vec(alphas), _vec(alphas_star)
    hyp = is_weak_supermajorized(a_s, a)
    if enforce and not hyp:
        return Outcome(False, None, False, note="pair not weakly supermajorized")

    def f(v):
        return float(max_cdf(SampleSpec(tuple(ENHParams(vi, lam, beta) for vi in v)), x))

    notes = []
    # increasing in each coordinate
    base = f(a)
    for i in range(a.size):
        up = a.copy()
        up[i] += fd_step(a[i])
        if f(up) < base - TOL:
            notes.append(f"decreasing in coordinate {i}")
    schur = check_schur_concave_numeric(f, a)
    if not schur.holds:
        notes.append(f"exchange condition fails for pair {schur.witness}")
    gap = f(a_s) - base
    if gap < -TOL:
        notes.append(f"w-super pair misordered by {gap:.3g}")
    verdict = CheckResult(not notes, min(schur.margin, gap), schur.witness, "; ".join(notes))
    return Outcome(hyp, verdict, verdict.holds, True, verdict.note)


def verify_schur_lemma(alphas, alphas_star, lam: float, beta: float, x: float) -> ScenarioReport:
    params = {"alphas": list(map(float, alphas)), "alphas_star": list(map(float, alphas_star)),
              "lambda": float(lam), "beta": float(beta), "x": float(x)}
    return _single("schur_lemma", _schur_lemma(alphas, alphas_star, lam, beta, x), params)


# ---------------------------------------------------------------------------
# parameter (de)serialisation

def _gen_dict(g: ArchGenerator) -> dict:
    return {"family": g.family, "theta": g.theta}


def _baseline_dict(b: Baseline) -> dict:
    return {"kind": b.kind, "alpha": b.alpha}


def generator_from(obj: Mapping | ArchGenerator) -> ArchGenerator:
    if isinstance(obj, ArchGenerator):
        return obj
    return ArchGenerator(obj.get("family", "independence"), obj.get("theta", 1.0))


def baseline_from(obj: Mapping | Baseline) -> Baseline:
    if isinstance(obj, Baseline):
        return obj
    return Baseline(obj.get("kind", "exponential"), obj.get("alpha", 1.0))


# ---------------------------------------------------------------------------
# randomised scenarios

def _logu(rng, lo, hi) -> float:
    return float(np.exp(rng.uniform(math.log(lo), math.log(hi))))


def _rng_range(ranges, key, default):
    lo, hi = ranges.get(key, default)
    return float(lo), float(hi)


def _vector_pair(rng, n, relation, domain):
    """``(a, a_star)`` with ``a`` dominating ``a_star`` as requested."""
    lo, hi = domain
    if relation == "w_super":
        a_star, a = random_comparable_pair(n, "w_super", rng, domain)
        return a, a_star
    if relation == "componentwise":
        a = rng.uniform(lo, hi, n)
        a_star = a + rng.uniform(0, 1, n) * rng.integers(0, 2, n) * (hi - a)
        return a, a_star
    if relation == "none":
        return rng.uniform(lo, hi, n), rng.uniform(lo, hi, n)
    raise DomainError("relation", f"unknown relation {relation!r}")


def _default_relation(trial: int, relation: str | None, options=("w_super", "componentwise")) -> str:
    return relation if relation is not None else options[trial % len(options)]


def _sample_max_st_shape(rng, n, trial, ranges, relation):
    rel = relation or "w_super"
    a, a_s = _vector_pair(rng, n, rel, _rng_range(ranges, "alpha", (0.2, 4.0)))
    return {"alphas": a.tolist(), "alphas_star": a_s.tolist(),
            "lambda": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "beta": _logu(rng, *_rng_range(ranges, "beta", (0.3, 3.0)))}


def _sample_max_st_shape_cw(rng, n, trial, ranges, relation):
    return _sample_max_st_shape(rng, n, trial, ranges, relation or "componentwise")


def _sample_max_st_scale(rng, n, trial, ranges, relation):
    rel = _default_relation(trial, relation)
    l, l_s = _vector_pair(rng, n, rel, _rng_range(ranges, "lambda", (0.2, 4.0)))
    return {"lambdas": l.tolist(), "lambdas_star": l_s.tolist(),
            "alpha": float(rng.uniform(*_rng_range(ranges, "alpha", (0.05, 0.99)))),
            "beta": _logu(rng, *_rng_range(ranges, "beta", (0.3, 3.0)))}


def _sample_max_lr(rng, n, trial, ranges, relation):
    lo, hi = _rng_range(ranges, "beta", (0.1, 3.0))
    b = rng.uniform(lo, hi, n)
    lo_s, hi_s = _rng_range(ranges, "beta_star", (lo, hi))
    b_s = rng.uniform(lo_s, hi_s, n)
    return {"alpha": _logu(rng, *_rng_range(ranges, "alpha", (0.2, 4.0))),
            "lambda": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "betas": b.tolist(), "betas_star": b_s.tolist()}


def _sample_max_disp(rng, n, trial, ranges, relation):
    s_lo, s_hi = _rng_range(ranges, "beta_sum", (0.05, 0.95))
    s = float(rng.uniform(s_lo, s_hi))
    if relation == "none":
        s_star = float(rng.uniform(s_lo, s_hi))
    else:
        s_star = float(rng.uniform(0.01, 1.0)) * s
    b = rng.dirichlet(np.ones(n)) * s
    b_s = rng.dirichlet(np.ones(n)) * s_star
    return {"alpha": float(rng.uniform(*_rng_range(ranges, "alpha", (0.05, 0.95)))),
            "lambda": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "betas": b.tolist(), "betas_star": b_s.tolist()}


def _sample_max_convex(rng, n, trial, ranges, relation):
    a_lo, a_hi = _rng_range(ranges, "alpha", (0.2, 4.0))
    alpha1 = _logu(rng, a_lo, a_hi)
    alpha2 = _logu(rng, a_lo, a_hi) if relation == "none" else alpha1 * float(rng.uniform(1.0, 3.0))
    b = rng.uniform(0.2, 2.0, n)
    b_s = rng.uniform(0.2, 2.0, n)
    b_s *= b.sum() / b_s.sum()
    return {"alpha1": alpha1, "alpha2": alpha2,
            "lambda1": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "lambda2": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "betas": b.tolist(), "betas_star": b_s.tolist()}


def _sample_generators(rng, relation):
    """``(gen1, gen2)`` with ``psi_2 o phi_1`` super-additive (unless ``relation == 'none'``)."""
    if relation == "none":
        pick = lambda: [INDEPENDENCE, gumbel(_logu(rng, 1.0, 4.0)), clayton(_logu(rng, 0.2, 5.0))][rng.integers(3)]  # noqa: E731
        return pick(), pick()
    kind = int(rng.integers(5))
    if kind == 0:
        return INDEPENDENCE, gumbel(_logu(rng, 1.0, 4.0))
    if kind == 1:
        t1 = _logu(rng, 1.0, 3.0)
        return gumbel(t1), gumbel(t1 * _logu(rng, 1.0, 2.0))
    if kind == 2:
        t1 = _logu(rng, 0.2, 3.0)
        return clayton(t1), clayton(t1 * _logu(rng, 1.0, 3.0))
    if kind == 3:
        return INDEPENDENCE, clayton(_logu(rng, 0.2, 5.0))
    g = [INDEPENDENCE, gumbel(_logu(rng, 1.0, 4.0)), clayton(_logu(rng, 0.2, 5.0))][rng.integers(3)]
    return g, g


def _sample_min_st(rng, n, trial, ranges, relation, *, lam=None, baseline=None):
    rel = relation if relation is not None else _default_relation(trial, None)
    gen_rel = "none" if relation == "none" else None
    a, a_s = _vector_pair(rng, n, rel, _rng_range(ranges, "alpha", (0.2, 4.0)))
    gen1, gen2 = _sample_generators(rng, gen_rel)
    if baseline is None:
        baseline = Baseline("exponential") if rng.integers(2) == 0 else \
            Baseline("nh", _logu(rng, *_rng_range(ranges, "baseline_alpha", (0.3, 3.0))))
    lam = _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))) if lam is None else lam
    return {"alphas": a.tolist(), "alphas_star": a_s.tolist(), "lambda": lam,
            "baseline": _baseline_dict(baseline), "gen1": _gen_dict(gen1), "gen2": _gen_dict(gen2)}


def _sample_min_st_prh(rng, n, trial, ranges, relation):
    return _sample_min_st(rng, n, trial, ranges, relation, lam=1.0)


def _sample_min_st_enh(rng, n, trial, ranges, relation):
    base = Baseline("nh", _logu(rng, *_rng_range(ranges, "baseline_alpha", (0.3, 3.0))))
    return _sample_min_st(rng, n, trial, ranges, relation, baseline=base)


def _sample_schur_lemma(rng, n, trial, ranges, relation):
    a_s, a = random_comparable_pair(n, "w_super", rng, _rng_range(ranges, "alpha", (0.2, 4.0)))
    return {"alphas": a.tolist(), "alphas_star": a_s.tolist(),
            "lambda": _logu(rng, *_rng_range(ranges, "lambda", (0.3, 3.0))),
            "beta": _logu(rng, *_rng_range(ranges, "beta", (0.3, 3.0))),
            "x": _logu(rng, 0.05, 5.0)}


def _run_min_st(p, grid, enforce):
    return _min_st(p["alphas"], p["alphas_star"], p["lambda"], baseline_from(p["baseline"]),
                   generator_from(p["gen1"]), generator_from(p["gen2"]), grid, enforce)


@dataclass(frozen=True)
class _ScenarioDef:
    sample: Callable | None
    run: Callable


SCENARIOS: dict[str, _ScenarioDef] = {
    "max_st_shape": _ScenarioDef(
        _sample_max_st_shape,
        lambda p, g, e: _max_st_shape(p["alphas"], p["alphas_star"], p["lambda"], p["beta"], g, e)),
    "max_st_shape_componentwise": _ScenarioDef(
        _sample_max_st_shape_cw,
        lambda p, g, e: _max_st_shape(p["alphas"], p["alphas_star"], p["lambda"], p["beta"], g, e)),
    "max_st_scale": _ScenarioDef(
        _sample_max_st_scale,
        lambda p, g, e: _max_st_scale(p["lambdas"], p["lambdas_star"], p["alpha"], p["beta"], g, e)),
    "max_lr": _ScenarioDef(
        _sample_max_lr,
        lambda p, g, e: _max_lr(p["alpha"], p["lambda"], p["betas"], p["betas_star"], g, e)),
    "max_disp": _ScenarioDef(
        _sample_max_disp,
        lambda p, g, e: _max_disp(p["alpha"], p["lambda"], p["betas"], p["betas_star"], g, e)),
    "max_convex": _ScenarioDef(
        _sample_max_convex,
        lambda p, g, e: _max_convex(p["alpha1"], p["alpha2"], p["lambda1"], p["lambda2"],
                                    p["betas"], p["betas_star"], g, e)),
    "min_st_copula": _ScenarioDef(_sample_min_st, _run_min_st),
    "min_st_prh": _ScenarioDef(_sample_min_st_prh, _run_min_st),
    "min_st_enh_copula": _ScenarioDef(_sample_min_st_enh, _run_min_st),
    "schur_lemma": _ScenarioDef(
        _sample_schur_lemma,
        lambda p, g, e: _schur_lemma(p["alphas"], p["alphas_star"], p["lambda"], p["beta"], p["x"], e)),
    "g_decreasing": _ScenarioDef(
        None, lambda p, g, e: (lambda r: Outcome(True, r, r.holds))(check_lemma_g_decreasing())),
}


def _lookup(theorem_id: str) -> _ScenarioDef:
    try:
        return SCENARIOS[theorem_id]
    except KeyError:
        raise DomainError("theorem_id", f"unknown scenario {theorem_id!r}") from None


def _worse(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return b if _margin(b) < _margin(a) else a


def run_scenario(
    theorem_id: str,
    trials: int = 200,
    seed: int = 0,
    n_range: tuple[int, int] = (2, 5),
    grid: ProbGrid | None = None,
    params: Mapping | None = None,
    ranges: Mapping[str, Sequence[float]] | None = None,
) -> ScenarioReport:
    """Run ``trials`` seeded hypothesis-satisfying instances of a scenario.

    Trial ``k`` draws from ``numpy.random.default_rng([seed, k])``, so any
    failure is reproducible from its recorded seed pair. With ``params`` a
    single explicit instance is run instead. Instances whose drawn
    parameters miss a hypothesis are counted in ``hypothesis_rejections``.
    """
    spec = _lookup(theorem_id)
    grid = grid or ProbGrid()
    if params is not None or spec.sample is None:
        p = dict(params or {})
        outcome = spec.run(p, grid, True)
        report = _single(theorem_id, outcome, p)
        return report
    ranges = dict(ranges or {})
    n_lo, n_hi = n_range
    if not 1 <= n_lo <= n_hi:
        raise DomainError("n_range", f"invalid sample-size range {n_range}")
    worst = None
    failures: list[Violation] = []
    rejected = 0
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        n = int(rng.integers(max(2, n_lo), n_hi + 1))
        p = spec.sample(rng, n, k, ranges, None)
        outcome = spec.run(p, grid, True)
        if not outcome.hypotheses_ok:
            rejected += 1
            continue
        if outcome.expected:
            worst = _worse(worst, outcome.verdict)
        if not outcome.passed:
            failures.append(Violation(k, (seed, k), p, _witness(outcome.verdict),
                                      _margin(outcome.verdict), outcome.note))
    return ScenarioReport(theorem_id, rejected < trials, worst, trials, failures, rejected)


def counterexample_scan(
    theorem_id: str,
    ranges: Mapping[str, Sequence[float]] | None = None,
    n_samples: int = 100,
    seed: int = 0,
    n_range: tuple[int, int] = (2, 5),
    relation: str = "none",
    grid: ProbGrid | None = None,
) -> list[Violation]:
    """Evaluate a conclusion on sampled parameters, hypotheses or not.

    ``relation`` controls how parameter vector pairs are drawn: ``"none"``
    (independent), ``"w_super"`` or ``"componentwise"``. Every sample whose
    conclusion fails is returned with its parameters and seed pair; finding
    none says nothing about necessity of a hypothesis.
    """
    spec = _lookup(theorem_id)
    if spec.sample is None:
        outcome = spec.run({}, grid or ProbGrid(), False)
        return [] if outcome.passed else [Violation(0, (seed, 0), {}, _witness(outcome.verdict),
                                                    _margin(outcome.verdict), outcome.note)]
    grid = grid or ProbGrid()
    ranges = dict(ranges or {})
    out = []
    for k in range(n_samples):
        rng = np.random.default_rng([seed, k])
        n = int(rng.integers(max(2, n_range[0]), n_range[1] + 1))
        p = spec.sample(rng, n, k, ranges, relation)
        outcome = spec.run(p, grid, False)
        if outcome.verdict is None:
            continue
        if not outcome.passed:
            out.append(Violation(k, (seed, k), p, _witness(outcome.verdict),
                                 _margin(outcome.verdict), outcome.note))
    return out
