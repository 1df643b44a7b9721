"""Shared random-instance generators for the test suite."""

import numpy as np

from enhorder.dist import ENHParams

# PASS/FAIL lines from the acceptance suite, printed by conftest at the end
ACCEPTANCE_LINES: list[str] = []


def log_uniform(rng, lo=0.3, hi=3.0) -> float:
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def random_enh_pair(rng):
    """Two ENH laws that differ in one parameter, or in all three.

    Pairs sharing two parameters are often ordered, so implication premises
    hold often enough to collect many instances.
    """
    p = ENHParams(log_uniform(rng), log_uniform(rng), log_uniform(rng))
    k = int(rng.integers(4))
    if k == 0:
        q = ENHParams(log_uniform(rng), log_uniform(rng), log_uniform(rng))
    elif k == 1:
        q = ENHParams(p.alpha, p.lam, log_uniform(rng))
    elif k == 2:
        q = ENHParams(p.alpha, log_uniform(rng), p.beta)
    else:
        q = ENHParams(log_uniform(rng), p.lam, p.beta)
    return (p, q) if rng.random() < 0.5 else (q, p)


def implication_counts(premise, conclusion, wanted, seed, max_draws=4000):
    """Draw random pairs until ``wanted`` satisfy ``premise``.

    Returns ``(n_premise, failures)`` where failures lists the pairs whose
    conclusion verdict failed.
    """
    rng = np.random.default_rng(seed)
    found, failures = 0, []
    for _ in range(max_draws):
        F, G = random_enh_pair(rng)
        if not premise(F, G).holds:
            continue
        found += 1
        verdict = conclusion(F, G)
        if not verdict.holds:
            failures.append((F, G, verdict.worst_margin))
        if found >= wanted:
            break
    return found, failures
