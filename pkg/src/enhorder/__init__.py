"""Stochastic comparisons of extreme order statistics from ENH samples.

Modules
-------
dist      ENH and exponentiated-scale lifetime laws, hazard-shape classifier
copula    Archimedean generators, n-monotonicity and super-additivity checks
majorize  majorization predicates and comparable-pair generation
extremes  laws of parallel (max) and series (min) systems
orders    grid checkers for st, hr, lr, disp, right-spread, convex and Lorenz orders
verify    randomised scenario harness and counterexample scanner
cli       command-line front end (``enhorder`` / ``python -m enhorder``)
"""

__version__ = "0.1.0"

from ._numeric import DomainError
from .copula import INDEPENDENCE, ArchGenerator, check_n_monotone, check_super_additive, clayton, gumbel
from .dist import Baseline, ENHParams, ESSpec, HazardShape, classify_hazard_shape
from .extremes import ParallelSystem, SampleSpec, SeriesSystem
from .majorize import is_majorized, is_weak_submajorized, is_weak_supermajorized, random_comparable_pair
from .orders import OrderName, OrderVerdict, ProbGrid, check_order
from .verify import ScenarioReport, counterexample_scan, run_scenario

__all__ = [
    "__version__",
    "DomainError",
    "ArchGenerator",
    "INDEPENDENCE",
    "gumbel",
    "clayton",
    "check_n_monotone",
    "check_super_additive",
    "Baseline",
    "ENHParams",
    "ESSpec",
    "HazardShape",
    "classify_hazard_shape",
    "ParallelSystem",
    "SeriesSystem",
    "SampleSpec",
    "is_majorized",
    "is_weak_submajorized",
    "is_weak_supermajorized",
    "random_comparable_pair",
    "OrderName",
    "OrderVerdict",
    "ProbGrid",
    "check_order",
    "ScenarioReport",
    "run_scenario",
    "counterexample_scan",
]
