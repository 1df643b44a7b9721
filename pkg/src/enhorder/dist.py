"""ENH and exponentiated-scale (ES) lifetime distributions.

``ENHParams`` is the three-parameter exponentiated Nadarajah-Haghighi law with
CDF ``[1 - exp(1 - (1 + lam*x)**alpha)]**beta``. ``ESSpec`` is the general
family ``G(lam*x)**alpha`` over an NH or exponential baseline ``G``.

Every distribution object exposes the same vectorised surface
(``cdf``, ``sf``, ``pdf``, ``quantile`` plus their log forms and ``hazard``)
so the order checkers can consume them interchangeably. All evaluation is done
in log space: ``1 - exp(z)`` and ``1 - u**(1/beta)`` lose every digit for
``x`` near zero or ``beta`` in the thousands when computed directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._numeric import (
    DomainError,
    check_nonnegative,
    check_open_unit,
    check_positive,
    log1mexp,
)

__all__ = [
    "Baseline",
    "ENHParams",
    "ESSpec",
    "HazardShape",
    "DEFAULT_U_MIN",
    "DEFAULT_U_MAX",
    "DEFAULT_GRID_POINTS",
    "prob_grid",
    "enh_cdf",
    "enh_sf",
    "enh_pdf",
    "enh_quantile",
    "enh_hazard",
    "classify_hazard_shape",
    "es_cdf",
    "nh",
    "ge",
    "exponential",
]

DEFAULT_GRID_POINTS = 512
DEFAULT_U_MIN = 1e-4
DEFAULT_U_MAX = 1.0 - 1e-4


def prob_grid(
    n: int = DEFAULT_GRID_POINTS, u_min: float = DEFAULT_U_MIN, u_max: float = DEFAULT_U_MAX
) -> NDArray[np.float64]:
    """Evenly spaced probabilities in ``[u_min, u_max]``."""
    if not 0.0 < u_min < u_max < 1.0:
        raise DomainError("grid", f"need 0 < u_min < u_max < 1, got {u_min}, {u_max}")
    if n < 2:
        raise DomainError("grid", "need at least two points")
    return np.linspace(u_min, u_max, int(n))


def _scalar_or_array(x: NDArray[np.float64], scalar: bool):
    return float(x) if scalar else x


def _log_sf_of_power(power: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
    """``log(1 - (1 - e^z)**power)`` for ``z <= 0``, accurate deep in the right tail.

    Once ``(1 - e^z)**power`` rounds to 1 the direct form returns ``-inf``;
    there ``w = power * log1p(-e^z)`` is tiny and
    ``log(-expm1(w)) = log(power) + z + e^z/2 + log1p(w/2) + O(w^2)``.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        w = power * log1mexp(z)
        tail = (z < -30.0) & (w > -1e-8)
        direct = log1mexp(w)
        series = np.log(power) + z + 0.5 * np.exp(z) + np.log1p(0.5 * w)
    return np.where(tail, series, direct)


class _LifetimeMixin:
    """Shared derived quantities; subclasses supply ``logcdf``, ``logpdf``, ``quantile``."""

    def logsf(self, x: ArrayLike) -> NDArray[np.float64]:
        return log1mexp(self.logcdf(x))

    def cdf(self, x: ArrayLike):
        scalar = np.ndim(x) == 0
        return _scalar_or_array(np.exp(self.logcdf(x)), scalar)

    def sf(self, x: ArrayLike):
        scalar = np.ndim(x) == 0
        return _scalar_or_array(np.exp(self.logsf(x)), scalar)

    def pdf(self, x: ArrayLike):
        scalar = np.ndim(x) == 0
        return _scalar_or_array(np.exp(self.logpdf(x)), scalar)

    def hazard(self, x: ArrayLike):
        """``pdf / sf``; positive infinity once the survival underflows."""
        scalar = np.ndim(x) == 0
        with np.errstate(over="ignore", invalid="ignore"):
            h = np.exp(self.logpdf(x) - self.logsf(x))
        return _scalar_or_array(h, scalar)


@dataclass(frozen=True)
class ENHParams(_LifetimeMixin):
    """Exponentiated Nadarajah-Haghighi law ``ENH(alpha, lam, beta)``.

    ``alpha`` and ``beta`` are shape parameters, ``lam`` the scale (a rate,
    1/time). ``beta = 1`` gives NH, ``alpha = 1`` gives the generalized
    exponential, and ``alpha = beta = 1`` the exponential with rate ``lam``.
    """

    alpha: float
    lam: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_positive("alpha", self.alpha))
        object.__setattr__(self, "lam", check_positive("lambda", self.lam))
        object.__setattr__(self, "beta", check_positive("beta", self.beta))

    def _z(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        # z = 1 - (1 + lam x)^alpha  (<= 0)
        return -np.expm1(self.alpha * np.log1p(self.lam * x))

    def log_nh_cdf(self, x: ArrayLike) -> NDArray[np.float64]:
        """``log(1 - exp(1 - (1 + lam*x)**alpha))``, the beta = 1 log-CDF."""
        x = check_nonnegative("x", x)
        with np.errstate(divide="ignore"):
            # for lam*x below 1e-200 the product may underflow, while
            # log(alpha*lam*x) is exact to a relative O(lam*x)
            near_zero = np.log(self.alpha) + np.log(self.lam) + np.log(x)
        return np.where(self.lam * x < 1e-200, near_zero, log1mexp(self._z(x)))

    def logcdf(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.beta * self.log_nh_cdf(x)

    def logsf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        return _log_sf_of_power(self.beta, self._z(x))

    def logpdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        z = self._z(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = (self.beta - 1.0) * log1mexp(z) if self.beta != 1.0 else 0.0
            return (
                np.log(self.alpha * self.beta * self.lam)
                + (self.alpha - 1.0) * np.log1p(self.lam * x)
                + z
                + tail
            )

    def quantile(self, u: ArrayLike):
        scalar = np.ndim(u) == 0
        u = check_open_unit("u", u)
        # ((1 - log(1 - u^(1/beta)))^(1/alpha) - 1) / lam
        t = -log1mexp(np.log(u) / self.beta)
        q = np.expm1(np.log1p(t) / self.alpha) / self.lam
        return _scalar_or_array(q, scalar)

    def as_es(self) -> "ESSpec":
        """The same law written as ``ES(beta, lam)`` over an ``NH(alpha)`` baseline."""
        return ESSpec(self.beta, self.lam, Baseline("nh", self.alpha))


def nh(alpha: float, lam: float) -> ENHParams:
    return ENHParams(alpha, lam, 1.0)


def ge(lam: float, beta: float) -> ENHParams:
    return ENHParams(1.0, lam, beta)


def exponential(rate: float) -> ENHParams:
    return ENHParams(1.0, rate, 1.0)


@dataclass(frozen=True)
class Baseline:
    """Baseline CDF ``G`` on ``[0, inf)``: ``NH(alpha)`` with unit scale, or unit exponential."""

    kind: Literal["nh", "exponential"] = "exponential"
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in ("nh", "exponential"):
            raise DomainError("baseline", f"unknown baseline kind {self.kind!r}")
        object.__setattr__(self, "alpha", check_positive("baseline.alpha", self.alpha))
        if self.kind == "exponential" and self.alpha != 1.0:
            raise DomainError("baseline.alpha", "the exponential baseline has no shape parameter")

    def _z(self, y):
        return -np.expm1(self.alpha * np.log1p(y))

    def logcdf(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return log1mexp(self._z(y))

    def logpdf(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.log(self.alpha) + (self.alpha - 1.0) * np.log1p(y) + self._z(y)

    def quantile_from_log(self, log_v: NDArray[np.float64]) -> NDArray[np.float64]:
        t = -log1mexp(log_v)
        return np.expm1(np.log1p(t) / self.alpha)


@dataclass(frozen=True)
class ESSpec(_LifetimeMixin):
    """Exponentiated-scale law with CDF ``G(lam*x)**alpha``."""

    alpha: float
    lam: float
    baseline: Baseline = Baseline()

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_positive("alpha", self.alpha))
        object.__setattr__(self, "lam", check_positive("lambda", self.lam))

    def logcdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        return self.alpha * self.baseline.logcdf(self.lam * x)

    def logsf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        return _log_sf_of_power(self.alpha, self.baseline._z(self.lam * x))

    def logpdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        y = self.lam * x
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = (self.alpha - 1.0) * self.baseline.logcdf(y) if self.alpha != 1.0 else 0.0
            return np.log(self.alpha * self.lam) + tail + self.baseline.logpdf(y)

    def quantile(self, u: ArrayLike):
        scalar = np.ndim(u) == 0
        u = check_open_unit("u", u)
        q = self.baseline.quantile_from_log(np.log(u) / self.alpha) / self.lam
        return _scalar_or_array(q, scalar)


def enh_cdf(p: ENHParams, x: ArrayLike):
    return p.cdf(x)


def enh_sf(p: ENHParams, x: ArrayLike):
    return p.sf(x)


def enh_pdf(p: ENHParams, x: ArrayLike):
    """Density; ``inf`` at ``x = 0`` when ``beta < 1``."""
    return p.pdf(x)


def enh_quantile(p: ENHParams, u: ArrayLike):
    return p.quantile(u)


def enh_hazard(p: ENHParams, x: ArrayLike):
    return p.hazard(x)


def es_cdf(s: ESSpec, x: ArrayLike):
    return s.cdf(x)


class HazardShape(str, enum.Enum):
    CONSTANT = "Constant"
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    UNIMODAL = "Unimodal"
    BATHTUB = "Bathtub"
    INDETERMINATE = "Indeterminate"


# relative size below which a hazard increment counts as zero
_FLAT_RTOL = 1e-12


def classify_hazard_shape(p, grid: ArrayLike | None = None) -> HazardShape:
    """Classify the hazard of ``p`` from the sign pattern of its increments.

    ``grid`` holds probabilities; they are mapped through ``p.quantile`` so
    both tails are sampled. Increments smaller than ``1e-12`` relative to the
    hazard are treated as flat and dropped from the sign sequence.
    """
    u = prob_grid() if grid is None else np.asarray(grid, dtype=float)
    if u.size < 64:
        raise DomainError("grid", "hazard-shape classification needs at least 64 points")
    x = np.asarray(p.quantile(u))
    h = np.asarray(p.hazard(x))
    finite = np.isfinite(h)
    h = h[finite]
    dh = np.diff(h)
    scale = np.maximum(np.abs(h[:-1]), np.abs(h[1:]))
    signs = np.sign(dh)
    signs[np.abs(dh) <= _FLAT_RTOL * np.maximum(scale, 1e-300)] = 0
    signs = signs[signs != 0]
    if signs.size == 0:
        return HazardShape.CONSTANT
    changes = np.flatnonzero(np.diff(signs) != 0)
    if changes.size == 0:
        return HazardShape.INCREASING if signs[0] > 0 else HazardShape.DECREASING
    if changes.size == 1:
        return HazardShape.UNIMODAL if signs[0] > 0 else HazardShape.BATHTUB
    return HazardShape.INDETERMINATE
