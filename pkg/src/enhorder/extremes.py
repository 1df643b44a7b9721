"""Exact laws of the largest and smallest order statistics.

``ParallelSystem`` is the maximum of independent heterogeneous lifetimes;
``SeriesSystem`` is the minimum under an Archimedean survival copula, whose
survival function is ``phi(sum_i psi(1 - F_i(x)))``. Both are distribution
handles with the same surface as the marginals in :mod:`enhorder.dist`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from ._numeric import DomainError, check_nonnegative, check_open_unit, invert_increasing, log1mexp
from .copula import INDEPENDENCE, ArchGenerator, check_n_monotone
from .dist import ENHParams, ESSpec, _LifetimeMixin, _scalar_or_array

__all__ = [
    "Marginal",
    "SampleSpec",
    "ExtremeKind",
    "ParallelSystem",
    "SeriesSystem",
    "extreme",
    "max_cdf",
    "max_pdf_common",
    "max_density_ratio",
    "min_sf_archimedean",
    "min_sf_independent",
]

Marginal = Union[ENHParams, ESSpec]


class ExtremeKind(str, enum.Enum):
    MAX = "max"  # parallel system
    MIN = "min"  # series system


@dataclass(frozen=True)
class SampleSpec:
    """Marginal laws plus dependence (``None`` means independent)."""

    marginals: tuple[Marginal, ...]
    dependence: ArchGenerator | None = None

    def __post_init__(self):
        margs = tuple(self.marginals)
        if len(margs) == 0:
            raise DomainError("marginals", "need at least one component")
        for m in margs:
            if not isinstance(m, (ENHParams, ESSpec)):
                raise DomainError("marginals", f"unsupported marginal {m!r}")
        object.__setattr__(self, "marginals", margs)
        g = self.dependence
        if g is not None and len(margs) >= 2:
            report = check_n_monotone(g, len(margs))
            if not report.holds:
                raise DomainError(
                    "dependence", f"{g} fails {len(margs)}-monotonicity near t={report.witness}"
                )

    @property
    def n(self) -> int:
        return len(self.marginals)

    @property
    def independent(self) -> bool:
        return self.dependence is None or self.dependence == INDEPENDENCE

    @property
    def common_scale(self) -> bool:
        """Whether every marginal shares one scale ``lam``."""
        return len({m.lam for m in self.marginals}) == 1

    def collapsed_max(self) -> ENHParams | None:
        """The maximum as a single ENH law when all components share alpha and lam."""
        if not self.independent or not all(isinstance(m, ENHParams) for m in self.marginals):
            return None
        if len({(m.alpha, m.lam) for m in self.marginals}) != 1:
            return None
        m0 = self.marginals[0]
        return ENHParams(m0.alpha, m0.lam, sum(m.beta for m in self.marginals))


def _stack(values):
    return np.stack([np.asarray(v, dtype=float) for v in values])


class ParallelSystem(_LifetimeMixin):
    """Lifetime of a parallel system: ``max_i X_i`` for independent ``X_i``."""

    def __init__(self, sample: SampleSpec | Sequence[Marginal]):
        if not isinstance(sample, SampleSpec):
            sample = SampleSpec(tuple(sample))
        if not sample.independent:
            raise DomainError("dependence", "parallel-system law is implemented for independent components")
        self.sample = sample
        self._closed = sample.collapsed_max()

    def __repr__(self) -> str:
        return f"ParallelSystem({list(self.sample.marginals)!r})"

    def logcdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        if self._closed is not None:
            return self._closed.logcdf(x)
        return _stack([m.logcdf(x) for m in self.sample.marginals]).sum(axis=0)

    def logpdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        if self._closed is not None:
            return self._closed.logpdf(x)
        lc = _stack([m.logcdf(x) for m in self.sample.marginals])
        lp = _stack([m.logpdf(x) for m in self.sample.marginals])
        # sum_i f_i prod_{j != i} F_j; no division, so x = 0 stays finite
        others = np.stack([np.delete(lc, i, axis=0).sum(axis=0) for i in range(lc.shape[0])])
        with np.errstate(invalid="ignore"):
            return logsumexp(lp + others, axis=0)

    def quantile(self, u: ArrayLike):
        scalar = np.ndim(u) == 0
        u = check_open_unit("u", u)
        if self._closed is not None:
            return self._closed.quantile(u)
        n = self.sample.n
        margs = self.sample.marginals
        lo = np.max(_stack([m.quantile(u) for m in margs]), axis=0)
        hi = np.max(_stack([m.quantile(u ** (1.0 / n)) for m in margs]), axis=0)
        q = invert_increasing(self.logcdf, np.log(u), lo, hi)
        return _scalar_or_array(q, scalar)


class SeriesSystem(_LifetimeMixin):
    """Lifetime of a series system: ``min_i X_i`` under an Archimedean survival copula."""

    def __init__(self, sample: SampleSpec | Sequence[Marginal], generator: ArchGenerator | None = None):
        if not isinstance(sample, SampleSpec):
            sample = SampleSpec(tuple(sample), generator)
        self.sample = sample
        self.generator = sample.dependence or INDEPENDENCE

    def __repr__(self) -> str:
        return f"SeriesSystem({list(self.sample.marginals)!r}, {self.generator})"

    def logsf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        lsf = _stack([m.logsf(x) for m in self.sample.marginals])
        if self.generator == INDEPENDENCE:
            return lsf.sum(axis=0)
        # t = sum_i psi(S_i) overflows deep in the tail; carry log t instead
        with np.errstate(divide="ignore", invalid="ignore"):
            log_t = np.logaddexp.reduce(self.generator.log_psi_log(lsf), axis=0)
        return self.generator.log_phi_from_log(log_t)

    def logcdf(self, x: ArrayLike) -> NDArray[np.float64]:
        return log1mexp(self.logsf(x))

    def logpdf(self, x: ArrayLike) -> NDArray[np.float64]:
        x = check_nonnegative("x", x)
        g = self.generator
        lsf = _stack([m.logsf(x) for m in self.sample.marginals])
        lp = _stack([m.logpdf(x) for m in self.sample.marginals])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if g == INDEPENDENCE:
                total = lsf.sum(axis=0)
                return logsumexp(lp + total - lsf, axis=0)
            log_s = g.log_psi_log(lsf)
            log_t = logsumexp(log_s, axis=0)
            # -d/dx phi(sum psi(S_i)) = sum_i f_i phi'(t) / phi'(psi(S_i))
            log_ratio = g.log_neg_dphi_from_log(log_t) - g.log_neg_dphi_from_log(log_s)
            return logsumexp(lp + log_ratio, axis=0)

    def quantile(self, u: ArrayLike):
        scalar = np.ndim(u) == 0
        u = check_open_unit("u", u)
        margs = self.sample.marginals
        n = self.sample.n
        # 1 - C(S) lies between max_i F_i and min(1, sum_i F_i)
        lo = np.min(_stack([m.quantile(u / n) for m in margs]), axis=0)
        hi = np.min(_stack([m.quantile(u) for m in margs]), axis=0)
        q = invert_increasing(self.logcdf, np.log(u), lo, hi)
        return _scalar_or_array(q, scalar)


def extreme(sample: SampleSpec, kind: ExtremeKind | str):
    kind = ExtremeKind(kind)
    return ParallelSystem(sample) if kind is ExtremeKind.MAX else SeriesSystem(sample)


def max_cdf(s: SampleSpec, x: ArrayLike):
    """``prod_i F_i(x)`` for an independent sample."""
    return ParallelSystem(s).cdf(x)


def max_pdf_common(alpha: float, lam: float, betas: ArrayLike, x: ArrayLike):
    """Density of the maximum when all components share ``alpha`` and ``lam``."""
    betas = np.asarray(betas, dtype=float)
    if betas.size == 0 or np.any(betas <= 0):
        raise DomainError("betas", "need a nonempty vector of positive values")
    return ENHParams(alpha, lam, float(betas.sum())).pdf(x)


def max_density_ratio(alpha: float, lam: float, betas: ArrayLike, betas_star: ArrayLike, x: ArrayLike):
    """``f_max / f*_max = (s / s*) * F_NH(x)**(s - s*)`` with ``s = sum(betas)``."""
    s = float(np.sum(betas))
    s_star = float(np.sum(betas_star))
    if s <= 0 or s_star <= 0:
        raise DomainError("betas", "sums must be positive")
    scalar = np.ndim(x) == 0
    log_f = ENHParams(alpha, lam, 1.0).log_nh_cdf(x)
    if s == s_star:
        out = np.full_like(log_f, 1.0)
    else:
        out = np.exp(np.log(s / s_star) + (s - s_star) * log_f)
    return _scalar_or_array(out, scalar)


def min_sf_archimedean(s: SampleSpec, x: ArrayLike):
    """``phi(sum_i psi(1 - F_i(x)))``; independent samples use the product."""
    return SeriesSystem(s).sf(x)


def min_sf_independent(s: SampleSpec, x: ArrayLike):
    if not s.independent:
        raise DomainError("dependence", "sample is not independent")
    scalar = np.ndim(x) == 0
    x = check_nonnegative("x", x)
    out = np.exp(_stack([m.logsf(x) for m in s.marginals]).sum(axis=0))
    return _scalar_or_array(out, scalar)
