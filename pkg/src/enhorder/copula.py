"""Archimedean generators and the copulas they induce.

A generator ``phi`` maps ``[0, inf)`` onto ``(0, 1]`` with ``phi(0) = 1``;
its inverse ``psi`` sends probabilities back. The copula is
``phi(psi(u_1) + ... + psi(u_n))``.

Only strict generators are provided (``phi > 0`` everywhere), so ``psi`` is a
true inverse. Generators also evaluate ``psi`` from ``log u``: survival
probabilities deep in the right tail underflow long before their logarithms
do, and ``psi`` diverges exactly there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._numeric import DomainError, check_nonnegative, log_expm1

__all__ = [
    "ArchGenerator",
    "INDEPENDENCE",
    "gumbel",
    "clayton",
    "CompositionReport",
    "MonotoneReport",
    "gen_phi",
    "gen_psi",
    "check_n_monotone",
    "check_super_additive",
    "copula_value",
    "default_monotone_grid",
    "default_scan_grid",
]

Family = Literal["independence", "gumbel", "clayton"]


@dataclass(frozen=True)
class ArchGenerator:
    """Strict Archimedean generator from a named family.

    ============  =======================  ==================
    family        phi(t)                   theta
    ============  =======================  ==================
    independence  exp(-t)                  ignored (1)
    gumbel        exp(-t**(1/theta))       theta >= 1
    clayton       (1 + t)**(-1/theta)      theta > 0
    ============  =======================  ==================
    """

    family: Family = "independence"
    theta: float = 1.0

    def __post_init__(self):
        theta = float(self.theta)
        if self.family == "independence":
            theta = 1.0
        elif self.family == "gumbel":
            if not (np.isfinite(theta) and theta >= 1.0):
                raise DomainError("theta", f"Gumbel generator needs theta >= 1, got {theta}")
        elif self.family == "clayton":
            if not (np.isfinite(theta) and theta > 0.0):
                raise DomainError("theta", f"Clayton generator needs theta > 0, got {theta}")
        else:
            raise DomainError("family", f"unknown generator family {self.family!r}")
        object.__setattr__(self, "theta", theta)

    def __str__(self) -> str:
        if self.family == "independence":
            return "Independence"
        return f"{self.family.capitalize()}({self.theta:g})"

    def log_phi(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        if self.family == "independence":
            return -t
        if self.family == "gumbel":
            return -(t ** (1.0 / self.theta))
        return -np.log1p(t) / self.theta

    def phi(self, t: ArrayLike) -> NDArray[np.float64]:
        return np.exp(self.log_phi(t))

    def dphi(self, t: ArrayLike) -> NDArray[np.float64]:
        """First derivative of ``phi`` (negative; ``-inf`` at 0 for Gumbel theta > 1)."""
        t = np.asarray(t, dtype=float)
        th = self.theta
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.family == "independence":
                return -np.exp(-t)
            if self.family == "gumbel":
                s = t ** (1.0 / th)
                return -np.exp(-s) * s / (th * t)
            return -np.exp(-(1.0 / th + 1.0) * np.log1p(t)) / th

    def log_phi_from_log(self, log_t: ArrayLike) -> NDArray[np.float64]:
        """``log(phi(t))`` from ``log t``, for sums of ``psi`` too large for floats."""
        lt = np.asarray(log_t, dtype=float)
        with np.errstate(over="ignore"):
            if self.family == "independence":
                return -np.exp(lt)
            if self.family == "gumbel":
                return -np.exp(lt / self.theta)
            return -np.logaddexp(0.0, lt) / self.theta

    def log_neg_dphi_from_log(self, log_t: ArrayLike) -> NDArray[np.float64]:
        """``log(-phi'(t))`` from ``log t``."""
        lt = np.asarray(log_t, dtype=float)
        th = self.theta
        with np.errstate(over="ignore", invalid="ignore"):
            if self.family == "independence":
                return -np.exp(lt)
            if self.family == "gumbel":
                return -np.exp(lt / th) + lt / th - np.log(th) - lt
            return -(1.0 / th + 1.0) * np.logaddexp(0.0, lt) - np.log(th)

    def psi_log(self, log_u: ArrayLike) -> NDArray[np.float64]:
        """``psi(u)`` evaluated from ``log u`` (``log u <= 0``)."""
        lu = np.asarray(log_u, dtype=float)
        with np.errstate(over="ignore"):
            if self.family == "independence":
                return -lu
            if self.family == "gumbel":
                return (-lu) ** self.theta
            return np.expm1(-self.theta * lu)

    def log_psi_log(self, log_u: ArrayLike) -> NDArray[np.float64]:
        """``log(psi(u))`` from ``log u``; finite wherever ``0 < u < 1``."""
        lu = np.asarray(log_u, dtype=float)
        with np.errstate(divide="ignore"):
            if self.family == "independence":
                return np.log(-lu)
            if self.family == "gumbel":
                return self.theta * np.log(-lu)
            return log_expm1(-self.theta * lu)

    def psi(self, u: ArrayLike) -> NDArray[np.float64]:
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return self.psi_log(np.log(u))


INDEPENDENCE = ArchGenerator("independence")


def gumbel(theta: float) -> ArchGenerator:
    return ArchGenerator("gumbel", theta)


def clayton(theta: float) -> ArchGenerator:
    return ArchGenerator("clayton", theta)


def gen_phi(g: ArchGenerator, t: ArrayLike):
    scalar = np.ndim(t) == 0
    t = check_nonnegative("t", t)
    out = g.phi(t)
    return float(out) if scalar else out


def gen_psi(g: ArchGenerator, u: ArrayLike):
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u <= 0) or np.any(u > 1):
        raise DomainError("u", "must lie in (0, 1]")
    out = g.psi(u)
    return float(out) if scalar else out


def copula_value(g: ArchGenerator, u: ArrayLike) -> float:
    """``phi(sum psi(u_i))``; a zero coordinate gives zero."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise DomainError("u", "expected a nonempty vector of probabilities")
    if np.any(np.isnan(u)) or np.any(u < 0) or np.any(u > 1):
        raise DomainError("u", "every coordinate must lie in [0, 1]")
    if np.any(u == 0):
        return 0.0
    return float(g.phi(np.sum(g.psi(u))))


@dataclass(frozen=True)
class MonotoneReport:
    holds: bool
    order: int | None = None
    witness: float | None = None
    margin: float = 0.0

    def __bool__(self) -> bool:
        return self.holds


def default_monotone_grid() -> NDArray[np.float64]:
    return np.geomspace(1e-2, 20.0, 40)


def _divided_differences(t: NDArray[np.float64], f: NDArray[np.float64], order: int):
    """Return (value, magnitude) arrays of the ``order``-th divided differences.

    ``magnitude`` bounds the size of the terms that cancel in the value, so a
    relative tolerance against it tracks the rounding error.
    """
    m = t.size - order
    idx = np.arange(m)[:, None] + np.arange(order + 1)[None, :]
    tt = t[idx]
    ff = f[idx]
    denom = np.ones_like(tt)
    for j in range(order + 1):
        for k in range(order + 1):
            if j != k:
                denom[:, j] *= tt[:, j] - tt[:, k]
    terms = ff / denom
    return terms.sum(axis=1), np.abs(terms).sum(axis=1)


def check_n_monotone(
    g: ArchGenerator | Callable[[NDArray[np.float64]], NDArray[np.float64]],
    n: int,
    grid: ArrayLike | None = None,
    rtol: float = 1e-8,
) -> MonotoneReport:
    """Numerically check that ``phi`` is ``n``-monotone on ``grid``.

    Requires ``(-1)**k phi^(k) >= 0`` for ``k <= n - 2`` and that
    ``(-1)**(n-2) phi^(n-2)`` is decreasing and convex; in divided-difference
    form that is ``(-1)**k * phi[t_0..t_k] >= 0`` for every ``k <= n``.
    ``g`` may be a generator or any vectorised callable.
    """
    if n < 2:
        raise DomainError("n", "n-monotonicity is defined for n >= 2")
    phi = g.phi if isinstance(g, ArchGenerator) else g
    t = default_monotone_grid() if grid is None else np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size < n + 1 or np.any(np.diff(t) <= 0):
        raise DomainError("grid", f"need a strictly increasing grid with more than {n} points")
    f = np.asarray(phi(t), dtype=float)
    worst = np.inf
    for k in range(n + 1):
        dd, mag = _divided_differences(t, f, k)
        signed = (-1) ** k * dd
        scaled = signed / np.maximum(mag, 1e-300)
        bad = np.flatnonzero(scaled < -rtol)
        if bad.size:
            i = bad[0]
            return MonotoneReport(False, k, float(t[i]), float(scaled[i]))
        worst = min(worst, float(scaled.min()))
    return MonotoneReport(True, None, None, worst)


@dataclass(frozen=True)
class CompositionReport:
    """Result of a super-additivity scan of ``psi_outer o phi_inner``.

    ``worst_margin`` is ``f(x+y) - f(x) - f(y)`` divided by
    ``max(1, f(x+y))``; the scaling keeps the verdict meaningful when ``f``
    grows like a power of ``1e4``.
    """

    super_additive: bool
    worst_margin: float
    witness: tuple[float, float]
    scan_range: tuple[float, float]

    def __bool__(self) -> bool:
        return self.super_additive


def default_scan_grid() -> NDArray[np.float64]:
    return np.geomspace(1e-4, 1e4, 64)


SUPER_ADDITIVE_TOL = 1e-10


def _log_composition(outer: ArchGenerator, inner: ArchGenerator, t):
    return outer.log_psi_log(inner.log_phi(t))


def check_super_additive(
    outer: ArchGenerator, inner: ArchGenerator, grid: ArrayLike | None = None
) -> CompositionReport:
    """Scan ``f = psi_outer o phi_inner`` for ``f(x+y) >= f(x) + f(y)`` on ``grid x grid``."""
    t = default_scan_grid() if grid is None else np.asarray(grid, dtype=float)
    if np.any(t <= 0):
        raise DomainError("grid", "super-additivity is scanned on positive reals")
    scan_range = (float(t.min()), float(t.max()))
    if outer == inner:
        # f is the identity: additive, margin exactly zero
        return CompositionReport(True, 0.0, (float(t[0]), float(t[0])), scan_range)
    x, y = np.meshgrid(t, t, indexing="ij")
    lf_x = _log_composition(outer, inner, x)
    lf_y = _log_composition(outer, inner, y)
    lf_xy = _log_composition(outer, inner, x + y)
    lf_sum = np.logaddexp(lf_x, lf_y)
    with np.errstate(over="ignore", invalid="ignore"):
        # ratio form once f(x+y) > 1, plain difference below
        ratio_margin = -np.expm1(lf_sum - lf_xy)
        plain_margin = np.exp(lf_xy) - np.exp(lf_sum)
    margin = np.where(lf_xy > 0, ratio_margin, plain_margin)
    margin = np.where(np.isnan(margin), -np.inf, margin)
    i, j = np.unravel_index(np.argmin(margin), margin.shape)
    worst = float(margin[i, j])
    return CompositionReport(
        super_additive=worst >= -SUPER_ADDITIVE_TOL,
        worst_margin=worst,
        witness=(float(t[i]), float(t[j])),
        scan_range=scan_range,
    )
