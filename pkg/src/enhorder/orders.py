"""Grid-certified checkers for seven stochastic orders.

Every checker takes two distribution handles ``F`` and ``G`` (objects with
vectorised ``cdf``, ``sf``, ``pdf`` and ``quantile``) and tests whether
``X ~ F`` is smaller than ``Y ~ G`` in the given order:

==================  =====================================================
``st``              ``sf_F(x) <= sf_G(x)``
``hr``              ``h_F(x) >= h_G(x)``
``lr``              ``g(x) / f(x)`` nondecreasing
``disp``            ``G^-1(u) - F^-1(u)`` nondecreasing in ``u``
``rs``              ``int_{F^-1(u)}^inf sf_F <= int_{G^-1(u)}^inf sf_G``
``convex``          ``G^-1(F(x))`` convex
``lorenz``          ``L_F(u) >= L_G(u)`` (standard Lorenz curves)
==================  =====================================================

A verdict only certifies the scanned grid. Pointwise orders (st, hr, lr) are
evaluated on the union of both distributions' quantile images of the
probability grid, extended by a few geometric points towards the support
edge; the others work on the probability grid itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad

from ._numeric import DomainError, interval_integrals
from .dist import DEFAULT_GRID_POINTS, DEFAULT_U_MAX, DEFAULT_U_MIN

__all__ = [
    "DistHandle",
    "OrderName",
    "OrderVerdict",
    "ProbGrid",
    "TOL",
    "check_order",
    "check_st",
    "check_hr",
    "check_lr",
    "check_disp",
    "check_rs",
    "check_convex_transform",
    "check_lorenz",
    "lorenz_curve",
    "right_spread",
    "mean",
]


class DistHandle(Protocol):
    """Anything with vectorised ``cdf/sf/pdf/quantile``.

    An optional ``support_lower`` attribute gives the left end of the
    support; it defaults to 0, which is right for every lifetime law here.
    """

    def cdf(self, x): ...
    def sf(self, x): ...
    def pdf(self, x): ...
    def quantile(self, u): ...


class OrderName(str, enum.Enum):
    ST = "st"
    HR = "hr"
    LR = "lr"
    DISP = "disp"
    RS = "rs"
    CONVEX = "convex"
    LORENZ = "lorenz"


# pointwise/monotonicity tolerance, and the looser one for second differences
TOL = 1e-9
CONVEX_TOL = 1e-7


@dataclass(frozen=True)
class ProbGrid:
    """Strictly increasing probabilities inside ``(0, 1)``."""

    u: NDArray[np.float64] = field(
        default_factory=lambda: np.linspace(DEFAULT_U_MIN, DEFAULT_U_MAX, DEFAULT_GRID_POINTS)
    )

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 1 or u.size < 3:
            raise DomainError("grid", "need a one-dimensional grid of at least 3 points")
        if np.any(u <= 0) or np.any(u >= 1):
            raise DomainError("grid", "grid probabilities must lie in (0, 1)")
        if np.any(np.diff(u) <= 0):
            raise DomainError("grid", "grid must be strictly increasing")
        object.__setattr__(self, "u", u)

    @classmethod
    def uniform(cls, n: int = DEFAULT_GRID_POINTS, u_min: float = DEFAULT_U_MIN,
                u_max: float = DEFAULT_U_MAX) -> "ProbGrid":
        if not 0.0 < u_min < u_max < 1.0:
            raise DomainError("grid", f"need 0 < u_min < u_max < 1, got {u_min}, {u_max}")
        return cls(np.linspace(u_min, u_max, int(n)))

    def refined(self) -> "ProbGrid":
        """Grid with every gap bisected (twice the resolution, same range)."""
        mids = 0.5 * (self.u[:-1] + self.u[1:])
        return ProbGrid(np.sort(np.concatenate([self.u, mids])))

    @property
    def range(self) -> tuple[float, float]:
        return float(self.u[0]), float(self.u[-1])


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of an order check.

    ``worst_margin`` is the smallest (scaled) slack of the defining
    inequality, so ``holds`` is exactly ``worst_margin >= -tol``. ``witness``
    is the ``x`` (pointwise orders) or ``u`` (quantile orders) where it occurs.
    """

    order: OrderName
    holds: bool
    worst_margin: float
    witness: float
    tol: float
    grid_range: tuple[float, float]
    grid_points: int
    skipped: int = 0
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {
            "order": self.order.value,
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "witness": self.witness,
            "tol": self.tol,
            "grid": {"u_min": self.grid_range[0], "u_max": self.grid_range[1],
                     "points": self.grid_points},
            "skipped": self.skipped,
            "note": self.note,
        }


def _verdict(order, margins, where, tol, grid, skipped=0, note="") -> OrderVerdict:
    margins = np.asarray(margins, dtype=float)
    if margins.size == 0:
        return OrderVerdict(order, False, float("nan"), float("nan"), tol, grid.range,
                            grid.u.size, skipped, note or "no evaluable grid points")
    k = int(np.argmin(margins))
    worst = float(margins[k])
    return OrderVerdict(order, worst >= -tol, worst, float(where[k]), tol, grid.range,
                        grid.u.size, skipped, note)


# geometric points below the smallest grid quantile, down to 1e-6 of the gap
# to the support edge: the usual order integrates the hazard from the edge, so
# hazard/density orders must see that stretch to stay consistent with it
_LEFT_EDGE_FACTORS = np.geomspace(1e-6, 1.0, 13)[:-1]
# the same idea on the probability scale, for the quantile-difference check
_LEFT_EDGE_U_FACTORS = np.geomspace(1e-8, 1.0, 17)[:-1]


def _x_grid(F, G, grid: ProbGrid) -> NDArray[np.float64]:
    x = np.concatenate([np.asarray(F.quantile(grid.u)), np.asarray(G.quantile(grid.u))])
    x = x[np.isfinite(x)]
    lower = max(_support_lower(F), _support_lower(G))
    x = x[x > lower]
    if x.size:
        x = np.concatenate([lower + (x.min() - lower) * _LEFT_EDGE_FACTORS, x])
    return np.unique(x)


def _support_lower(handle) -> float:
    return float(getattr(handle, "support_lower", 0.0))


def _log(handle, name: str, x):
    fn = getattr(handle, "log" + name, None)
    if fn is not None:
        return np.asarray(fn(x), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(getattr(handle, name)(x), dtype=float))


def check_st(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_st Y``: survival of ``F`` nowhere above that of ``G``."""
    grid = grid or ProbGrid()
    x = _x_grid(F, G, grid)
    margin = np.asarray(G.sf(x)) - np.asarray(F.sf(x))
    return _verdict(OrderName.ST, margin, x, TOL, grid)


def check_hr(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_hr Y``: ``h_F >= h_G``; margins are relative to ``max(1, h)``.

    Points where either hazard overflows are skipped and counted.
    """
    grid = grid or ProbGrid()
    x = _x_grid(F, G, grid)
    with np.errstate(over="ignore", invalid="ignore"):
        hf = np.exp(_log(F, "pdf", x) - _log(F, "sf", x))
        hg = np.exp(_log(G, "pdf", x) - _log(G, "sf", x))
    ok = np.isfinite(hf) & np.isfinite(hg)
    margin = (hf[ok] - hg[ok]) / np.maximum(1.0, np.maximum(hf[ok], hg[ok]))
    return _verdict(OrderName.HR, margin, x[ok], TOL, grid, skipped=int((~ok).sum()))


def check_lr(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_lr Y``: ``g / f`` nondecreasing, tested on ``log g - log f``.

    Points with a zero or infinite density are skipped and counted.
    """
    grid = grid or ProbGrid()
    x = _x_grid(F, G, grid)
    r = _log(G, "pdf", x) - _log(F, "pdf", x)
    ok = np.isfinite(r)
    x, r = x[ok], r[ok]
    return _verdict(OrderName.LR, np.diff(r), x[1:], TOL, grid, skipped=int((~ok).sum()))


def check_disp(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_disp Y`` via monotonicity of ``G^-1(u) - F^-1(u)``.

    Equivalent to the two-point definition for continuous, strictly
    increasing distribution functions. The support lower bounds act as the
    ``u = 0`` anchor, so a difference that is monotone on the grid but starts
    below its left-end value is still caught. Increments are measured
    relative to the size of the quantiles involved. Like the pointwise
    orders, the scan reaches below ``u_min`` (down to ``u_min * 1e-8``).
    """
    grid = grid or ProbGrid()
    u = np.concatenate([grid.u[0] * _LEFT_EDGE_U_FACTORS, grid.u])
    qf = np.concatenate([[_support_lower(F)], np.asarray(F.quantile(u))])
    qg = np.concatenate([[_support_lower(G)], np.asarray(G.quantile(u))])
    d = qg - qf
    # relative to the quantiles themselves: near the support edge they are
    # tiny, and an absolute slack there would hide real crossings
    scale = np.maximum(np.maximum(np.abs(qf), np.abs(qg)), np.finfo(float).tiny)[1:]
    return _verdict(OrderName.DISP, np.diff(d) / scale, u, TOL, grid)


@dataclass(frozen=True)
class _SurvivalIntegrals:
    x: NDArray[np.float64]      # quantiles at the grid
    above: NDArray[np.float64]  # int_{x_k}^inf sf
    mean: float
    tail_error: float


def _tail_integral(D: DistHandle, x0: float) -> tuple[float, float]:
    """``int_{x0}^inf sf`` computed as ``int sf(e^s) e^s ds``.

    Heavy (stretched-exponential) tails decay slowly in ``x`` but fast in
    ``log x``; the upper limit is where the integrand drops below ``e^-50``.
    """
    if x0 <= 0:
        x0 = float(np.finfo(float).tiny)
    s0 = np.log(x0)

    logsf = getattr(D, "logsf", None) or (lambda t: np.log(D.sf(t)))

    def log_integrand(s: float) -> float:
        with np.errstate(divide="ignore"):
            return float(logsf(np.exp(s))) + s

    s1 = s0 + 1.0
    while log_integrand(s1) > -50.0 and s1 < 700.0:
        s1 += 1.0
    return quad(lambda s: np.exp(log_integrand(s)), s0, s1, epsabs=1e-12, epsrel=1e-12, limit=200)


def _survival_integrals(D: DistHandle, u: NDArray[np.float64]) -> _SurvivalIntegrals:
    """Integrals of ``sf`` above each grid quantile, and the mean.

    Gaps between consecutive quantiles carry ``1/len(u)`` of the mass each,
    so a 16-point Gauss-Legendre rule is exact to rounding there; the pieces
    ``[0, x_0]`` and ``[x_last, inf)`` go to adaptive quadrature.
    """
    x = np.asarray(D.quantile(u), dtype=float)
    sf = lambda t: np.asarray(D.sf(np.maximum(t, 0.0)), dtype=float)  # noqa: E731
    pieces = interval_integrals(sf, x)
    tail, tail_err = _tail_integral(D, float(x[-1]))
    head, head_err = quad(lambda t: float(D.sf(t)), 0.0, x[0], epsabs=1e-14, epsrel=1e-13, limit=200)
    above = tail + np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    return _SurvivalIntegrals(x, above, float(head + above[0]), float(tail_err + head_err))


def right_spread(D: DistHandle, u: NDArray[np.float64]) -> NDArray[np.float64]:
    """``int_{D^-1(u)}^inf sf_D(x) dx`` for each ``u``."""
    return _survival_integrals(D, np.asarray(u, dtype=float)).above


def mean(D: DistHandle, grid: ProbGrid | None = None) -> float:
    grid = grid or ProbGrid()
    return _survival_integrals(D, grid.u).mean


def lorenz_curve(D: DistHandle, u: NDArray[np.float64]) -> NDArray[np.float64]:
    """Standard Lorenz curve ``(1/E) int_0^u D^-1(t) dt``.

    Uses ``int_0^u D^-1 = E - int_u^1 D^-1`` and
    ``int_u^1 D^-1 = (1 - u) D^-1(u) + int_{D^-1(u)}^inf sf``.
    """
    u = np.asarray(u, dtype=float)
    si = _survival_integrals(D, u)
    return 1.0 - ((1.0 - u) * si.x + si.above) / si.mean


def check_rs(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_RS Y``: integrated survival beyond matching quantiles is ordered."""
    grid = grid or ProbGrid()
    sf_f = _survival_integrals(F, grid.u)
    sf_g = _survival_integrals(G, grid.u)
    if not (np.isfinite(sf_f.mean) and np.isfinite(sf_g.mean)):
        return OrderVerdict(OrderName.RS, False, float("nan"), float("nan"), TOL, grid.range,
                            grid.u.size, note="inapplicable: nonfinite mean")
    scale = np.maximum(1.0, np.maximum(sf_f.above, sf_g.above))
    return _verdict(OrderName.RS, (sf_g.above - sf_f.above) / scale, grid.u, TOL, grid)


def check_convex_transform(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_c Y``: ``G^-1(F(x))`` convex along ``x = F^-1(u)``.

    Convexity is read off the slopes of the piecewise-linear interpolant
    through the grid points and the support anchor ``(F_low, G_low)``; each
    slope increment must exceed ``-1e-7 * max(1, |slope|)``.
    """
    grid = grid or ProbGrid()
    x = np.concatenate([[_support_lower(F)], np.asarray(F.quantile(grid.u), dtype=float)])
    y = np.concatenate([[_support_lower(G)], np.asarray(G.quantile(grid.u), dtype=float)])
    slope = np.diff(y) / np.diff(x)
    ds = np.diff(slope)
    scale = np.maximum(1.0, np.maximum(np.abs(slope[:-1]), np.abs(slope[1:])))
    return _verdict(OrderName.CONVEX, ds / scale, x[1:-1], CONVEX_TOL, grid)


def check_lorenz(F: DistHandle, G: DistHandle, grid: ProbGrid | None = None) -> OrderVerdict:
    """``X <=_Lorenz Y``: ``L_F(u) >= L_G(u)`` on the grid."""
    grid = grid or ProbGrid()
    sf_f = _survival_integrals(F, grid.u)
    sf_g = _survival_integrals(G, grid.u)
    if not (np.isfinite(sf_f.mean) and np.isfinite(sf_g.mean)) or sf_f.mean <= 0 or sf_g.mean <= 0:
        return OrderVerdict(OrderName.LORENZ, False, float("nan"), float("nan"), TOL, grid.range,
                            grid.u.size, note="inapplicable: nonfinite mean")
    u = grid.u
    lf = 1.0 - ((1.0 - u) * sf_f.x + sf_f.above) / sf_f.mean
    lg = 1.0 - ((1.0 - u) * sf_g.x + sf_g.above) / sf_g.mean
    return _verdict(OrderName.LORENZ, lf - lg, u, TOL, grid)


_CHECKERS = {
    OrderName.ST: check_st,
    OrderName.HR: check_hr,
    OrderName.LR: check_lr,
    OrderName.DISP: check_disp,
    OrderName.RS: check_rs,
    OrderName.CONVEX: check_convex_transform,
    OrderName.LORENZ: check_lorenz,
}


def check_order(name: OrderName | str, F: DistHandle, G: DistHandle,
                grid: ProbGrid | None = None) -> OrderVerdict:
    return _CHECKERS[OrderName(name)](F, G, grid)
