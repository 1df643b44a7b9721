"""Small numerical kernels shared across modules."""

from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

_LN2 = np.log(2.0)

# 16-point Gauss-Legendre rule on [-1, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation.

    ``field`` names the offending parameter so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def log1mexp(a: ArrayLike) -> NDArray[np.float64]:
    """Evaluate ``log(1 - exp(a))`` for ``a <= 0`` without cancellation."""
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    near = a > -_LN2
    with np.errstate(divide="ignore", invalid="ignore"):
        out[near] = np.log(-np.expm1(a[near]))
        out[~near] = np.log1p(-np.exp(a[~near]))
    return out


def log_expm1(a: ArrayLike) -> NDArray[np.float64]:
    """Evaluate ``log(exp(a) - 1)`` for ``a >= 0``, overflow-safe."""
    a = np.asarray(a, dtype=float)
    big = a > 30.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.where(big, a + np.log1p(-np.exp(-a)), np.log(np.expm1(a)))


def check_nonnegative(name: str, x: ArrayLike) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError(name, "must be nonnegative")
    return x


def check_open_unit(name: str, u: ArrayLike) -> NDArray[np.float64]:
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u <= 0) or np.any(u >= 1):
        raise DomainError(name, "must lie in the open interval (0, 1)")
    return u


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DomainError(name, f"must be a positive finite number, got {value!r}")
    return value


def invert_increasing(
    logcdf: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    log_u: NDArray[np.float64],
    lo: NDArray[np.float64],
    hi: NDArray[np.float64],
    rtol: float = 4e-16,
    max_iter: int = 200,
) -> NDArray[np.float64]:
    """Solve ``logcdf(x) = log_u`` on brackets ``[lo, hi]``, vectorised.

    ``logcdf`` must be nondecreasing. Steps are Illinois false position in
    ``log x`` (where lifetime log-CDFs are close to linear near zero). A
    bracket that fails to halve within four steps is bisected, geometrically
    while it spans several orders of magnitude; a zero lower end is first
    moved off zero by bisection. An entry is finished when its bracket is
    within ``rtol`` or when, inside a bracket narrower than ``1e-8``
    relative, the secant point rounds onto an endpoint; the endpoint with the
    smaller residual is then returned.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    log_u = np.broadcast_to(np.asarray(log_u, dtype=float), lo.shape)

    def resid(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.asarray(logcdf(x), dtype=float) - log_u

    r_lo, r_hi = resid(lo), resid(hi)  # true residuals at the endpoints
    f_lo, f_hi = r_lo.copy(), r_hi.copy()  # Illinois-weighted copies
    last = np.zeros(lo.shape, dtype=np.int8)  # +1: lo moved last step, -1: hi moved
    checkpoint = hi - lo
    settled = np.zeros(lo.shape, dtype=bool)
    for it in range(max_iter):
        active = ~settled & (hi - lo > rtol * hi)
        if not active.any():
            break
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            t_lo, t_hi = np.log(lo), np.log(hi)
            sec = np.exp(t_hi - f_hi * (t_hi - t_lo) / (f_hi - f_lo))
            bis = np.where(hi > 4.0 * lo, np.sqrt(lo * hi), 0.5 * (lo + hi))
            bis = np.where(lo == 0, 1e-3 * hi, bis)
        inside = np.isfinite(sec) & (sec > lo) & (sec < hi)
        settled |= active & np.isfinite(sec) & ~inside & (hi - lo <= 1e-8 * hi)
        usable = inside
        if it % 4 == 3:
            usable = usable & ~((hi - lo) > 0.5 * checkpoint)
            checkpoint = hi - lo
        step = active & ~settled
        mid = np.where(usable, sec, bis)
        f_mid = resid(np.where(step, mid, lo))
        below = step & (f_mid < 0)
        above = step & (f_mid > 0)
        exact = step & (f_mid == 0)
        f_hi = np.where(below & (last == 1), 0.5 * f_hi, f_hi)
        f_lo = np.where(above & (last == -1), 0.5 * f_lo, f_lo)
        lo = np.where(below | exact, mid, lo)
        hi = np.where(above | exact, mid, hi)
        r_lo = np.where(below | exact, f_mid, r_lo)
        r_hi = np.where(above | exact, f_mid, r_hi)
        f_lo = np.where(below | exact, f_mid, f_lo)
        f_hi = np.where(above | exact, f_mid, f_hi)
        last = np.where(below, 1, np.where(above, -1, last)).astype(np.int8)
    pick = np.where(np.abs(r_lo) <= np.abs(r_hi), lo, hi)
    return np.where(settled, pick, 0.5 * (lo + hi))


def interval_integrals(
    f: Callable[[NDArray[np.float64]], NDArray[np.float64]], edges: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Integrals of ``f`` over each ``[edges[k], edges[k+1]]`` (Gauss-Legendre)."""
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    return half * (vals @ _GL_WEIGHTS)
