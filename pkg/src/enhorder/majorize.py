"""Majorization preorders on real vectors.

Conventions: ``x`` sorted increasingly is ``x_(1) <= ... <= x_(n)``.

* ``is_weak_submajorized(x, y)``:   suffix sums of ``x`` never exceed those of ``y``
* ``is_weak_supermajorized(x, y)``: prefix sums of ``x`` are at least those of ``y``
* ``is_majorized(x, y)``:           equal totals and the supermajorization prefix condition

Comparisons carry a relative slack of ``1e-12 * n`` for floating prefix sums.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._numeric import DomainError

__all__ = [
    "is_majorized",
    "is_weak_submajorized",
    "is_weak_supermajorized",
    "random_comparable_pair",
]

Relation = Literal["m", "w_sub", "w_super"]


def _prepare(x: ArrayLike, y: ArrayLike):
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    if x.size != y.size:
        raise DomainError("y", f"length mismatch: {x.size} != {y.size}")
    if x.size == 0:
        raise DomainError("x", "empty vector")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("x", "entries must be finite")
    slack = 1e-12 * x.size * max(1.0, np.abs(x).sum(), np.abs(y).sum())
    return x, y, slack


def is_weak_submajorized(x: ArrayLike, y: ArrayLike) -> bool:
    x, y, slack = _prepare(x, y)
    sx = np.cumsum(x[::-1])
    sy = np.cumsum(y[::-1])
    return bool(np.all(sx <= sy + slack))


def is_weak_supermajorized(x: ArrayLike, y: ArrayLike) -> bool:
    x, y, slack = _prepare(x, y)
    return bool(np.all(np.cumsum(x) >= np.cumsum(y) - slack))


def is_majorized(x: ArrayLike, y: ArrayLike) -> bool:
    x, y, slack = _prepare(x, y)
    px, py = np.cumsum(x), np.cumsum(y)
    if abs(px[-1] - py[-1]) > slack:
        return False
    return bool(np.all(px[:-1] >= py[:-1] - slack))


def random_comparable_pair(
    n: int,
    relation: Relation = "m",
    seed: int | np.random.Generator | None = 0,
    domain: tuple[float, float] = (0.1, 5.0),
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Draw ``(x, y)`` with ``x`` below ``y`` in the requested preorder.

    ``y`` is uniform on ``domain``; ``x`` comes from 1-5 Robin Hood transfers
    (each moves part of the gap between a larger and a smaller entry), which
    keeps ``x`` majorized by ``y``. For ``w_super`` entries of ``x`` are then
    pushed up, for ``w_sub`` pushed down, staying inside ``domain``.
    """
    if n < 2:
        raise DomainError("n", "need n >= 2")
    lo, hi = domain
    if not 0 < lo < hi:
        raise DomainError("domain", "need 0 < lo < hi")
    if relation not in ("m", "w_sub", "w_super"):
        raise DomainError("relation", f"unknown relation {relation!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    y = rng.uniform(lo, hi, size=n)
    x = y.copy()
    for _ in range(int(rng.integers(1, 6))):
        i, j = rng.choice(n, size=2, replace=False)
        if x[i] < x[j]:
            i, j = j, i
        # x[i] >= x[j]; move a fraction of at most half the gap
        amount = rng.uniform(0.0, 0.5) * (x[i] - x[j])
        x[i] -= amount
        x[j] += amount
    if relation == "w_super":
        x = x + rng.uniform(0.0, 1.0, size=n) * rng.integers(0, 2, size=n) * (hi - x)
    elif relation == "w_sub":
        x = x - rng.uniform(0.0, 1.0, size=n) * rng.integers(0, 2, size=n) * (x - lo)
    return x, y
