"""Closed-form contact-separation machinery and the three-point refinement.

The gap function

    gap(k, eps) = (k - 1 - sin(2 k eps) / (2 sin eps)) / 2

equals ``|x(s) + x(t)|^2 / 4 - 1/2`` whenever ``s`` sits at arc distance
``eps`` from the antipode ``t + pi``.  Since the orbitope contains the ball of
radius ``1/sqrt(2)``, a contact ``s`` on the face through ``x(t)`` forces
``gap >= 0``, i.e. ``eps >= epsilon_star(k) > sqrt(3/2) k^{-3/2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .curve import eval_curve
from .exceptions import BracketFailure, CoincidentPoints, DomainError

_SERIES_CUTOFF = 1e-4


def thm31_bound(k: int) -> float:
    """Contact-separation constant ``sqrt(3/2) * k^{-3/2}``."""
    return math.sqrt(1.5) * k ** -1.5


def thm12_bound(k: int) -> float:
    """Arc-length constant ``sqrt(6) * k^{-3/2}``."""
    return math.sqrt(6.0) * k ** -1.5


def dirichlet_ratio(k: int, eps):
    """``sin(2 k eps) / (2 sin eps)`` = ``sum_{i=1..k} cos((2i-1) eps)``, with the limit k at 0."""
    eps = np.asarray(eps, dtype=float)
    small = np.abs(eps) < _SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.sin(2 * k * eps) / (2.0 * np.sin(eps))
    # sum f^2 and sum f^4 over odd f = 1, 3, ..., 2k-1
    s2 = k * (4 * k * k - 1) / 3.0
    s4 = k * (2 * k - 1) * (2 * k + 1) * (12 * k * k - 7) / 15.0
    e2 = eps * eps
    series = k - e2 * s2 / 2.0 + e2 * e2 * s4 / 24.0
    out = np.where(small, series, direct)
    return float(out) if out.ndim == 0 else out


def gap(k: int, eps):
    """Squared half-sum norm defect at antipodal offset ``eps`` (see module doc)."""
    return 0.5 * (k - 1 - dirichlet_ratio(k, eps))


def gap_upper_envelope(k: int, eps):
    """``-1/2 + k^3 eps^2 / 3``, valid as a strict upper bound of ``gap`` on ``(0, pi/(2k)]``."""
    e = np.asarray(eps, dtype=float)
    if np.any(e <= 0) or np.any(e > math.pi / (2 * k) * (1 + 1e-15)):
        raise DomainError(f"envelope needs 0 < eps <= pi/(2k) = {math.pi / (2 * k)}")
    out = -0.5 + k ** 3 * e * e / 3.0
    return float(out) if out.ndim == 0 else out


def bisect(f, lo: float, hi: float, tol: float, max_iter: int = 200) -> float:
    """Plain bisection; ``f(lo)`` and ``f(hi)`` must have opposite signs."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def epsilon_star(k: int, tol: float = 1e-13) -> float:
    """Smallest positive root of ``gap(k, .)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    hi = math.pi - 1e-12 if k == 1 else math.pi / (2 * k)
    return bisect(lambda e: gap(k, e), 0.0, hi, tol)


@dataclass(frozen=True)
class GapProfile:
    k: int
    epsilon_star: float
    thm31_bound: float
    thm12_bound: float

    @property
    def margin(self) -> float:
        return self.epsilon_star - self.thm31_bound

    @classmethod
    def compute(cls, k: int, tol: float = 1e-13) -> "GapProfile":
        return cls(k, epsilon_star(k, tol), thm31_bound(k), thm12_bound(k))

    def row(self) -> dict:
        return {"k": self.k, "epsilon_star": self.epsilon_star, "thm31_bound": self.thm31_bound,
                "thm12_bound": self.thm12_bound, "margin": self.margin}


def refined_point(spec, s: float, ti: float, tj: float, antipodal: bool = False) -> np.ndarray:
    """``x(s)/2 + (s-tj)/(2(ti-tj)) x(ti) + (ti-s)/(2(ti-tj)) x(tj)``.

    The three coefficients always sum to 1.  With ``antipodal=True`` the two
    interpolation weights use ``s - pi`` in place of ``s``: the result is then
    the convex combination of ``x(s)`` with the chord point of ``x(ti), x(tj)``
    interpolating towards the antipode of ``x(s)``, whose norm is second order
    in the distances.
    """
    if abs(ti - tj) < 1e-12:
        raise CoincidentPoints("ti and tj must differ")
    u = s - math.pi if antipodal else s
    wi = (u - tj) / (2.0 * (ti - tj))
    wj = (ti - u) / (2.0 * (ti - tj))
    x = eval_curve(spec, np.array([s, ti, tj]))
    return 0.5 * x[0] + wi * x[1] + wj * x[2]


def _refined_defect(k: int, eps: float, delta: float) -> float:
    """Squared norm minus 1/2 for ``ti = -eps``, ``s = pi``, ``tj = ti + delta``."""
    v = refined_point(k, math.pi, -eps, -eps + delta, antipodal=True)
    return float(v @ v) - 0.5


def _best_placement(k: int, eps: float) -> tuple[float, float]:
    # tj may not come closer to the antipode than ti does: delta >= 2 eps
    lo, hi = 2.0 * eps, 4.0 * eps
    grid = np.linspace(lo, hi, 17)
    vals = [_refined_defect(k, eps, d) for d in grid]
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda d: _refined_defect(k, eps, d), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-14})
    if res.fun < vals[i]:
        return float(res.x), float(res.fun)
    return float(grid[i]), float(vals[i])


def refined_threshold(k: int, tol: float = 1e-12) -> tuple[float, float]:
    """Smallest ``eps`` at which no placement pushes the refined point inside the ball.

    Returns ``(eps, delta)`` with ``delta = tj - ti`` the minimising placement
    at the threshold.
    """
    f = lambda e: _best_placement(k, e)[1]
    hi = thm31_bound(k)
    while f(hi) < 0:
        hi *= 1.5
        if hi > math.pi / 2:
            raise BracketFailure(f"refined defect never turns non-negative for k={k}")
    eps = bisect(f, 1e-3 * hi, hi, tol)
    return eps, _best_placement(k, eps)[0]


def refined_scaling_experiment(k_list=(4, 8, 16, 32, 64), seed: int = 0) -> dict:
    """Thresholds of the three-point refinement and their log-log slope in k.

    ``seed`` is recorded for reproducibility; the computation is deterministic.
    """
    ks = [int(k) for k in k_list]
    if any(k < 2 or k > 64 for k in ks):
        raise DomainError("k values must lie in [2, 64]")
    rows = []
    for k in ks:
        eps, delta = refined_threshold(k)
        rows.append({"k": k, "threshold_eps": eps, "delta": delta, "ti": -eps, "tj": -eps + delta,
                     "s": math.pi, "thm31_bound": thm31_bound(k)})
    if len(ks) >= 2:
        slope = float(np.polyfit(np.log(ks), np.log([r["threshold_eps"] for r in rows]), 1)[0])
    else:
        slope = math.nan
    for r in rows:
        r["fitted_exponent"] = slope
    return {"rows": rows, "fitted_exponent": slope, "seed": seed}
