"""Numeric estimation of the local-neighborliness arc length.

For an arc of length ``psi`` centred at 0, every choice of ``k`` points on it
(each with tangency order 2) defines a tangent hyperplane.  The arc is *safe*
when all of these hyperplanes support the orbitope and touch it only at the
chosen points.  The search minimises the signed distance between the
hyperplane and the antipodal arc, which is positive for safe configurations
and turns negative once the curve pokes through near the antipodes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._parallel import parallel_map, seed_streams
from .bounds import thm12_bound
from .curve import Arc, CurveSpec, _as_spec
from .exceptions import DegeneratePattern, SearchInconclusive
from .faces import FaceCertificate, opposite_arc_distance, support_tol, verify_support
from .tangent import MERGE_TOL, Hyperplane, OddMultiplicityWarning, TangencyPattern, construct_hyperplane

PSI_CAP = math.pi - 1e-6


def pattern_on_arc(points, psi: float, center: float = 0.0) -> TangencyPattern:
    """Double-tangency pattern for ``points`` on the arc; near-duplicates are fused."""
    pts = np.sort(np.asarray(points, dtype=float))
    fused, mults = [float(pts[0])], [2]
    for t in pts[1:]:
        if t - fused[-1] < MERGE_TOL:
            mults[-1] += 2
        else:
            fused.append(float(t))
            mults.append(2)
    return TangencyPattern(tuple(fused), tuple(mults), Arc(center, psi))


def configuration_margin(spec: CurveSpec, pattern: TangencyPattern, grid_factor: int = 64) -> tuple[float, Hyperplane]:
    """Search objective: signed antipodal-arc distance, or a negative dip elsewhere."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OddMultiplicityWarning)
        h = construct_hyperplane(spec, pattern)
    p = h.support_poly()
    opp = opposite_arc_distance(spec, h, pattern.arc, signed=True, grid_factor=grid_factor)
    dip = float(np.min(p.grid_values(grid_factor * spec.degree)))
    if dip < -support_tol(h):
        return min(opp, dip), h
    return opp, h


@dataclass
class WorstCase:
    pattern: TangencyPattern
    score: float
    margin: float
    certificate: FaceCertificate
    psi: float

    @property
    def safe(self) -> bool:
        c = self.certificate
        return c.is_supporting and not c.extra_contacts and self.margin > -support_tol(c.hyperplane)

    def __iter__(self):
        # unpacks as (pattern, score)
        return iter((self.pattern, self.score))


def _descend(spec: CurveSpec, psi: float, rng: np.random.Generator, max_iter: int) -> tuple[float, np.ndarray]:
    half = 0.5 * psi

    def objective(x):
        try:
            return configuration_margin(spec, pattern_on_arc(x, psi))[0]
        except DegeneratePattern:
            return math.inf

    for _ in range(16):
        x = np.sort(rng.uniform(-half, half, spec.k))
        fx = objective(x)
        if math.isfinite(fx):
            break
    else:
        raise DegeneratePattern("could not sample a non-degenerate start")
    step = 0.25 * psi
    min_step = 1e-7 * psi
    for _ in range(max_iter):
        improved = False
        for i in range(spec.k):
            for d in (step, -step):
                y = x.copy()
                y[i] = min(max(y[i] + d, -half), half)
                if y[i] == x[i]:
                    continue
                y.sort()
                fy = objective(y)
                if fy < fx:
                    x, fx, improved = y, fy, True
                    break
        if not improved:
            step *= 0.5
            if step < min_step:
                break
    return fx, x


def worst_configuration(spec, psi: float, starts: int = 64, seed: int = 42, max_iter: int = 200,
                        n_jobs: int | None = None) -> WorstCase:
    """Multi-start coordinate descent for the least safe configuration on an arc of length ``psi``.

    Deterministic for a given ``seed`` whatever the number of workers.
    """
    spec = _as_spec(spec)
    if not 0.0 < psi < math.pi:
        raise ValueError(f"psi must lie in (0, pi), got {psi}")
    runs = parallel_map(lambda rng: _descend(spec, psi, rng, max_iter), seed_streams(seed, starts), n_jobs)
    f_best, x_best = min(runs, key=lambda r: (r[0], tuple(r[1])))
    pattern = pattern_on_arc(x_best, psi)
    margin, h = configuration_margin(spec, pattern, grid_factor=512)
    cert = verify_support(spec, h, pattern)
    return WorstCase(pattern, cert.global_min_value, margin, cert, psi)


@dataclass
class PhiEstimate:
    k: int
    phi_lower_numeric: float
    phi_upper_numeric: float | None
    paper_bound: float
    trials: int
    seed: int
    history: list[dict] = field(default_factory=list)
    failing_pattern: TangencyPattern | None = None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "paper_bound": self.paper_bound,
            "phi_lower_numeric": self.phi_lower_numeric,
            "phi_upper_numeric": self.phi_upper_numeric,
            "trials": self.trials,
            "seed": self.seed,
            "failing_pattern": self.failing_pattern.as_dict() if self.failing_pattern else None,
        }


def estimate_phi(spec, tol: float = 1e-2, starts: int = 64, seed: int = 42, n_jobs: int | None = None) -> PhiEstimate:
    """Bisection bracket for the supremum safe arc length.

    The upper end is backed by an explicit failing configuration; the lower
    end is only as good as the multi-start search.

    Raises
    ------
    SearchInconclusive
        If the known lower bound ``sqrt(6) k^{-3/2}`` is not certified safe.
    """
    spec = _as_spec(spec)
    if tol <= 0:
        raise ValueError("tol must be positive")
    bound = thm12_bound(spec.k)
    history: list[dict] = []
    trials = 0

    def probe(psi: float) -> WorstCase:
        nonlocal trials
        trials += starts
        wc = worst_configuration(spec, psi, starts, seed, n_jobs=n_jobs)
        history.append({"psi": psi, "safe": wc.safe, "margin": wc.margin, "score": wc.score})
        return wc

    lo = min(bound, PSI_CAP)
    if not probe(lo).safe:
        raise SearchInconclusive(f"arc length {lo:.6g} = sqrt(6) k^-3/2 not certified safe for k={spec.k}")
    hi = PSI_CAP
    wc_hi = probe(hi)
    if wc_hi.safe:
        return PhiEstimate(spec.k, hi, None, bound, trials, seed, history)
    failing = wc_hi.pattern
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        wc = probe(mid)
        if wc.safe:
            lo = mid
        else:
            hi, failing = mid, wc.pattern
    # a failing witness inside a shorter arc than some certified-safe arc means the search missed it
    unsafe = [h["psi"] for h in history if not h["safe"]]
    safe = [h["psi"] for h in history if h["safe"]]
    if unsafe and safe and min(unsafe) < max(safe):
        raise SearchInconclusive("non-monotone safety verdicts; increase the search budget")
    return PhiEstimate(spec.k, lo, hi, bound, trials, seed, history, failing)


def bound_comparison_table(k_max: int, tol: float = 1e-2, starts: int = 64, seed: int = 42,
                           full_k_max: int = 4, bound_only: bool = False, n_jobs: int | None = None) -> list[dict]:
    """Rows ``(k, paper_bound, phi_lower_numeric, phi_upper_numeric)``; estimation only for k <= full_k_max."""
    rows = []
    for k in range(1, k_max + 1):
        row = {"k": k, "paper_bound": thm12_bound(k), "phi_lower_numeric": None, "phi_upper_numeric": None}
        if not bound_only and k <= full_k_max:
            est = estimate_phi(k, tol, starts, seed, n_jobs)
            row["phi_lower_numeric"] = est.phi_lower_numeric
            row["phi_upper_numeric"] = est.phi_upper_numeric
        rows.append(row)
    return rows
