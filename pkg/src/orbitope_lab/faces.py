"""Support and face certification for hyperplanes tangent to the curve."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .curve import Arc, _as_spec, arc_distance, canonical, divided_differences, eval_curve
from .tangent import Hyperplane, TangencyPattern
from .trigpoly import CircleRootSet, circle_roots, deflated_roots, global_min, multiplicity_at

MATCH_TOL = 1e-6
ROOT_TOL = 1e-9


def support_tol(h: Hyperplane) -> float:
    return 1e-9 * (1.0 + abs(h.offset))


@dataclass
class FaceCertificate:
    k: int
    is_supporting: bool
    global_min_value: float
    global_min_t: float
    contact_set: CircleRootSet
    face_dim: int
    extra_contacts: list[float] = field(default_factory=list)
    min_opposite_gap: float | None = None
    localization_ok: bool = True
    hyperplane: Hyperplane | None = None

    @property
    def is_face(self) -> bool:
        """Supporting, with no contacts beyond the prescribed pattern."""
        return self.is_supporting and not self.extra_contacts

    def contact_points(self) -> np.ndarray:
        return self.contact_set.points

    def min_midpoint_norm(self) -> float:
        """Smallest norm of ``(x(u) + x(v)) / 2`` over pairs of contacts (inf if < 2)."""
        pts = self.contact_set.points
        if pts.size < 2:
            return math.inf
        x = eval_curve(self.k, pts)
        i, j = np.triu_indices(pts.size, 1)
        return float(np.min(np.linalg.norm(0.5 * (x[i] + x[j]), axis=1)))

    def as_dict(self) -> dict:
        return {
            "is_supporting": self.is_supporting,
            "global_min": self.global_min_value,
            "global_min_t": self.global_min_t,
            "contacts": self.contact_set.as_dict(),
            "face_dim": self.face_dim,
            "extra_contacts": list(self.extra_contacts),
            "min_opposite_gap": self.min_opposite_gap,
            "localization_ok": self.localization_ok,
        }


def affine_rank(spec, points, rel_tol: float = 1e-9) -> int:
    """Affine rank of the curve points ``x(t)``, ``t`` in ``points``."""
    spec = _as_spec(spec)
    pts = np.asarray(points, dtype=float)
    if pts.size < 2:
        return 0
    rows = divided_differences(spec, np.sort(canonical(pts)))
    rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    s = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))


def contact_separation(pattern: TangencyPattern, s: float) -> float:
    """Distance from ``s`` to the nearest antipode ``t_i + pi`` of the pattern."""
    return float(np.min(arc_distance(s, np.asarray(pattern.points) + math.pi)))


def _pattern_contacts(p, pattern: TangencyPattern) -> list[tuple[float, int]] | None:
    known = []
    for t, m in pattern.entries:
        got = multiplicity_at(p, t, 1e-7, cap=m)
        if got < m:
            return None
        known.append((canonical(t), m))
    return known


def verify_support(spec, h: Hyperplane, pattern: TangencyPattern | None = None, tol: float = ROOT_TOL) -> FaceCertificate:
    """Decide whether ``h`` supports the orbitope and describe the contact face.

    With a pattern, its points are taken as known contacts (after checking the
    tangency orders) and divided out of the support polynomial; whatever roots
    remain are reported as extra contacts.  Without a pattern every contact is
    found directly.
    """
    spec = _as_spec(spec)
    p = h.support_poly()
    t_min, v_min = global_min(p)
    supporting = v_min >= -support_tol(h)
    cert = FaceCertificate(spec.k, supporting, v_min, t_min, CircleRootSet(()), -1, hyperplane=h)
    if not supporting:
        return cert

    known = None
    if pattern is not None:
        pattern = pattern.merged()
        known = _pattern_contacts(p, pattern)
    if known is not None:
        rest, _ = deflated_roots(p, known, tol)
        contacts = [list(c) for c in known]
        extras = []
        for s, m in rest:
            near = [c for c in contacts if arc_distance(c[0], s) < MATCH_TOL]
            if near:
                near[0][1] += m
            else:
                extras.append((s, m))
        roots = sorted([tuple(c) for c in contacts] + extras)
        contact_set = CircleRootSet(tuple((float(t), int(m)) for t, m in roots),
                                    max((abs(p(t)) for t, _ in roots), default=0.0))
        extra_pts = [float(s) for s, _ in extras]
    else:
        contact_set = circle_roots(p, tol)
        if pattern is None:
            extra_pts = []
        else:
            extra_pts = [float(t) for t in contact_set.points
                         if np.min(arc_distance(t, np.asarray(pattern.points))) >= MATCH_TOL]

    cert.contact_set = contact_set
    cert.face_dim = affine_rank(spec, contact_set.points)
    cert.extra_contacts = extra_pts
    if pattern is not None and extra_pts:
        cert.min_opposite_gap = min(contact_separation(pattern, s) for s in extra_pts)
        opp = pattern.arc.opposite()
        cert.localization_ok = all(opp.contains(s, closed=True, tol=MATCH_TOL) for s in extra_pts)
    return cert


def opposite_arc_distance(spec, h: Hyperplane, arc: Arc, signed: bool = False, grid_factor: int = 512) -> float:
    """Minimum of ``|p(s)|`` (or of ``p(s)`` when ``signed``) over the antipodal arc.

    With a unit normal ``|p(s)|`` is the Euclidean distance from ``x(s)`` to
    the hyperplane.
    """
    spec = _as_spec(spec)
    p = h.support_poly()
    f = p if signed else (lambda t: abs(p(t)))
    opp = arc.opposite()
    n = grid_factor * spec.k
    s = opp.grid(n)
    vals = p(s) if signed else np.abs(p(s))
    i = int(np.argmin(vals))
    best = float(vals[i])
    if not signed:
        # a sign change between grid points means the curve crosses the hyperplane
        sv = p(s)
        if np.any(np.sign(sv[:-1]) * np.sign(sv[1:]) <= 0):
            return 0.0
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, n - 1)]
    if hi > lo:
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        best = min(best, float(res.fun))
    return best
