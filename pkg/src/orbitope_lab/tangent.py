"""Affine hyperplanes osculating the symmetric moment curve.

For points ``t_1 < ... < t_l`` on an arc shorter than pi and multiplicities
``m_i > 1`` with ``sum m_i = 2k`` there is exactly one affine hyperplane
``<a, x> = c`` whose support polynomial ``p(t) = <a, x(t)> - c`` vanishes to
order ``m_i`` at every ``t_i``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curve import Arc, CurveSpec, _as_spec, arc_distance, canonical, deriv, divided_differences, eval_curve, signed_angle
from .exceptions import DegeneratePattern, InvalidPattern
from .trigpoly import TrigPoly

MERGE_TOL = 1e-6
NULL_TOL = 1e-10


class OddMultiplicityWarning(UserWarning):
    """An odd tangency order was requested; such hyperplanes never support."""


@dataclass(frozen=True)
class TangencyPattern:
    """Points on an arc together with tangency orders.

    ``points`` are stored as given (not wrapped) so that patterns on an arc
    around 0 keep their natural ordering; all comparisons are circular.
    """

    points: tuple[float, ...]
    mults: tuple[int, ...]
    arc: Arc

    def __post_init__(self):
        if len(self.points) != len(self.mults) or not self.points:
            raise InvalidPattern("points and multiplicities must be non-empty and of equal length")
        if any(int(m) != m or m < 2 for m in self.mults):
            raise InvalidPattern(f"multiplicities must be integers >= 2, got {self.mults}")
        if self.arc.length >= math.pi:
            raise InvalidPattern(f"pattern arc must be shorter than pi, got {self.arc.length}")
        for t in self.points:
            if not self.arc.contains(t, closed=True, tol=1e-12):
                raise InvalidPattern(f"point {t} outside the pattern arc")
        pts = np.asarray(self.points)
        if pts.size > 1:
            d = arc_distance(pts[:, None], pts[None, :]) + np.eye(pts.size)
            if d.min() == 0.0:
                raise InvalidPattern("pattern points must be pairwise distinct")

    @classmethod
    def from_points(cls, points: Sequence[float], mults: Sequence[int], arc: Arc | None = None) -> "TangencyPattern":
        pts = [float(t) for t in points]
        ms = [int(m) for m in mults]
        if len(pts) != len(ms):
            raise InvalidPattern("points and multiplicities must have equal length")
        # order along the arc, measured from its start
        ref = arc if arc is not None else Arc.spanning(pts) if pts else None
        if ref is None:
            raise InvalidPattern("empty pattern")
        key = [canonical(t - ref.start + 1e-12) for t in pts]
        order = np.argsort(key, kind="stable")
        pts = [pts[i] for i in order]
        ms = [ms[i] for i in order]
        if arc is None:
            arc = Arc.spanning(pts) if len(pts) > 1 else Arc(pts[0], 1e-9)
        return cls(tuple(pts), tuple(ms), arc)

    @property
    def total(self) -> int:
        return sum(self.mults)

    @property
    def entries(self) -> list[tuple[float, int]]:
        return list(zip(self.points, self.mults))

    @property
    def nodes(self) -> np.ndarray:
        """Points repeated by multiplicity (the interpolation multiset)."""
        return np.repeat(np.asarray(self.points, dtype=float), self.mults)

    def check_for(self, spec: CurveSpec) -> None:
        if self.total != spec.dim:
            raise InvalidPattern(f"multiplicities sum to {self.total}, expected 2k = {spec.dim}")

    def merged(self, tol: float = MERGE_TOL) -> "TangencyPattern":
        """Fuse points closer than ``tol`` (multiplicities add up)."""
        pts, ms = [self.points[0]], [self.mults[0]]
        for t, m in zip(self.points[1:], self.mults[1:]):
            if arc_distance(t, pts[-1]) < tol:
                # weighted position keeps the fused point inside the cluster
                w = ms[-1] + m
                pts[-1] = pts[-1] + m * signed_angle(t - pts[-1]) / w
                ms[-1] = w
            else:
                pts.append(t)
                ms.append(m)
        if len(pts) == len(self.points):
            return self
        return TangencyPattern(tuple(pts), tuple(ms), self.arc)

    def as_dict(self) -> dict:
        return {"points": list(self.points), "mults": list(self.mults),
                "arc": {"center": self.arc.center, "length": self.arc.length}}


@dataclass(frozen=True)
class Hyperplane:
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError("hyperplane normal must be a unit vector")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def k(self) -> int:
        return self.normal.size // 2

    def support_poly(self) -> TrigPoly:
        """``p(t) = <normal, x(t)> - offset``."""
        k = self.k
        return TrigPoly(-self.offset, np.arange(1, 2 * k, 2), self.normal[0::2], self.normal[1::2])

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x) @ self.normal - self.offset

    def as_dict(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}


def tangency_matrix(spec, pattern: TangencyPattern) -> np.ndarray:
    """The ``(2k-1) x 2k`` system: chord rows first, then derivative rows."""
    spec = _as_spec(spec)
    pattern.check_for(spec)
    last = pattern.points[-1]
    rows = [eval_curve(spec, t) - eval_curve(spec, last) for t in pattern.points[:-1]]
    for t, m in pattern.entries:
        rows.extend(deriv(spec, t, n) for n in range(1, m))
    return np.array(rows).reshape(-1, spec.dim)


def full_family(spec, pattern: TangencyPattern) -> np.ndarray:
    """The tangency rows plus the order-``m_1`` derivative at ``t_1`` (square)."""
    spec = _as_spec(spec)
    t1, m1 = pattern.entries[0]
    return np.vstack([tangency_matrix(spec, pattern), deriv(spec, t1, m1)])


def _normalized(rows: np.ndarray) -> np.ndarray:
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def _hermite_rows(spec: CurveSpec, pattern: TangencyPattern, extra_first: bool = False) -> np.ndarray:
    """Divided-difference rows spanning the same space as the tangency family."""
    nodes = pattern.nodes
    if extra_first:
        nodes = np.concatenate([[pattern.points[0]], nodes])
    return _normalized(divided_differences(spec, nodes))


def independence_check(spec, pattern: TangencyPattern, rel_tol: float = NULL_TOL) -> tuple[int, float]:
    """Numeric rank and condition number of the full ``2k``-vector family.

    The family is evaluated in its divided-difference form (same span,
    stable under nearby points); rank uses singular values above
    ``rel_tol * sigma_max``.
    """
    spec = _as_spec(spec)
    pattern.check_for(spec)
    s = np.linalg.svd(_hermite_rows(spec, pattern, extra_first=True), compute_uv=False)
    rank = int(np.sum(s > rel_tol * s[0]))
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    return rank, cond


def construct_hyperplane(spec, pattern: TangencyPattern, merge_tol: float = MERGE_TOL) -> Hyperplane:
    """The unique hyperplane tangent to the curve along ``pattern``.

    Nearly coincident points are fused first.  The normal is oriented so that
    the support polynomial is positive at the antipode of the arc centre; if
    that value vanishes (an extra contact sits exactly there) the sign of the
    first non-vanishing derivative at ``t_1`` decides instead.
    """
    spec = _as_spec(spec)
    pattern.check_for(spec)
    pattern = pattern.merged(merge_tol)
    if any(m % 2 for m in pattern.mults):
        warnings.warn(f"odd tangency order in {pattern.mults}", OddMultiplicityWarning, stacklevel=2)
    rows = _hermite_rows(spec, pattern)
    _, s, vt = np.linalg.svd(rows)
    if s.size != spec.dim - 1 or s[-1] <= NULL_TOL * s[0]:
        raise DegeneratePattern(f"null space is not one-dimensional (sigma_min/sigma_max = {s[-1] / s[0]:.3e})")
    normal = vt[-1]
    normal = normal / np.linalg.norm(normal)
    offset = float(normal @ eval_curve(spec, pattern.points[-1]))
    h = Hyperplane(normal, offset)
    p = h.support_poly()
    probe = p(pattern.arc.center + math.pi)
    if abs(probe) > 1e-8 * (1.0 + abs(offset)):
        sign = 1.0 if probe > 0 else -1.0
    else:
        t1, m1 = pattern.entries[0]
        sign = 1.0 if p.eval_deriv(t1, m1) > 0 else -1.0
    if sign < 0:
        h = Hyperplane(-normal, -offset)
    return h
