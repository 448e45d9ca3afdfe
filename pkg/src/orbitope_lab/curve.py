"""Symmetric moment curve and circle-parameter arithmetic.

The curve in R^{2k} is

    x(t) = (cos t, sin t, cos 3t, sin 3t, ..., cos (2k-1)t, sin (2k-1)t)

and everything here is evaluated in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

TWO_PI = 2.0 * math.pi


def canonical(t):
    """Wrap an angle (or array of angles) into ``[0, 2*pi)``."""
    w = np.mod(t, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    w = np.where(w >= TWO_PI, 0.0, w)
    if np.ndim(w) == 0:
        return float(w)
    return w


def signed_angle(t):
    """Wrap into ``[-pi, pi)``."""
    return canonical(np.asarray(t) + math.pi) - math.pi


def arc_distance(a, b):
    """Geodesic distance on the unit circle, ``min(|d|, 2*pi - |d|)``."""
    d = np.abs(canonical(np.asarray(a) - np.asarray(b)))
    out = np.minimum(d, TWO_PI - d)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CurveSpec:
    k: int
    dim: int = field(init=False)
    frequencies: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "dim", 2 * self.k)
        freqs = np.arange(1, 2 * self.k, 2)
        freqs.setflags(write=False)
        object.__setattr__(self, "frequencies", freqs)

    @property
    def degree(self) -> int:
        return 2 * self.k - 1


@dataclass(frozen=True)
class Arc:
    """Closed-open arc ``[center - length/2, center + length/2)`` on the circle."""

    center: float
    length: float

    def __post_init__(self):
        if not 0.0 < self.length < TWO_PI:
            raise ValueError(f"arc length must lie in (0, 2*pi), got {self.length}")
        object.__setattr__(self, "center", canonical(self.center))

    @property
    def start(self) -> float:
        return canonical(self.center - 0.5 * self.length)

    def contains(self, t, closed: bool = False, tol: float = 0.0) -> bool:
        """Membership test.

        The default half-open convention keeps bisection deterministic; pass
        ``closed=True`` (optionally with a slack ``tol``) to include both ends.
        """
        off = canonical(t - self.center + 0.5 * self.length + tol)
        limit = self.length + 2.0 * tol
        return bool(off <= limit) if closed else bool(off < limit)

    def opposite(self) -> "Arc":
        return Arc(self.center + math.pi, self.length)

    def grid(self, n: int) -> np.ndarray:
        """``n`` equispaced parameters covering the closed arc."""
        return self.center - 0.5 * self.length + np.linspace(0.0, self.length, n)

    @classmethod
    def spanning(cls, points) -> "Arc":
        """Smallest arc containing ``points`` (complement of the largest gap)."""
        pts = np.sort(canonical(np.atleast_1d(np.asarray(points, dtype=float))))
        if pts.size == 1:
            return cls(float(pts[0]), 1e-12)
        gaps = np.diff(np.concatenate([pts, [pts[0] + TWO_PI]]))
        i = int(np.argmax(gaps))
        start = pts[(i + 1) % pts.size]
        length = max(TWO_PI - gaps[i], 1e-12)
        return cls(start + 0.5 * length, length)


def _as_spec(spec) -> CurveSpec:
    return spec if isinstance(spec, CurveSpec) else CurveSpec(int(spec))


def eval_curve(spec, t) -> np.ndarray:
    """Point(s) of the symmetric moment curve.

    ``t`` may be a scalar (returns shape ``(2k,)``) or an array (returns
    ``t.shape + (2k,)``).
    """
    spec = _as_spec(spec)
    t = np.asarray(t, dtype=float)
    ft = np.multiply.outer(t, spec.frequencies)
    out = np.empty(t.shape + (spec.dim,))
    out[..., 0::2] = np.cos(ft)
    out[..., 1::2] = np.sin(ft)
    return out


def deriv(spec, t, n: int) -> np.ndarray:
    """``n``-th derivative of the curve, via the phase-shift closed form."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    spec = _as_spec(spec)
    t = np.asarray(t, dtype=float)
    f = spec.frequencies.astype(float)
    phase = np.multiply.outer(t, f) + n * math.pi / 2.0
    scale = f ** n
    out = np.empty(t.shape + (spec.dim,))
    out[..., 0::2] = scale * np.cos(phase)
    out[..., 1::2] = scale * np.sin(phase)
    return out


def antipode(spec, t) -> np.ndarray:
    return eval_curve(spec, np.asarray(t, dtype=float) + math.pi)


def divided_differences(spec, nodes) -> np.ndarray:
    """Confluent divided differences ``x[nodes[0], ..., nodes[j]]``, j >= 1.

    Returns an array of shape ``(len(nodes) - 1, 2k)``.  Repeated nodes are
    allowed and yield scaled derivatives.  Computed through the matrix
    exponential of the bidiagonal node matrix, which stays accurate when
    nodes coalesce (plain difference quotients do not).
    """
    spec = _as_spec(spec)
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    if n < 2:
        return np.zeros((0, spec.dim))
    # shift to a local origin; the phase is restored below
    t0 = float(nodes[0])
    jordan = np.diag(nodes - t0) + np.diag(np.ones(n - 1), 1)
    rows = np.empty((n - 1, spec.dim))
    for j, f in enumerate(spec.frequencies):
        first_row = scipy.linalg.expm(1j * f * jordan)[0, 1:] * np.exp(1j * f * t0)
        rows[:, 2 * j] = first_row.real
        rows[:, 2 * j + 1] = first_row.imag
    return rows
