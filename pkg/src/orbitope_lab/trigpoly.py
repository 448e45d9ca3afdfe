"""Real trigonometric polynomials on the circle.

A :class:`TrigPoly` is ``c0 + sum_f alpha_f cos(f t) + beta_f sin(f t)``.
Roots on the circle are located through the associated algebraic polynomial
``q(z) = z^D p(t)`` with ``z = exp(i t)``: real roots of ``p`` are exactly the
unimodular roots of ``q``.  Eigenvalue clusters coming from multiple roots are
resolved by averaging, polishing on the appropriate derivative, and checking
that the lower derivatives vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .curve import TWO_PI, canonical, arc_distance
from .exceptions import IdenticallyZero, IllConditioned

# eigenvalues farther than this from |z| = 1 are never considered
_CIRCLE_WINDOW = 0.05
# angular reach used when growing a cluster of eigenvalues around a seed
_CLUSTER_REACH = 0.05


class TrigPoly:
    """Trigonometric polynomial with a constant term and integer harmonics."""

    __slots__ = ("c0", "freqs", "alpha", "beta")

    def __init__(self, c0: float = 0.0, freqs=(), alpha=(), beta=()):
        freqs = np.asarray(freqs, dtype=int).ravel()
        alpha = np.asarray(alpha, dtype=float).ravel()
        beta = np.asarray(beta, dtype=float).ravel()
        if not (freqs.shape == alpha.shape == beta.shape):
            raise ValueError("freqs, alpha and beta must have equal length")
        if freqs.size and (np.any(freqs <= 0) or np.any(np.diff(freqs) <= 0)):
            raise ValueError("frequencies must be positive and strictly increasing")
        self.c0 = float(c0)
        self.freqs = freqs
        self.alpha = alpha
        self.beta = beta

    @classmethod
    def from_terms(cls, c0: float, terms: Iterable[tuple[int, float, float]]) -> "TrigPoly":
        """Build from ``(frequency, cos_coeff, sin_coeff)`` triples (any order)."""
        acc: dict[int, list[float]] = {}
        for f, a, b in terms:
            slot = acc.setdefault(int(f), [0.0, 0.0])
            slot[0] += a
            slot[1] += b
        fs = sorted(acc)
        return cls(c0, fs, [acc[f][0] for f in fs], [acc[f][1] for f in fs])

    def __repr__(self) -> str:
        parts = [f"{self.c0:.6g}"]
        for f, a, b in zip(self.freqs, self.alpha, self.beta):
            if a:
                parts.append(f"{a:+.6g}*cos({f}t)")
            if b:
                parts.append(f"{b:+.6g}*sin({f}t)")
        return f"TrigPoly({' '.join(parts)})"

    @property
    def terms(self) -> list[tuple[int, float, float]]:
        return [(int(f), float(a), float(b)) for f, a, b in zip(self.freqs, self.alpha, self.beta)]

    @property
    def amplitudes(self) -> np.ndarray:
        return np.hypot(self.alpha, self.beta)

    def degree(self, tol: float = 0.0) -> int:
        live = self.freqs[self.amplitudes > tol]
        return int(live.max()) if live.size else 0

    def coef_norm(self) -> float:
        return abs(self.c0) + float(self.amplitudes.sum())

    def derivative_scale(self, j: int) -> float:
        """Upper bound of ``|p^(j)|`` over the circle."""
        if j == 0:
            return self.coef_norm()
        return float(np.sum(self.amplitudes * self.freqs.astype(float) ** j))

    def is_zero(self, tol: float = 0.0) -> bool:
        return abs(self.c0) <= tol and bool(np.all(self.amplitudes <= tol))

    def __call__(self, t):
        return self.eval_deriv(t, 0)

    def eval_deriv(self, t, j: int = 0):
        """Value of the ``j``-th derivative at ``t`` (scalar or array)."""
        if np.ndim(t) == 0:
            return self._eval_scalar(float(t), j)
        t = np.asarray(t, dtype=float)
        f = self.freqs.astype(float)
        ph = np.multiply.outer(t, f) + j * math.pi / 2.0
        vals = (np.cos(ph) * self.alpha + np.sin(ph) * self.beta) @ (f ** j)
        if j == 0:
            vals = vals + self.c0
        return vals

    def _eval_scalar(self, t: float, j: int) -> float:
        # plain floats beat numpy dispatch for the handful of terms used here
        shift = j * math.pi / 2.0
        acc = self.c0 if j == 0 else 0.0
        for f, a, b in zip(self.freqs.tolist(), self.alpha.tolist(), self.beta.tolist()):
            ph = f * t + shift
            acc += (a * math.cos(ph) + b * math.sin(ph)) * f ** j
        return acc

    def grid_values(self, n: int) -> np.ndarray:
        """Values at ``2*pi*i/n``, i = 0..n-1, via one inverse FFT."""
        spec = np.zeros(n, dtype=complex)
        for f, a, b in zip(self.freqs, self.alpha, self.beta):
            spec[f % n] += a - 1j * b
        return self.c0 + n * np.fft.ifft(spec).real

    def derivative(self, n: int = 1) -> "TrigPoly":
        """Termwise derivative; the constant term of the result is 0 for n >= 1."""
        if n == 0:
            return self
        f = self.freqs.astype(float)
        # d/dt rotates (alpha, beta) -> (f beta, -f alpha)
        a, b = self.alpha.copy(), self.beta.copy()
        for _ in range(n):
            a, b = f * b, -f * a
        return TrigPoly(0.0, self.freqs, a, b)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(-self.c0, self.freqs, -self.alpha, -self.beta)

    def __mul__(self, s: float) -> "TrigPoly":
        return TrigPoly(self.c0 * s, self.freqs, self.alpha * s, self.beta * s)

    __rmul__ = __mul__

    def shifted(self, tau: float) -> "TrigPoly":
        """The polynomial ``t -> p(t + tau)``."""
        c, s = np.cos(self.freqs * tau), np.sin(self.freqs * tau)
        return TrigPoly(self.c0, self.freqs, self.alpha * c + self.beta * s,
                        self.beta * c - self.alpha * s)

    def algebraic(self) -> np.ndarray:
        """Coefficients of ``q(z) = z^D p``, lowest power first (length 2D+1)."""
        d = self.degree()
        q = np.zeros(2 * d + 1, dtype=complex)
        q[d] = self.c0
        for f, a, b in zip(self.freqs, self.alpha, self.beta):
            if f > d:
                continue
            q[d + f] += 0.5 * (a - 1j * b)
            q[d - f] += 0.5 * (a + 1j * b)
        return q


def eval_poly(p: TrigPoly, t):
    return p(t)


def differentiate(p: TrigPoly) -> TrigPoly:
    return p.derivative(1)


@dataclass(frozen=True)
class CircleRootSet:
    roots: tuple[tuple[float, int], ...]
    residual: float = 0.0

    @property
    def points(self) -> np.ndarray:
        return np.array([t for t, _ in self.roots], dtype=float)

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_dict(self) -> list[dict]:
        return [{"t": t, "multiplicity": m} for t, m in self.roots]


def _unit_candidates(coeffs_low_first: np.ndarray, window: float = _CIRCLE_WINDOW) -> np.ndarray:
    """Eigenvalue roots of an algebraic polynomial lying near the unit circle."""
    c = np.trim_zeros(coeffs_low_first, "b")
    n = c.size - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    z = np.linalg.eigvals(comp)
    return z[np.abs(np.abs(z) - 1.0) < window]


def _newton(p: TrigPoly, t: float, order: int, max_step: float, iters: int = 12) -> float:
    """Polish a simple root of ``p^(order)`` near ``t``."""
    t0 = t
    for _ in range(iters):
        g = p.eval_deriv(t, order)
        dg = p.eval_deriv(t, order + 1)
        if dg == 0.0:
            break
        step = g / dg
        if abs(t - step - t0) > max_step:
            break
        t -= step
        if abs(step) < 1e-16 * max(1.0, abs(t)):
            break
    return t


def multiplicity_at(p: TrigPoly, t: float, tol: float = 1e-9, cap: int | None = None) -> int:
    """Number of leading derivatives (starting with ``p`` itself) that vanish at ``t``.

    Derivative ``j`` counts as vanishing when ``|p^(j)(t)| < tol * S_j`` where
    ``S_j`` bounds ``|p^(j)|`` on the circle (coefficient norm times
    frequency^j).
    """
    cap = 2 * max(p.degree(), 1) if cap is None else cap
    m = 0
    while m < cap and abs(p.eval_deriv(t, m)) < tol * max(p.derivative_scale(m), 1e-300):
        m += 1
    return m


def _resolve(p: TrigPoly, zs: np.ndarray, tol: float, strict_window: float = 1e-10) -> list[tuple[float, int]]:
    """Turn candidate unimodular eigenvalues into validated roots with multiplicities."""
    if zs.size == 0:
        return []
    angles = canonical(np.angle(zs))
    order = np.argsort(angles)
    angles = angles[order]
    moduli = np.abs(zs[order])
    n = angles.size
    used = np.zeros(n, dtype=bool)
    found: list[tuple[float, int]] = []

    def circ_mean(idx):
        return canonical(np.angle(np.mean(np.exp(1j * angles[idx]))))

    for seed in range(n):
        if used[seed]:
            continue
        # unused candidates within reach on either side, nearest first
        dist = arc_distance(angles, angles[seed])
        near = np.flatnonzero((dist <= _CLUSTER_REACH) & ~used)
        neigh = [int(i) for i in near[np.argsort(dist[near], kind="stable")]]
        best = None
        for r in range(len(neigh), 0, -1):
            idx = neigh[:r]
            c = circ_mean(idx)
            spread = max(float(np.max(arc_distance(angles[idx], c))), 1e-12)
            c = _newton(p, c, r - 1, max_step=10.0 * spread + 1e-6)
            rest = neigh[r:]
            # a cluster may not cut through a tighter group of eigenvalues
            if rest and float(np.min(arc_distance(angles[rest], c))) <= 2.0 * spread:
                continue
            if all(abs(p.eval_deriv(c, i)) < tol * p.derivative_scale(i) for i in range(r)):
                best = (canonical(c), r, idx)
                break
        if best is None:
            if abs(moduli[seed] - 1.0) < strict_window:
                raise IllConditioned(f"unimodular eigenvalue at t={angles[seed]:.12g} fails validation")
            used[seed] = True
            continue
        c, r, idx = best
        used[idx] = True
        # the eigenvalue count is the algebraic multiplicity; derivative tests
        # alone can overcount where p is flat below the tolerance
        found.append((c, r))
    return found


def _merge(roots: list[tuple[float, int]], merge_tol: float) -> list[tuple[float, int]]:
    # a root a hair below 2*pi is the root at 0
    roots = sorted((0.0 if TWO_PI - t < 1e-12 else t, m) for t, m in roots)
    out: list[list] = []
    for t, m in roots:
        if out and arc_distance(out[-1][0], t) < merge_tol:
            out[-1][1] += m
        else:
            out.append([t, m])
    if len(out) > 1 and arc_distance(out[0][0], out[-1][0]) < merge_tol:
        out[0][1] += out[-1][1]
        out.pop()
    return [(float(t), int(m)) for t, m in out]


def _finish(p: TrigPoly, roots: list[tuple[float, int]]) -> CircleRootSet:
    d = max(p.degree(), 1)
    roots = _merge(roots, 1e-7 * TWO_PI / d)
    resid = max((abs(p(t)) for t, _ in roots), default=0.0)
    return CircleRootSet(tuple(roots), resid)


def circle_roots(p: TrigPoly, tol: float = 1e-9) -> CircleRootSet:
    """All real roots of ``p`` on the circle, with multiplicities.

    Raises
    ------
    IdenticallyZero
        If every coefficient of ``p`` is below ``tol``.
    IllConditioned
        If an eigenvalue lying on the unit circle cannot be validated as a root.
    """
    if p.is_zero(tol):
        raise IdenticallyZero("trigonometric polynomial is identically zero")
    d = p.degree(tol * p.coef_norm())
    if d == 0:
        return CircleRootSet(())
    return _finish(p, _resolve(p, _unit_candidates(p.algebraic()), tol))


def deflated_roots(p: TrigPoly, known: Sequence[tuple[float, int]], tol: float = 1e-9) -> tuple[CircleRootSet, float]:
    """Circle roots of ``p`` other than the ``known`` ones.

    The known roots are divided out of the algebraic polynomial first, which
    keeps the remaining roots well separated from the (possibly clustered)
    known ones.  Returns the root set of the quotient and the relative size of
    the division remainder.
    """
    q = p.algebraic()[::-1]  # highest first
    div = np.array([1.0 + 0j])
    for t, m in known:
        w = np.exp(1j * t)
        for _ in range(int(m)):
            div = np.convolve(div, [1.0, -w])
    quot, rem = np.polydiv(q, div)
    rem_rel = float(np.max(np.abs(rem))) / max(float(np.max(np.abs(q))), 1e-300) if rem.size else 0.0
    zs = _unit_candidates(quot[::-1])
    return _finish(p, _resolve(p, zs, tol)), rem_rel


def _polish_min(p: TrigPoly, t: float, h: float) -> tuple[float, float]:
    # Newton on p' inside the bracket; fall back to bounded Brent
    lo, hi = t - h, t + h
    x = t
    for _ in range(20):
        g = p.eval_deriv(x, 1)
        g2 = p.eval_deriv(x, 2)
        if g2 <= 0.0:
            break
        nx = x - g / g2
        if not lo <= nx <= hi:
            break
        if abs(nx - x) < 1e-15:
            x = nx
            break
        x = nx
    best_t, best_v = t, p(t)
    v = p(x)
    if v < best_v:
        best_t, best_v = x, v
    if g2 <= 0.0 or not lo <= x <= hi:
        res = minimize_scalar(p, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        if res.fun < best_v:
            best_t, best_v = float(res.x), float(res.fun)
    return canonical(best_t), float(best_v)


def global_min(p: TrigPoly, grid_factor: int = 64, n_polish: int = 3) -> tuple[float, float]:
    """Global minimiser and minimum of ``p`` over the circle.

    Candidates are the critical points (unimodular roots of ``q'``), plus a
    safety grid of ``grid_factor * degree`` points; the best few are polished.
    """
    if p.is_zero():
        raise IdenticallyZero("trigonometric polynomial is identically zero")
    d = p.degree()
    if d == 0:
        return 0.0, p.c0
    n = grid_factor * d
    grid = np.arange(n) * (TWO_PI / n)
    crit = canonical(np.angle(_unit_candidates(p.derivative().algebraic(), window=0.1)))
    cand = np.concatenate([grid, np.atleast_1d(crit)])
    vals = np.concatenate([p.grid_values(n), np.atleast_1d(p(crit))])
    h = TWO_PI / n
    best_t, best_v = 0.0, math.inf
    for i in np.argsort(vals)[:n_polish]:
        t, v = _polish_min(p, float(cand[i]), h)
        if v < best_v:
            best_t, best_v = t, v
    return best_t, best_v


def global_max(p: TrigPoly, **kw) -> tuple[float, float]:
    t, v = global_min(-p, **kw)
    return t, -v
