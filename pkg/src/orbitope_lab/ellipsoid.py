"""Minimum-volume ellipsoid, inradius sandwich and the top face of the orbitope.

The orbitope is the orbit hull of ``v = (1, 0, 1, 0, ..., 1, 0)`` under the
circle acting by rotation with speed ``2j - 1`` on the ``j``-th coordinate
plane.  Those planes are pairwise non-isomorphic irreducible pieces, so the
minimum-volume ellipsoid weighs plane ``j`` by ``dim V_j / dim V = 1/k``
relative to ``|v_j|^2 = 1``: it is the ball of radius ``sqrt(k)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ._parallel import parallel_map, seed_streams
from .curve import _as_spec, eval_curve
from .exceptions import DimensionMismatch, DomainError
from .faces import FaceCertificate, verify_support
from .tangent import Hyperplane
from .trigpoly import TrigPoly, global_max


@dataclass(frozen=True)
class MinVolEllipsoid:
    k: int
    block_weight: float = field(init=False)
    base_block_norms: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be >= 1")
        v = eval_curve(self.k, 0.0)
        blocks = v.reshape(self.k, 2)
        object.__setattr__(self, "block_weight", 2.0 / (2 * self.k))
        object.__setattr__(self, "base_block_norms", tuple(float(b @ b) for b in blocks))

    @property
    def radius(self) -> float:
        # all blocks carry the same weight/norm ratio, so the ellipsoid is a ball
        return math.sqrt(self.base_block_norms[0] / self.block_weight)

    def quadratic_form(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (2 * self.k,):
            raise DimensionMismatch(f"expected a vector of length {2 * self.k}, got shape {x.shape}")
        blocks = x.reshape(self.k, 2)
        return float(np.sum(self.block_weight * np.sum(blocks ** 2, axis=1) / np.asarray(self.base_block_norms)))


def emin_membership(e: MinVolEllipsoid, x, tol: float = 1e-12) -> bool:
    return e.quadratic_form(x) <= 1.0 + tol


def emin_radius(k: int) -> float:
    return MinVolEllipsoid(k).radius


def inradius_bounds(k: int) -> tuple[float, float]:
    """Lower bound from the symmetric John sandwich, upper bound from the top face.

    The sandwich ``dim^{-1/2} E_min`` sits inside the body, giving
    ``sqrt(k) / sqrt(2k) = 1/sqrt(2)`` independently of ``k``.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    lower = emin_radius(k) / math.sqrt(2 * k)
    return lower, 1.0


def support_value(spec, u) -> tuple[float, float]:
    """``max_t <u, x(t)>`` and a maximiser."""
    spec = _as_spec(spec)
    u = np.asarray(u, dtype=float)
    p = TrigPoly(0.0, spec.frequencies, u[0::2], u[1::2])
    t, v = global_max(p, grid_factor=16, n_polish=2)
    return v, t


def _descend(spec, u0: np.ndarray) -> tuple[float, np.ndarray]:
    def fun(w):
        nw = np.linalg.norm(w)
        u = w / nw
        h, t = support_value(spec, u)
        g = eval_curve(spec, t)
        g = (g - (g @ u) * u) / nw
        return h, g

    res = minimize(fun, u0, jac=True, method="L-BFGS-B", options={"maxiter": 30})
    w = res.x / np.linalg.norm(res.x)
    return support_value(spec, w)[0], w


def _polish(spec, w: np.ndarray) -> tuple[float, np.ndarray]:
    # the minimum sits on a kink of the support function; gradients stall there
    res = minimize(lambda v: support_value(spec, v / np.linalg.norm(v))[0], w, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 80 * spec.dim})
    v = res.x / np.linalg.norm(res.x)
    return support_value(spec, v)[0], v


def inradius_estimate(spec, seed: int = 42, starts: int = 64, n_jobs: int | None = None,
                      n_polish: int = 3) -> float:
    """Numeric inradius: the smallest support value over unit directions.

    Every local minimum of the support function is an upper bound on the true
    inradius; the estimate is the best one over ``starts`` random directions
    plus the ``2k`` coordinate directions, the best few of which get a
    derivative-free polish.
    """
    spec = _as_spec(spec)
    if spec.k > 8:
        raise DomainError("inradius estimation is limited to k <= 8")
    if spec.k == 1:
        return support_value(spec, np.array([1.0, 0.0]))[0]
    inits = [row for row in np.eye(spec.dim)]
    for rng in seed_streams(seed, starts):
        u = rng.standard_normal(spec.dim)
        inits.append(u / np.linalg.norm(u))
    results = parallel_map(lambda u: _descend(spec, u), inits, n_jobs)
    results.sort(key=lambda r: r[0])
    polished = parallel_map(lambda r: _polish(spec, r[1]), results[:n_polish], n_jobs)
    return float(min([h for h, _ in results[:1]] + [h for h, _ in polished]))


def top_face_hyperplane(spec) -> Hyperplane:
    """The hyperplane ``x_{2k-1} = 1`` oriented so that ``p(t) = 1 - cos((2k-1)t)``."""
    spec = _as_spec(spec)
    n = np.zeros(spec.dim)
    n[spec.dim - 2] = -1.0
    return Hyperplane(n, -1.0)


def top_face_certificate(spec) -> FaceCertificate:
    spec = _as_spec(spec)
    if spec.k < 2:
        raise DomainError("the top face needs k >= 2")
    return verify_support(spec, top_face_hyperplane(spec))
