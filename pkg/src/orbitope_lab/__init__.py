"""Numerical laboratory for the convex hull of the symmetric moment curve."""

__version__ = "0.1.0"

from .bounds import (
    GapProfile,
    epsilon_star,
    gap,
    gap_upper_envelope,
    refined_point,
    refined_scaling_experiment,
    thm12_bound,
    thm31_bound,
)
from .curve import Arc, CurveSpec, antipode, arc_distance, canonical, deriv, eval_curve
from .ellipsoid import (
    MinVolEllipsoid,
    emin_membership,
    emin_radius,
    inradius_bounds,
    inradius_estimate,
    top_face_certificate,
)
from .exceptions import (
    BracketFailure,
    CoincidentPoints,
    DegeneratePattern,
    DimensionMismatch,
    DomainError,
    IdenticallyZero,
    IllConditioned,
    InvalidPattern,
    OrbitopeError,
    SearchInconclusive,
)
from .faces import FaceCertificate, contact_separation, opposite_arc_distance, verify_support
from .neighborliness import PhiEstimate, bound_comparison_table, estimate_phi, worst_configuration
from .tangent import Hyperplane, TangencyPattern, construct_hyperplane, independence_check, tangency_matrix
from .trigpoly import CircleRootSet, TrigPoly, circle_roots, differentiate, eval_poly, global_min

__all__ = [name for name in dir() if not name.startswith("_")]
