"""Exact lattice membership and closest vector search under lp and polyhedral norms."""

from .cvp import CvpResult, NormSpec, cvp_decision, cvp_optimize, cvp_search, norm_pow
from .errors import (
    BudgetExceeded,
    ContractViolation,
    Degenerate,
    DimensionTooLarge,
    LatmemError,
    RankDeficient,
)
from .flatness import ContainsInteger, Direction, NoInteger, flatness_ellipsoid, flatness_lp, flatness_polytope
from .geometry import AffineSubspace, Ellipsoid, Hyperplane, LpBody, Polytope
from .lattice import shortest_form_vector
from .membership import Config, MembershipInstance, MembershipResult, Stats, lmp_solve, lmp_solve_result, solve_membership
from .oracle import oracle_cvp, oracle_lmp, oracle_svp
from .rounding import NoIntegerPoint, RoundingConfig, Sandwich, round_lp_body, round_polytope

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace",
    "BudgetExceeded",
    "Config",
    "ContainsInteger",
    "ContractViolation",
    "CvpResult",
    "Degenerate",
    "DimensionTooLarge",
    "Direction",
    "Ellipsoid",
    "Hyperplane",
    "LatmemError",
    "LpBody",
    "MembershipInstance",
    "MembershipResult",
    "NoInteger",
    "NoIntegerPoint",
    "NormSpec",
    "Polytope",
    "RankDeficient",
    "RoundingConfig",
    "Sandwich",
    "Stats",
    "cvp_decision",
    "cvp_optimize",
    "cvp_search",
    "flatness_ellipsoid",
    "flatness_lp",
    "flatness_polytope",
    "lmp_solve",
    "lmp_solve_result",
    "solve_membership",
    "norm_pow",
    "oracle_cvp",
    "oracle_lmp",
    "oracle_svp",
    "round_lp_body",
    "round_polytope",
    "shortest_form_vector",
]
