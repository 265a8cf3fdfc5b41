"""Flatness directions for ellipsoids, polytopes and lp-bodies."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .exact import ceil_add_sqrt, ceil_frac, dot, floor_add_sqrt, floor_frac, mat_vec
from .geometry import Ellipsoid, LpBody, Polytope, lp_value
from .lattice import shortest_form_vector
from .rounding import (
    NoIntegerPoint,
    RoundingConfig,
    Sandwich,
    _Engine,
    _Flat,
    _interval_polytope,
    _round_lp_core,
    _round_polytope_core,
    _Witness,
    lp_initial_ellipsoid,
    round_lp_body,
)


@dataclass
class ContainsInteger:
    witness: Optional[List[int]] = None


@dataclass
class NoInteger:
    reason: str = ""


@dataclass
class Direction:
    d: List[int]
    k_min: int
    k_max: int

    @property
    def count(self) -> int:
        return max(0, self.k_max - self.k_min + 1)


FlatnessOutcome = Union[ContainsInteger, NoInteger, Direction]


def _interval(E: Ellipsoid, d: List[int]):
    ctr = dot(d, E.c)
    val = dot(d, mat_vec(E.D, d))
    return ceil_add_sqrt(ctr, val, -1), floor_add_sqrt(ctr, val, 1)


def flatness_ellipsoid(E: Ellipsoid) -> FlatnessOutcome:
    """ContainsInteger when the lattice width of E is at least m, else the
    shortest dual direction with the range of hyperplanes meeting E."""
    m = E.dim
    d, val = shortest_form_vector(E.D)
    if 4 * val >= m * m:
        return ContainsInteger()
    k_min, k_max = _interval(E, d)
    return Direction(d, k_min, k_max)


def _from_sandwich(s: Sandwich) -> FlatnessOutcome:
    m = s.E.dim
    d, val = shortest_form_vector(s.E.D)
    if 4 * val >= m * m:
        return ContainsInteger()
    # the outer ellipsoid lies inside rho * E, so its interval is never longer
    k_min, k_max = _interval(s.outer, d)
    return Direction(d, k_min, k_max)


def flatness_polytope(P: Polytope, config: Optional[RoundingConfig] = None) -> FlatnessOutcome:
    """Flatness for a full-dimensional polytope (raises Degenerate otherwise)."""
    if P.dim == 1:
        iv = _interval_polytope(P)
        if iv is None:
            return Direction([1], 1, 0)
        lo, hi = ceil_frac(iv[0]), floor_frac(iv[1])
        if lo <= hi:
            return ContainsInteger([lo])
        return Direction([1], lo, hi)
    res = _round_polytope_core(P, config or RoundingConfig(), integer_mode=False)
    return _from_sandwich(res)


def _lp_one_dim(body: LpBody) -> FlatnessOutcome:
    """Exact answer on a line: minimize the convex F over the candidate integers."""
    init = lp_initial_ellipsoid(body)
    if init is None:
        return NoInteger("slice is empty")
    (D,), c = init[0], init[1]
    lo = ceil_add_sqrt(c[0], D[0], -1)
    hi = floor_add_sqrt(c[0], D[0], 1)
    if lo > hi:
        return NoInteger("empty interval")

    def F(k: int) -> Fraction:
        return lp_value(body, [k])

    a, b = lo, hi
    while a < b:
        mid = (a + b) // 2
        if F(mid + 1) >= F(mid):
            b = mid
        else:
            a = mid + 1
    if F(a) < 0:
        return ContainsInteger([a])
    return NoInteger("minimum over integers is nonnegative")


def flatness_lp(body: LpBody, config: Optional[RoundingConfig] = None) -> FlatnessOutcome:
    if body.m == 1:
        return _lp_one_dim(body)
    res = round_lp_body(body, config)
    if isinstance(res, NoIntegerPoint):
        return NoInteger(res.reason)
    return _from_sandwich(res)


# ---------------------------------------------------------------------------
# membership mode: integer-aware exits


def _early_hook(early_slices: int):
    def hook(eng: _Engine):
        d, lo, hi = eng.flat_direction()
        if lo > hi:
            return NoIntegerPoint("empty flat interval")
        if hi - lo + 1 <= early_slices:
            return _Flat(d, lo, hi)
        return None

    return hook


def _translate(res) -> FlatnessOutcome:
    if isinstance(res, _Witness):
        return ContainsInteger(res.point)
    if isinstance(res, NoIntegerPoint):
        return NoInteger(res.reason)
    if isinstance(res, _Flat):
        return Direction(res.d, res.k_min, res.k_max)
    out = _from_sandwich(res)
    if isinstance(out, Direction) and out.k_min > out.k_max:
        return NoInteger("empty flat interval")
    return out


def relaxed_polytope(P: Polytope) -> Polytope:
    """Ax <= beta + 1/2: same integer points as the integral P, never flat
    around one of them."""
    return Polytope(P.A, [Fraction(b) + Fraction(1, 2) for b in P.beta])


def flatness_for_membership(body, config: Optional[RoundingConfig] = None) -> FlatnessOutcome:
    """Flatness used by the recursion.  Polytopes must be integral; every
    NoInteger is certified and ContainsInteger may carry a witness."""
    config = config or RoundingConfig()
    hook = _early_hook(config.early_slices)
    if isinstance(body, Polytope):
        if body.dim == 1:
            iv = _interval_polytope(body)
            if iv is None:
                return NoInteger("empty interval")
            lo, hi = ceil_frac(iv[0]), floor_frac(iv[1])
            return ContainsInteger([lo]) if lo <= hi else NoInteger("no integer in interval")
        res = _round_polytope_core(relaxed_polytope(body), config, integer_mode=True, hook=hook)
        return _translate(res)
    if body.m == 1:
        return _lp_one_dim(body)
    res = _round_lp_core(body, config, integer_mode=True, hook=hook)
    return _translate(res)
