"""Brute-force reference solvers over certified coefficient boxes.

Every box is derived from an explicit Euclidean radius: if ||B y - t||_2 <= R
then |y_i - y0_i| <= R sqrt((G^{-1})_ii), with y0 the least-squares
coefficients of t and G = B^T B.  Nothing here depends on the main solver.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import List, Optional, Sequence, Tuple

from .cvp import CvpResult, NormSpec, _facets, is_polyhedral, norm_pow
from .errors import BudgetExceeded, RankDeficient
from .exact import (
    ceil_add_sqrt,
    dot,
    floor_add_sqrt,
    iroot_ceil,
    mat_inv,
    mat_mul,
    mat_vec,
    rank,
    round_half_up,
    solve,
    transpose,
)
from .geometry import Ellipsoid, Polytope

DEFAULT_MAX_POINTS = 2_000_000


def _as_int(M):
    if all(a.denominator == 1 for row in M for a in row):
        return [[int(a) for a in row] for row in M]
    return None


def _gram(B) -> List[List[Fraction]]:
    cols = transpose(B)
    return [[Fraction(dot(u, v)) for v in cols] for u in cols]


def _box(B, t, R2: Fraction, max_points: int, M=None) -> List[range]:
    """Coefficient ranges holding every y with (B y - t)^T M (B y - t) <= R2
    (M = identity by default, positive definite otherwise)."""
    m = len(B[0])
    if rank(B) < m:
        raise RankDeficient("lattice basis must have full column rank")
    MB = B if M is None else mat_mul(M, B)
    Bt = transpose(B)
    G = [[Fraction(dot(u, v)) for v in transpose(MB)] for u in Bt]
    Ginv = mat_inv(G)
    y0 = mat_vec(Ginv, mat_vec(transpose(MB), t))
    ranges = []
    for i in range(m):
        rad = R2 * Ginv[i][i]
        ranges.append(range(ceil_add_sqrt(y0[i], rad, -1), floor_add_sqrt(y0[i], rad, 1) + 1))
    total = prod(len(r) for r in ranges)
    if total > max_points:
        raise BudgetExceeded(f"enumeration box has {total} points")
    return ranges


def _norm_radius_sq(norm: NormSpec, n: int, d_pow: Fraction) -> Fraction:
    """R^2 with ||x||_2^2 <= R^2 whenever ||x||^k <= d_pow."""
    if is_polyhedral(norm):
        hs, betas = _facets(norm, n)
        # ||x||_2 <= max vertex norm * ||x||; vertices by brute force
        vmax = Fraction(0)
        for rows in combinations(range(len(hs)), n):
            M = [hs[i] for i in rows]
            if rank(M) < n:
                continue
            for signs in product((1, -1), repeat=n):
                v = solve(M, [s * betas[i] for s, i in zip(signs, rows)])
                if all(abs(dot(h, v)) <= b for h, b in zip(hs, betas)):
                    vmax = max(vmax, dot(v, v))
        return vmax * d_pow * d_pow
    # ||x||_2 <= sqrt(n) ||x||_inf <= sqrt(n) ||x||_p, and ||x||_p <= u
    p = norm.p
    d = Fraction(d_pow)
    if p == 2:
        return d
    u = Fraction(iroot_ceil(d.numerator * d.denominator ** (p - 1), p), d.denominator)
    return n * u * u


def oracle_cvp(
    B: Sequence[Sequence], t: Sequence, norm: NormSpec, max_points: int = DEFAULT_MAX_POINTS
) -> CvpResult:
    """Exact closest vector by enumeration; ties go to the lexicographically
    smallest coefficient vector."""
    Bf = [[Fraction(a) for a in row] for row in B]
    tf = [Fraction(a) for a in t]
    n = len(Bf)
    Ginv = mat_inv(_gram(Bf))
    y0 = mat_vec(Ginv, mat_vec(transpose(Bf), tf))
    yb = [round_half_up(a) for a in y0]
    ub = norm_pow(norm, [a - b for a, b in zip(tf, mat_vec(Bf, yb))])
    R2 = _norm_radius_sq(norm, n, ub)
    best: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    Bi, ti = _as_int(Bf), _as_int([tf])
    for y in product(*_box(Bf, tf, R2, max_points)):
        if Bi is not None and ti is not None:
            d = norm_pow(norm, [a - sum(r * c for r, c in zip(row, y)) for a, row in zip(ti[0], Bi)])
        else:
            d = norm_pow(norm, [a - b for a, b in zip(tf, mat_vec(Bf, y))])
        if best is None or d < best[0] or (d == best[0] and y < best[1]):
            best = (d, y)
    d, y = best
    return CvpResult(list(y), mat_vec(Bf, list(y)), d)


def _polytope_radius_sq(P: Polytope) -> Tuple[List[Fraction], Fraction]:
    """Center and squared radius of a ball holding the bounded polytope P."""
    n = P.dim
    verts = []
    for rows in combinations(range(len(P.A)), n):
        M = [P.A[i] for i in rows]
        if rank(M) < n:
            continue
        v = solve(M, [P.beta[i] for i in rows])
        if P.contains(v):
            verts.append(v)
    if not verts:
        return [Fraction(0)] * n, Fraction(-1)
    c = [sum((v[i] for v in verts), Fraction(0)) / len(verts) for i in range(n)]
    R2 = max(dot([a - b for a, b in zip(v, c)], [a - b for a, b in zip(v, c)]) for v in verts)
    return c, R2


def integer_points(body, B: Optional[Sequence[Sequence]] = None, max_points: int = DEFAULT_MAX_POINTS):
    """All coefficient vectors y with B y in the body (B = identity by default).

    Ellipsoids are closed, polytopes closed, lp-bodies open."""
    if isinstance(body, Ellipsoid):
        m = body.dim
        B = B or [[int(i == j) for j in range(m)] for i in range(m)]
        center, R2 = body.c, max(body.D[i][i] for i in range(m)) * m
        test = body.contains
    elif isinstance(body, Polytope):
        m = body.dim
        B = B or [[int(i == j) for j in range(m)] for i in range(m)]
        center, R2 = _polytope_radius_sq(body)
        if R2 < 0:
            return []
        test = body.contains
    else:
        # ||w||_2^2 <= n ||w||_p^2 < n alpha^2 with w = V^{-1}((x, 0) - t)
        m, n = body.m, body.n
        B = B or [[int(i == j) for j in range(m)] for i in range(m)]
        Bx = [list(row) for row in B] + [[0] * len(B[0]) for _ in range(n - m)]
        Vi = body.V_inv
        M = [[sum((Vi[k][i] * Vi[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        R2 = n * body.alpha ** 2
        ranges = _box([[Fraction(a) for a in row] for row in Bx], body.t, R2, max_points, M)
        return [list(y) for y in product(*ranges) if body.contains(mat_vec(B, list(y)))]
    out = []
    for y in product(*_box([[Fraction(a) for a in row] for row in B], center, R2, max_points)):
        x = mat_vec(B, list(y))
        if test(x):
            out.append(list(y))
    return out


def oracle_lmp(body, B: Optional[Sequence[Sequence]] = None, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """True iff some lattice point lies in the body."""
    return bool(integer_points(body, B, max_points))


def oracle_svp(B: Sequence[Sequence], max_points: int = DEFAULT_MAX_POINTS) -> Tuple[Fraction, List[int]]:
    """(squared length, coefficients) of a shortest nonzero lattice vector."""
    Bf = [[Fraction(a) for a in row] for row in B]
    m = len(Bf[0])
    G = _gram(Bf)
    R2 = min(G[i][i] for i in range(m))
    best = None
    for y in product(*_box(Bf, [0] * len(Bf), R2, max_points)):
        if not any(y):
            continue
        v = mat_vec(Bf, list(y))
        val = dot(v, v)
        if best is None or val < best[0]:
            best = (val, list(y))
    return best
