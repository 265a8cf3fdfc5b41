"""Convex bodies (ellipsoids, polytopes, lp-bodies), supports, subgradients,
circumscribed balls and volume floors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple, Union

from .errors import NotPositiveDefinite, Singular, ZeroSubgradientOutside
from .exact import (
    Matrix,
    Number,
    ceil_frac,
    dot,
    floor_sqrt,
    is_positive_definite,
    lcm_denominators,
    mat_inv,
    mat_vec,
    size,
    solve,
    sqrt_upper,
    transpose,
)


# ---------------------------------------------------------------------------
# types


@dataclass
class Ellipsoid:
    """E(D, c) = {x : (x - c)^T D^{-1} (x - c) <= 1}."""

    D: List[List[Fraction]]
    c: List[Fraction]

    def __post_init__(self) -> None:
        self.D = [[Fraction(a) for a in row] for row in self.D]
        self.c = [Fraction(a) for a in self.c]
        if not is_positive_definite(self.D):
            raise NotPositiveDefinite("ellipsoid matrix is not positive definite")

    @property
    def dim(self) -> int:
        return len(self.c)

    def norm_sq(self, x: Sequence[Number]) -> Fraction:
        diff = [Fraction(a) - b for a, b in zip(x, self.c)]
        y = solve(self.D, diff)
        return dot(diff, y)

    def contains(self, x: Sequence[Number]) -> bool:
        return self.norm_sq(x) <= 1

    def scaled(self, r: Number) -> "Ellipsoid":
        r2 = Fraction(r) ** 2
        return Ellipsoid([[r2 * a for a in row] for row in self.D], list(self.c))


@dataclass
class Polytope:
    """P = {x : A x <= beta}."""

    A: List[List[int]]
    beta: List[Number]

    def __post_init__(self) -> None:
        self.A = [list(row) for row in self.A]
        self.beta = list(self.beta)
        if len(self.A) != len(self.beta):
            raise ValueError("A and beta disagree on the number of constraints")

    @property
    def dim(self) -> int:
        return len(self.A[0]) if self.A else 0

    def slack(self, x: Sequence[Number]) -> List[Number]:
        return [b - dot(a, x) for a, b in zip(self.A, self.beta)]

    def contains(self, x: Sequence[Number]) -> bool:
        return all(dot(a, x) <= b for a, b in zip(self.A, self.beta))

    def contains_strict(self, x: Sequence[Number]) -> bool:
        return all(dot(a, x) < b for a, b in zip(self.A, self.beta))


@dataclass
class LpBody:
    """{x in R^m : alpha_d^p ||V^{-1}((x, 0) - t)||_p^p - alpha_n^p < 0}."""

    p: int
    V_inv: List[List[Fraction]]
    t: List[Fraction]
    alpha_n: int
    alpha_d: int
    m: int

    def __post_init__(self) -> None:
        self.V_inv = [[Fraction(a) for a in row] for row in self.V_inv]
        self.t = [Fraction(a) for a in self.t]
        if self.p < 2:
            raise ValueError("lp-bodies need an integer p >= 2")
        if self.alpha_n <= 0 or self.alpha_d <= 0:
            raise ValueError("alpha must be positive")
        if not 1 <= self.m <= self.n:
            raise ValueError("active dimension must lie in [1, n]")

    @property
    def n(self) -> int:
        return len(self.V_inv)

    @property
    def dim(self) -> int:
        return self.m

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha_n, self.alpha_d)

    def w(self, x: Sequence[Number]) -> List[Fraction]:
        full = list(x) + [0] * (self.n - self.m)
        diff = [Fraction(a) - b for a, b in zip(full, self.t)]
        return mat_vec(self.V_inv, diff)

    def value(self, x: Sequence[Number]) -> Fraction:
        return lp_value(self, x)

    def contains(self, x: Sequence[Number]) -> bool:
        return lp_value(self, x) < 0


ConvexBody = Union[Polytope, LpBody]


@dataclass(frozen=True)
class Hyperplane:
    """H_{k,d} = {x : <x, d> = k}."""

    d: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", tuple(int(a) for a in self.d))
        object.__setattr__(self, "k", int(self.k))
        if all(a == 0 for a in self.d):
            raise ValueError("hyperplane normal must be nonzero")

    def contains(self, x: Sequence[Number]) -> bool:
        return dot(self.d, x) == self.k


@dataclass
class AffineSubspace:
    """Intersection of hyperplanes in R^n (all of R^n when empty)."""

    n: int
    hyperplanes: List[Hyperplane] = field(default_factory=list)

    @property
    def normals(self) -> List[List[int]]:
        return [list(h.d) for h in self.hyperplanes]

    @property
    def dim(self) -> int:
        return self.n - len(self.hyperplanes)

    def contains(self, x: Sequence[Number]) -> bool:
        return all(h.contains(x) for h in self.hyperplanes)

    def extended(self, extra: Sequence[Hyperplane]) -> "AffineSubspace":
        return AffineSubspace(self.n, list(self.hyperplanes) + list(extra))


# ---------------------------------------------------------------------------
# ellipsoids


def ellipsoid_support(E: Ellipsoid, d: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """(<d, c>, d^T D d): the support of E along d is center +- sqrt(radicand)."""
    if all(a == 0 for a in d):
        raise ValueError("direction must be nonzero")
    return Fraction(dot(d, E.c)), Fraction(dot(d, mat_vec(E.D, d)))


# ---------------------------------------------------------------------------
# lp-bodies


def lp_value(body: LpBody, x: Sequence[Number]) -> Fraction:
    w = body.w(x)
    p = body.p
    total = sum((abs(a) ** p for a in w), Fraction(0))
    return body.alpha_d ** p * total - body.alpha_n ** p


def lp_norm_pow(v: Sequence[Number], p: int) -> Fraction:
    return sum((abs(Fraction(a)) ** p for a in v), Fraction(0))


def lp_subgradient(body: LpBody, y: Sequence[Number]) -> List[Fraction]:
    """Subgradient of F at y: alpha_d^p * p * [(V^{-1})^T gbar]_{1..m},
    gbar_i = sign(w_i) |w_i|^{p-1}, w = V^{-1}((y, 0) - t)."""
    p = body.p
    w = body.w(y)
    gbar = [(a ** (p - 1) if a >= 0 else -((-a) ** (p - 1))) for a in w]
    g = mat_vec(transpose(body.V_inv), gbar)
    s = body.alpha_d ** p * p
    return [s * a for a in g[: body.m]]


def lp_separate(body: LpBody, y: Sequence[Number]) -> Optional[List[Fraction]]:
    """None if y lies in the body, else g with <g, x> < <g, y> on the body."""
    if lp_value(body, y) < 0:
        return None
    g = lp_subgradient(body, y)
    if all(a == 0 for a in g):
        raise ZeroSubgradientOutside("zero subgradient at an outside point")
    return g


def lp_V(body: LpBody) -> List[List[Fraction]]:
    try:
        return mat_inv(body.V_inv)
    except Singular:
        raise Singular("V^{-1} is singular")


def frobenius_sq(M: Matrix) -> Fraction:
    return sum((Fraction(a) ** 2 for row in M for a in row), Fraction(0))


def lp_circumscribed_radius_sq(body: LpBody) -> Fraction:
    """Upper bound alpha^2 * n * ||V||_F^2 on the squared circumscribed radius."""
    return body.alpha ** 2 * body.n * frobenius_sq(lp_V(body))


def lp_circumscribed_center(body: LpBody) -> List[Fraction]:
    return list(body.t[: body.m])


def lp_size(body: LpBody) -> int:
    return max(size(body.V_inv), size(body.t), body.alpha_n, body.alpha_d, body.n)


def lp_radius_bound(body: LpBody, S: Number) -> Fraction:
    """max(alpha sqrt(n) ||V|| + m S, alpha sqrt(n) m ||V|| S), Frobenius-bounded."""
    rv = sqrt_upper(lp_circumscribed_radius_sq(body))
    return max(rv + body.m * Fraction(S), rv * body.m * Fraction(S))


def lp_volume_floor(body: LpBody, S: Number, R: Number) -> Fraction:
    """(S^{2 n^2 p} * m * (alpha_d n S^2 R)^{p+1})^{-1}."""
    n, m, p = body.n, body.m, body.p
    S = Fraction(S)
    R = Fraction(R)
    return 1 / (S ** (2 * n * n * p) * m * (body.alpha_d * n * S * S * R) ** (p + 1))


def lp_integer_scale(body: LpBody) -> int:
    """K with K * F(x) integral for every integer x."""
    cols = [row[: body.m] for row in body.V_inv]
    shift = mat_vec(body.V_inv, body.t)
    L = lcm_denominators([cols, shift])
    return L ** body.p


def lp_certified_floor_sq(body: LpBody) -> Fraction:
    """Squared radius of a ball that fits inside the body around any integer
    point of it: F <= -1/K there and F is M-Lipschitz near the body."""
    K = lp_integer_scale(body)
    R2 = lp_circumscribed_radius_sq(body)
    tail = sum((a * a for a in body.t[body.m:]), Fraction(0))
    vinv_f = frobenius_sq(body.V_inv)
    W2 = vinv_f * (2 * R2 + 2 + tail)
    p = body.p
    M2 = Fraction(body.alpha_d) ** (2 * p) * p * p * vinv_f * body.n * W2 ** (p - 1)
    return 1 / (4 * K * K * M2)


def lp_l1_bound(body: LpBody) -> int:
    """Integer N with every point of the body inside the l1 ball of radius N - 1."""
    r = lp_size(body)
    vf = sqrt_upper(frobenius_sq(lp_V(body)))
    paper = ceil_frac(2 * body.n * r * vf) + 1
    t1 = sum((abs(a) for a in body.t), Fraction(0))
    direct = ceil_frac(t1 + body.n * body.alpha * vf) + 1
    return max(paper, direct)


# ---------------------------------------------------------------------------
# polytopes


def polytope_size(P: Polytope) -> int:
    return max(P.dim, len(P.A), size(P.A), size(P.beta))


def polytope_bounds(P: Polytope) -> Tuple[int, Fraction]:
    """(t_box, h_inner_sq): P lies in [-t_box, t_box]^n, and a symmetric P
    contains the ball of squared radius min beta_i^2 / ||a_i||^2."""
    n = P.dim
    r = polytope_size(P)
    target = n ** n * r ** (2 * n)
    t = floor_sqrt(target)
    if t * t < target:
        t += 1
    h = min(Fraction(b) ** 2 / dot(a, a) for a, b in zip(P.A, P.beta) if any(a))
    return t, h


def polytope_l1_bound(P: Polytope) -> int:
    """N = ceil(n^{(n+3)/2} r^n) + 1."""
    n = P.dim
    r = polytope_size(P)
    target = n ** (n + 3) * r ** (2 * n)
    t = floor_sqrt(target)
    if t * t < target:
        t += 1
    return t + 1


def polytope_vertices(P: Polytope, limit: int = 5000) -> Optional[List[List[Fraction]]]:
    """All vertices (exact); None when the subset enumeration exceeds ``limit``."""
    n = P.dim
    s = len(P.A)
    if comb(s, n) > limit:
        return None
    seen = set()
    out: List[List[Fraction]] = []
    for rows in combinations(range(s), n):
        M = [P.A[i] for i in rows]
        b = [P.beta[i] for i in rows]
        try:
            Minv = mat_inv(M)
        except Singular:
            continue
        v = mat_vec(Minv, b)
        if P.contains(v):
            key = tuple(v)
            if key not in seen:
                seen.add(key)
                out.append(v)
    return out


def symmetric_polytope(H: Sequence[Sequence[int]], beta: Sequence[int]) -> Polytope:
    """{x : |<h_i, x>| <= beta_i}."""
    A: List[List[int]] = []
    b: List[int] = []
    for h, bb in zip(H, beta):
        A.append(list(h))
        b.append(bb)
        A.append([-a for a in h])
        b.append(bb)
    return Polytope(A, b)
