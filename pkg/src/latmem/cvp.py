"""Closest vector problem under lp and polyhedral norms: decision through
lattice membership on closed norm balls, optimization by binary search over
the enumerable distance grid, and search by lattice doubling."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .errors import ContractViolation, RankDeficient
from .exact import (
    dot,
    floor_frac,
    iroot_floor,
    lcm_denominators,
    lll_gram,
    mat_inv,
    mat_mul,
    mat_vec,
    rank,
    round_half_up,
    solve,
    transpose,
)
from .geometry import LpBody, Polytope, polytope_vertices, symmetric_polytope
from .lattice import gram
from .membership import Config, Stats, lattice_completion, solve_membership, MembershipInstance


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class NormSpec:
    """kind is 'lp' (integer p >= 1), 'inf', or 'poly' ({x : |<h_i, x>| <= beta_i})."""

    kind: str
    p: int = 0
    H: Tuple[Tuple[int, ...], ...] = ()
    beta: Tuple[int, ...] = ()

    @staticmethod
    def lp(p: int) -> "NormSpec":
        if p < 1:
            raise ValueError("p must be a positive integer")
        return NormSpec("lp", p=p)

    @staticmethod
    def infinity() -> "NormSpec":
        return NormSpec("inf")

    @staticmethod
    def polyhedral(H: Sequence[Sequence[int]], beta: Sequence[int]) -> "NormSpec":
        if len(H) != len(beta) or not H:
            raise ContractViolation("polyhedral norm needs matching rows and bounds")
        if any(int(b) != b or b <= 0 for b in beta):
            raise ContractViolation("polyhedral bounds must be positive integers")
        if rank([list(h) for h in H]) < len(H[0]):
            raise ContractViolation("polyhedral norm ball is unbounded")
        return NormSpec("poly", H=tuple(tuple(int(a) for a in h) for h in H), beta=tuple(int(b) for b in beta))

    def label(self) -> str:
        if self.kind == "lp":
            return f"l{self.p}"
        if self.kind == "inf":
            return "linf"
        return f"poly{len(self.H)}"


@dataclass(frozen=True)
class EnumerableNorm:
    k: int
    K: int


def enumerability(norm: NormSpec) -> EnumerableNorm:
    """(k, K) with K * ||x||^k integral for every integer vector x."""
    if norm.kind == "lp":
        return EnumerableNorm(norm.p, 1)
    if norm.kind == "inf":
        return EnumerableNorm(1, 1)
    return EnumerableNorm(1, reduce(lambda a, b: a * b, norm.beta, 1))


def _grid_K(norm: NormSpec) -> int:
    """Smallest valid K (lcm instead of product for polyhedral norms)."""
    if norm.kind != "poly":
        return 1
    return reduce(lambda a, b: a * b // gcd(a, b), norm.beta, 1)


def _facets(norm: NormSpec, n: int) -> Tuple[List[List[int]], List[int]]:
    """(h_i, beta_i) with ||x|| = max_i |<h_i, x>| / beta_i (polyhedral norms)."""
    if norm.kind == "inf":
        return [[int(i == j) for j in range(n)] for i in range(n)], [1] * n
    if norm.kind == "lp" and norm.p == 1:
        rows = [[1] + list(s) for s in product((1, -1), repeat=n - 1)]
        return rows, [1] * len(rows)
    if norm.kind == "poly":
        if len(norm.H[0]) != n:
            raise ContractViolation("polyhedral norm has the wrong dimension")
        return [list(h) for h in norm.H], list(norm.beta)
    raise ValueError("not a polyhedral norm")


def is_polyhedral(norm: NormSpec) -> bool:
    return norm.kind in ("inf", "poly") or (norm.kind == "lp" and norm.p == 1)


def norm_pow(norm: NormSpec, x: Sequence) -> Fraction:
    """||x||^k exactly."""
    if all(isinstance(a, int) or a.denominator == 1 for a in x):
        xi = [int(a) for a in x]
        if norm.kind == "lp":
            return Fraction(sum(abs(a) ** norm.p for a in xi))
        if norm.kind == "inf":
            return Fraction(max((abs(a) for a in xi), default=0))
        best = Fraction(0)
        for h, b in zip(norm.H, norm.beta):
            v = abs(sum(p * q for p, q in zip(h, xi)))
            if v * best.denominator > best.numerator * b:
                best = Fraction(v, b)
        return best
    x = [Fraction(a) for a in x]
    if norm.kind == "lp":
        return sum((abs(a) ** norm.p for a in x), Fraction(0))
    if norm.kind == "inf":
        return max((abs(a) for a in x), default=Fraction(0))
    return max(abs(dot(h, x)) / b for h, b in zip(norm.H, norm.beta))


def euclid_ratio_sq(norm: NormSpec, n: int) -> Tuple[Fraction, Fraction]:
    """(c2, C2) with c2 ||x||_2^2 <= ||x||^2 <= C2 ||x||_2^2 (rational bounds)."""
    if norm.kind == "lp":
        if norm.p == 1:
            return Fraction(1), Fraction(n)
        return Fraction(1, n), Fraction(1)
    if norm.kind == "inf":
        return Fraction(1, n), Fraction(1)
    P = symmetric_polytope(norm.H, norm.beta)
    verts = polytope_vertices(P, limit=10 ** 6)
    vmax = max(dot(v, v) for v in verts)
    hmin = min(Fraction(b * b, dot(h, h)) for h, b in zip(norm.H, norm.beta))
    return 1 / vmax, 1 / hmin


# ---------------------------------------------------------------------------
# instances


@dataclass
class CvpResult:
    coeffs: List[int]
    closest: List[Fraction]
    distance_pow: Fraction
    stats: Stats = field(default_factory=Stats)


class _Instance:
    """Integral rescaling of (B, t): distances scale by S, powers by S^k."""

    def __init__(self, B: Sequence[Sequence], t: Sequence, norm: NormSpec):
        n = len(B)
        if n == 0 or len(t) != n:
            raise ContractViolation("basis and target dimensions differ")
        m = len(B[0])
        Bf = [[Fraction(a) for a in row] for row in B]
        tf = [Fraction(a) for a in t]
        if m == 0 or rank(Bf) < m:
            raise RankDeficient("lattice basis must have full column rank")
        S = lcm_denominators([Bf, tf])
        self.n, self.m = n, m
        self.S = S
        self.B = [[int(a * S) for a in row] for row in Bf]
        self.t = [int(a * S) for a in tf]
        self.norm = norm
        self.k = enumerability(norm).k
        self.K = _grid_K(norm)
        self.Sk = Fraction(S) ** self.k

    def vec(self, y: Sequence[int]) -> List[int]:
        return mat_vec(self.B, y)

    def dist_pow(self, y: Sequence[int]) -> Fraction:
        return norm_pow(self.norm, [a - b for a, b in zip(self.t, self.vec(y))])


def _closed_ball_body(B: List[List[int]], t: List[int], norm: NormSpec, r: Fraction):
    """Body in lattice coordinates whose integer points are exactly the y with
    ||B y - t||^k <= r (B, t integral).  None when no vector can qualify."""
    n = len(B)
    m = len(B[0])
    if r < 0:
        return None
    if is_polyhedral(norm):
        hs, betas = _facets(norm, n)
        A, b = [], []
        for h, beta in zip(hs, betas):
            row = [dot(h, col) for col in transpose(B)]
            cap = floor_frac(r * beta)
            ht = dot(h, t)
            A.append(row)
            b.append(cap + ht)
            A.append([-a for a in row])
            b.append(cap - ht)
        return Polytope(A, b)
    p = norm.p
    target = floor_frac(r) + 1  # integer values: ||.||^p <= floor(r) iff < alpha^p
    lo = target - 1
    bits = 0
    while True:
        a = iroot_floor(target << (bits * p), p)
        if a ** p > lo << (bits * p):
            break
        bits += 1
    W = lattice_completion(B)
    tw = mat_vec(mat_inv(W), t)
    return LpBody(p, W, tw, a, 1 << bits, m)


def _decide(inst: _Instance, B: List[List[int]], t: List[int], r: Fraction, config: Config, stats: Stats) -> bool:
    if r == 0:
        y = solve(B, t)
        return y is not None and all(a.denominator == 1 for a in y)
    body = _closed_ball_body(B, t, inst.norm, r)
    if body is None:
        return False
    res = solve_membership(MembershipInstance(body), config)
    stats.recursive_calls += res.stats.recursive_calls
    stats.flatness_calls += res.stats.flatness_calls
    stats.max_coeff_bits = max(stats.max_coeff_bits, res.stats.max_coeff_bits)
    return res.member


def cvp_decision(
    B: Sequence[Sequence], t: Sequence, norm: NormSpec, r_pow, config: Optional[Config] = None
) -> bool:
    """True iff some lattice vector u has ||t - u||^k <= r_pow."""
    inst = _Instance(B, t, norm)
    return _decide(inst, inst.B, inst.t, Fraction(r_pow) * inst.Sk, config or Config(), Stats())


def _reduced(inst: _Instance):
    """LLL-reduced basis B U and U."""
    U, _ = lll_gram(gram(inst.B))
    return mat_mul(inst.B, U), U


def _least_squares(B, t) -> List[Fraction]:
    return mat_vec(mat_inv(gram(B)), mat_vec(transpose(B), t))


def _babai(B: List[List[int]], t: List[int]) -> List[int]:
    return [round_half_up(a) for a in _least_squares(B, t)]


def _optimize(inst: _Instance, Bred, config: Config, stats: Stats) -> Fraction:
    """mu^k of the scaled instance."""
    y = _babai(Bred, inst.t)
    hi_val = norm_pow(inst.norm, [a - b for a, b in zip(inst.t, mat_vec(Bred, y))])
    K = inst.K
    hi = int(hi_val * K)
    assert hi == hi_val * K
    if _decide(inst, Bred, inst.t, Fraction(0), config, stats):
        return Fraction(0)
    lo = 0  # known false
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _decide(inst, Bred, inst.t, Fraction(mid, K), config, stats):
            hi = mid
        else:
            lo = mid
    return Fraction(hi, K)


def cvp_optimize(B: Sequence[Sequence], t: Sequence, norm: NormSpec, config: Optional[Config] = None) -> Fraction:
    """Exact mu^k, mu the distance from t to the lattice."""
    inst = _Instance(B, t, norm)
    Bred, _ = _reduced(inst)
    return _optimize(inst, Bred, config or Config(), Stats()) / inst.Sk


def _rounding_threshold_sq(inst: _Instance, Bred) -> Fraction:
    """c^2 with ||B z|| >= c ||z||_inf for all real z."""
    c2, _ = euclid_ratio_sq(inst.norm, inst.n)
    Ginv = mat_inv(gram(Bred))
    return c2 / max(Ginv[i][i] for i in range(inst.m))


def cvp_search(B: Sequence[Sequence], t: Sequence, norm: NormSpec, config: Optional[Config] = None) -> CvpResult:
    """A closest lattice vector and its exact distance power."""
    config = config or Config()
    stats = Stats()
    inst = _Instance(B, t, norm)
    Bred, U = _reduced(inst)
    mu = _optimize(inst, Bred, config, stats)
    k, m = inst.k, inst.m
    if mu == 0:
        y = [int(a) for a in solve(Bred, inst.t)]
    else:
        c2 = _rounding_threshold_sq(inst, Bred)
        mu2 = mu * mu
        cur = [list(row) for row in Bred]
        tau = list(inst.t)
        s = [0] * m
        scale = 1  # cur = scale * Bred after each full round
        while not ((Fraction(scale, 2) ** 2 * c2) ** k > mu2):
            for j in range(m):
                trial = [row[:] for row in cur]
                for i in range(inst.n):
                    trial[i][j] *= 2
                if not _decide(inst, trial, tau, mu, config, stats):
                    tau = [a - row[j] for a, row in zip(tau, cur)]
                    s[j] += scale
                cur = trial
            scale *= 2
        beta = _least_squares(Bred, tau)
        y = [scale * round_half_up(b / scale) + sj for b, sj in zip(beta, s)]
    diff = [a - b for a, b in zip(inst.t, mat_vec(Bred, y))]
    if norm_pow(norm, diff) != mu:
        raise ArithmeticError("search did not reach the optimal distance")
    coeffs = mat_vec(U, y)
    closest = [Fraction(a, inst.S) for a in mat_vec(inst.B, coeffs)]
    return CvpResult([int(a) for a in coeffs], closest, mu / inst.Sk, stats)
