"""Recursive lattice membership: does a bounded convex body meet an affine
subspace in an integer point?"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

from .diophantine import replace_hyperplane
from .errors import (
    ContractViolation,
    DependentNormals,
    DepthExceeded,
    DimensionTooLarge,
    NoIntegerPointInSubspace,
    RankDeficient,
)
from .exact import (
    dot,
    identity,
    lcm_denominators,
    mat_inv,
    mat_mul,
    mat_vec,
    rank,
    transpose,
)
from .flatness import ContainsInteger, Direction, NoInteger, flatness_for_membership
from .geometry import (
    AffineSubspace,
    ConvexBody,
    Hyperplane,
    LpBody,
    Polytope,
    lp_l1_bound,
    polytope_l1_bound,
)
from .lattice import complete_basis, integer_point_in_subspace, intersection_basis
from .rounding import RoundingConfig

DEFAULT_MAX_DIMENSION = 8


def default_max_dimension() -> int:
    raw = os.environ.get("LATMEM_MAX_DIM")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_MAX_DIMENSION


@dataclass
class Config:
    no_replacement: bool = False
    max_dimension: int = field(default_factory=default_max_dimension)
    rounding_bits: Optional[int] = None
    early_slices: int = 2
    shortcuts: bool = True

    def rounding(self) -> RoundingConfig:
        return RoundingConfig(
            rounding_bits=self.rounding_bits, early_slices=self.early_slices, shortcuts=self.shortcuts
        )


@dataclass
class Stats:
    recursive_calls: int = 0
    flatness_calls: int = 0
    max_coeff_bits: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict:
        return {
            "recursive_calls": self.recursive_calls,
            "flatness_calls": self.flatness_calls,
            "max_coeff_bits": self.max_coeff_bits,
        }


@dataclass
class MembershipInstance:
    body: ConvexBody
    subspace: Optional[AffineSubspace] = None


@dataclass
class MembershipResult:
    member: bool
    stats: Stats
    witness: Optional[List[int]] = None
    N: int = 0


# ---------------------------------------------------------------------------
# the transformation tau


@dataclass
class TauTransform:
    """tau(x) = Vbar (x - v); maps the integer points of H onto Z^m x {0}."""

    Vbar: List[List[Fraction]]
    v: List[int]
    m: int
    Vbar_inv: List[List[Fraction]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.Vbar_inv is None:
            self.Vbar_inv = mat_inv(self.Vbar)

    @property
    def n(self) -> int:
        return len(self.v)

    def forward(self, x: Sequence) -> List[Fraction]:
        return mat_vec(self.Vbar, [Fraction(a) - b for a, b in zip(x, self.v)])

    def inverse(self, y: Sequence) -> List[Fraction]:
        return [a + b for a, b in zip(mat_vec(self.Vbar_inv, y), self.v)]

    def lift(self, y: Sequence) -> List[Fraction]:
        """tau^{-1}((y, 0))."""
        return self.inverse(list(y) + [0] * (self.n - self.m))

    def pull_direction(self, d: Sequence[int]) -> List[Fraction]:
        """Vbar^T (d, 0): <d, tau(x)> = <result, x> - <result, v>."""
        full = list(d) + [0] * (self.n - self.m)
        return mat_vec(transpose(self.Vbar), full)


def build_tau(H: AffineSubspace, n: Optional[int] = None) -> TauTransform:
    n = H.n if n is None else n
    hs = H.hyperplanes
    m = n - len(hs)
    if not hs:
        I = identity(n)
        return TauTransform([[Fraction(a) for a in row] for row in I], [0] * n, n, [[Fraction(a) for a in row] for row in I])
    v = integer_point_in_subspace(hs, n)
    if v is None:
        raise NoIntegerPointInSubspace("subspace has no integer point")
    normals = [list(h.d) for h in hs]
    extra = complete_basis(normals, n)
    cols = extra + normals  # B = [b_1..b_m, d_{m+1}..d_n]
    B = transpose(cols)
    Dbar = intersection_basis(B, m)
    Dhat = [[Fraction(0)] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            Dhat[i][j] = Fraction(Dbar[i][j])
    for i in range(m, n):
        Dhat[i][i] = Fraction(1)
    Vbar = mat_mul(mat_inv(Dhat), transpose(B))
    return TauTransform(Vbar, list(v), m)


# ---------------------------------------------------------------------------
# bodies restricted to H, in tau coordinates


def _integral_polytope(P: Polytope) -> Polytope:
    """Scale rows so A and beta are integral; drop zero rows."""
    A, b = [], []
    for row, bb in zip(P.A, P.beta):
        L = lcm_denominators(list(row) + [bb])
        A.append([int(Fraction(x) * L) for x in row])
        b.append(int(Fraction(bb) * L))
    return Polytope(A, b)


def _restrict_polytope(P: Polytope, tau: TauTransform) -> Optional[Polytope]:
    """Polytope of tau(P ∩ H) in R^m; None when some zero row is violated."""
    m = tau.m
    cols = [[tau.Vbar_inv[i][j] for i in range(tau.n)] for j in range(m)]
    A, b = [], []
    seen = set()
    for row, bb in zip(P.A, P.beta):
        new = [dot(row, c) for c in cols]
        nb = bb - dot(row, tau.v)
        if all(x == 0 for x in new):
            if nb < 0:
                return None
            continue
        new = [int(x) for x in new]
        g = 0
        for x in new:
            g = gcd(g, x)
        new = [x // g for x in new]
        nb = Fraction(nb) / g
        nb = nb.numerator // nb.denominator
        key = tuple(new)
        if key in seen:
            idx = A.index(new)
            b[idx] = min(b[idx], nb)
            continue
        seen.add(key)
        A.append(new)
        b.append(nb)
    return Polytope(A, b)


def _restrict_lp(body: LpBody, tau: TauTransform) -> LpBody:
    m0 = body.m
    n = body.n
    blk = [[Fraction(0)] * n for _ in range(n)]
    for i in range(m0):
        for j in range(m0):
            blk[i][j] = tau.Vbar_inv[i][j]
    for i in range(m0, n):
        blk[i][i] = Fraction(1)
    V_inv = mat_mul(body.V_inv, blk)
    t1 = tau.forward(body.t[:m0])
    return LpBody(body.p, V_inv, t1 + list(body.t[m0:]), body.alpha_n, body.alpha_d, tau.m)


def _space_dim(body: ConvexBody) -> int:
    return body.dim


def _contains(body: ConvexBody, x: Sequence) -> bool:
    return body.contains(x)


# ---------------------------------------------------------------------------
# recursion


class _Solver:
    def __init__(self, body: ConvexBody, config: Config):
        self.config = config
        self.stats = Stats()
        if isinstance(body, Polytope):
            body = _integral_polytope(body)
            self.N = polytope_l1_bound(body)
        else:
            self.N = lp_l1_bound(body)
        self.body = body
        self.n = _space_dim(body)
        self.rounding = config.rounding()
        # 2^{(n+2)^2} N^n, kept as a bit count
        self.coeff_limit = 2 ** ((self.n + 2) ** 2) * self.N ** self.n
        self.witness: Optional[List[int]] = None

    def _restrict(self, tau: TauTransform):
        if isinstance(self.body, Polytope):
            return _restrict_polytope(self.body, tau)
        return _restrict_lp(self.body, tau)

    def _record(self, hs: Sequence[Hyperplane]) -> None:
        for h in hs:
            bits = max(max(abs(a) for a in h.d).bit_length(), abs(h.k).bit_length())
            if bits > self.stats.max_coeff_bits:
                self.stats.max_coeff_bits = bits
            if not self.config.no_replacement:
                assert max(max(abs(a) for a in h.d), abs(h.k)) <= self.coeff_limit

    def run(self, H: List[Hyperplane], depth: int) -> bool:
        st = self.stats
        st.recursive_calls += 1
        st.max_depth = max(st.max_depth, depth)
        if depth > self.n:
            raise DepthExceeded("recursion deeper than the dimension")
        m = self.n - len(H)
        if m == 0:
            v = integer_point_in_subspace(H, self.n)
            if v is not None and _contains(self.body, v):
                self.witness = v
                return True
            return False
        try:
            tau = build_tau(AffineSubspace(self.n, list(H)), self.n)
        except NoIntegerPointInSubspace:
            return False
        sub = self._restrict(tau)
        if sub is None:
            return False
        st.flatness_calls += 1
        out = flatness_for_membership(sub, self.rounding)
        if isinstance(out, ContainsInteger):
            if out.witness is not None:
                x = tau.lift(out.witness)
                self.witness = [int(a) for a in x]
            return True
        if isinstance(out, NoInteger):
            return False
        return self._branch(H, tau, out, depth)

    def _branch(self, H: List[Hyperplane], tau: TauTransform, out: Direction, depth: int) -> bool:
        dm = tau.pull_direction(out.d)
        L = lcm_denominators(dm)
        dint = [int(a * L) for a in dm]
        shift = dot(dm, tau.v)
        ks = list(range(out.k_min, out.k_max + 1))
        mid = (out.k_min + out.k_max) // 2
        ks.sort(key=lambda k: (abs(k - mid), k))
        sub = AffineSubspace(self.n, list(H))
        for k in ks:
            kk = L * (k + shift)
            assert kk.denominator == 1
            h = Hyperplane(dint, int(kk))
            if self.config.no_replacement:
                g = 0
                for a in h.d:
                    g = gcd(g, a)
                if h.k % g:
                    continue
                new = [Hyperplane([a // g for a in h.d], h.k // g)]
            else:
                rs = replace_hyperplane(sub, h, self.N)
                if rs.infeasible:
                    continue
                new = rs.hyperplanes
            self._record(new)
            if self.run(list(H) + new, depth + 1):
                return True
        return False


def _check_dimension(n: int, config: Config) -> None:
    if n > config.max_dimension:
        raise DimensionTooLarge(f"dimension {n} exceeds the limit {config.max_dimension}")


def solve_membership(inst: MembershipInstance, config: Optional[Config] = None) -> MembershipResult:
    config = config or Config()
    solver = _Solver(inst.body, config)
    _check_dimension(solver.n, config)
    if isinstance(inst.body, Polytope) and rank(inst.body.A) < inst.body.dim:
        raise ContractViolation("polytope is unbounded: constraint matrix lacks full column rank")
    H = list(inst.subspace.hyperplanes) if inst.subspace is not None else []
    if H:
        if rank([list(h.d) for h in H]) < len(H):
            raise DependentNormals("subspace normals are dependent")
    ok = solver.run(H, 0)
    return MembershipResult(ok, solver.stats, solver.witness if ok else None, solver.N)


def membership(inst: MembershipInstance, config: Optional[Config] = None) -> bool:
    """True iff body ∩ H contains an integer point."""
    return solve_membership(inst, config).member


# ---------------------------------------------------------------------------
# general lattices


def lattice_completion(B: Sequence[Sequence]) -> List[List[Fraction]]:
    """W = [B | C] nonsingular, C made of unit vectors."""
    n = len(B)
    cols = transpose(B)
    extra = complete_basis(cols, n)
    return transpose([list(map(Fraction, c)) for c in cols] + [[Fraction(a) for a in e] for e in extra])


def body_in_lattice_coords(body: ConvexBody, B: Sequence[Sequence]) -> ConvexBody:
    """{y in R^m : B y in body} for a basis B (n x m, full column rank)."""
    n = len(B)
    m = len(B[0]) if n else 0
    if m == 0 or rank(B) < m:
        raise RankDeficient("lattice basis must have full column rank")
    if isinstance(body, Polytope):
        A = mat_mul(body.A, B)
        return _integral_polytope(Polytope(A, body.beta))
    if body.m != body.n:
        raise ValueError("lp-body must be full-dimensional in its ambient space")
    W = lattice_completion(B)
    V_inv = mat_mul(body.V_inv, W)
    t = mat_vec(mat_inv(W), body.t)
    return LpBody(body.p, V_inv, t, body.alpha_n, body.alpha_d, m)


def lmp_solve_result(body: ConvexBody, B: Sequence[Sequence], config: Optional[Config] = None) -> MembershipResult:
    config = config or Config()
    _check_dimension(len(B), config)
    sub = body_in_lattice_coords(body, B)
    res = solve_membership(MembershipInstance(sub), config)
    if res.witness is not None:
        res.witness = mat_vec(B, res.witness)
    return res


def lmp_solve(body: ConvexBody, B: Sequence[Sequence], config: Optional[Config] = None) -> bool:
    """True iff the body contains a point of the lattice spanned by the columns of B."""
    return lmp_solve_result(body, B, config).member
