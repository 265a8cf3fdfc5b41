"""Simultaneous Diophantine approximation and hyperplane replacement with
small coefficients (Frank-Tardos preprocessing)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from .errors import DependentInput
from .exact import lcm_denominators, lll_gram, rank, solve, transpose
from .geometry import AffineSubspace, Hyperplane


@dataclass
class SimDiophApprox:
    q: int
    p: List[int]


@dataclass
class ReplacementSet:
    """Small-coefficient hyperplanes equivalent to one large hyperplane on the
    integer points of an l1-ball inside H.  ``infeasible`` is set when a
    dropped hyperplane contradicts the selected ones on H, so no integer
    point of the ball lies on the original hyperplane."""

    hyperplanes: List[Hyperplane]
    infeasible: bool = False
    dropped: List[Tuple[Tuple[int, ...], int]] = field(default_factory=list)


def _half_exp(k: int) -> int:
    """ceil(k (k+1) / 4)."""
    return -(-k * (k + 1) // 4)


def q_bound(k: int, N: int) -> int:
    """Largest denominator simultaneous_approx may return for k numbers."""
    return 2 ** _half_exp(k) * N ** k


def simultaneous_approx(alpha: Sequence, N: int) -> SimDiophApprox:
    """1 <= q <= q_bound(len(alpha), N) and |q alpha_i - p_i| < 1/N for all i."""
    if N < 2:
        raise ValueError("N must be at least 2")
    a = [Fraction(x) for x in alpha]
    k = len(a)
    Q = q_bound(k, N)
    q0 = lcm_denominators(a)
    if q0 <= Q:
        return SimDiophApprox(q0, [int(x * q0) for x in a])
    lam = Fraction(1, 2 ** _half_exp(k) * N ** (k + 1))
    # columns b_0 = (lam, alpha), b_i = -e_i
    cols = [[lam] + a]
    for i in range(k):
        col = [Fraction(0)] * (k + 1)
        col[i + 1] = Fraction(-1)
        cols.append(col)
    G = [[sum((u[r] * v[r] for r in range(k + 1)), Fraction(0)) for v in cols] for u in cols]
    U, _ = lll_gram(G)
    x = [U[r][0] for r in range(k + 1)]
    if x[0] < 0:
        x = [-t for t in x]
    q, p = x[0], x[1:]
    bound = Fraction(1, N)
    if not (1 <= q <= Q and all(abs(q * ai - pi) < bound for ai, pi in zip(a, p))):
        raise ArithmeticError("approximation bound violated")
    return SimDiophApprox(q, list(p))


def frank_tardos_decompose(w: Sequence, N: int) -> List[Tuple[List[int], Fraction]]:
    """w = sum chi_i wbar_i with integer wbar_i and chi_i > 0.

    Every integer z with ||z||_1 <= N is orthogonal to w iff it is orthogonal
    to every wbar_i.  Each round fixes at least one more coordinate, so there
    are at most len(w) terms and ||wbar_i||_inf <= q_bound(len(w) - 1, N).
    """
    r = [Fraction(x) for x in w]
    if all(x == 0 for x in r):
        raise ValueError("w must be nonzero")
    out: List[Tuple[List[int], Fraction]] = []
    chi = Fraction(1)
    while any(x != 0 for x in r):
        M = max(abs(x) for x in r)
        alpha = [x / M for x in r]
        idx = [i for i, x in enumerate(alpha) if x != 0 and abs(x) != 1]
        approx = simultaneous_approx([alpha[i] for i in idx], N)
        q = approx.q
        p = [int(x * q) if abs(x) in (0, 1) else 0 for x in alpha]
        for i, pi in zip(idx, approx.p):
            p[i] = pi
        chi = chi * M / q
        out.append((p, chi))
        r = [q * a - pi for a, pi in zip(alpha, p)]
    return out


def _in_span_value(normals: List[List[int]], ks: List[int], d: Sequence[int]):
    """If d = sum lam_i normals_i, the constant value sum lam_i k_i of <d, x>
    on the intersection of the hyperplanes; None if d is not in the span."""
    if not normals:
        return None if any(d) else Fraction(0)
    lam = solve(transpose(normals), list(d))
    if lam is None:
        return None
    return sum((l * k for l, k in zip(lam, ks)), Fraction(0))


def _miss_ball(normals: List[List[int]], n: int, N: int) -> Hyperplane:
    """x_j = N for a unit vector e_j outside span(normals): no point of the
    l1 ball of radius N - 1 lies on it."""
    base = rank(normals) if normals else 0
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        if rank(normals + [e]) > base:
            return Hyperplane(e, N)
    raise DependentInput("subspace normals already span R^n")


def replace_hyperplane(H: AffineSubspace, h: Hyperplane, N: int) -> ReplacementSet:
    """Replace <d, x> = k by small hyperplanes equivalent on the integer
    points z of H with ||z||_1 <= N - 1.  When no such z satisfies <d, z> = k
    the set is a single hyperplane missing the ball and ``infeasible`` is set."""
    n = H.n
    normals = H.normals
    ks = [hp.k for hp in H.hyperplanes]
    base_rank = rank(normals) if normals else 0
    if rank(normals + [list(h.d)]) == base_rank:
        raise DependentInput("normal lies in the span of the subspace normals")
    parts = frank_tardos_decompose(list(h.d) + [h.k], N)
    sel_normals = list(normals)
    sel_ks = list(ks)
    chosen: List[Hyperplane] = []
    leftovers: List[Tuple[List[int], int]] = []
    infeasible = False
    for wbar, _ in parts:
        d, k = wbar[:n], wbar[n]
        if any(d) and rank(sel_normals + [d]) > len(sel_normals):
            g = 0
            for a in d:
                g = gcd(g, a)
            if k % g:
                infeasible = True
                break
            chosen.append(Hyperplane(d, k))
            sel_normals.append(list(d))
            sel_ks.append(k)
        else:
            leftovers.append((d, k))
    if not infeasible:
        for d, k in leftovers:
            val = _in_span_value(sel_normals, sel_ks, d)
            if val is None or val != k:
                infeasible = True
                break
    dropped = [(tuple(d), k) for d, k in leftovers]
    if infeasible:
        return ReplacementSet([_miss_ball(normals, n, N)], True, dropped)
    return ReplacementSet(chosen, False, dropped)
