"""Shallow-cut ellipsoid rounding of polytopes and lp-bodies.

The method keeps an outer ellipsoid E(D, c) that contains the body and shrinks
it with shallow cuts until a certified inner ellipsoid is found.  All updates
are exact: the new ellipsoid provably contains the old one cut by the
half-space, and entries are snapped to a dyadic grid after an explicit
inflation so their size stays bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .errors import Degenerate
from .exact import (
    ceil_frac,
    det,
    dot,
    floor_add_sqrt,
    ceil_add_sqrt,
    iroot_ceil,
    lcm_denominators,
    ldl,
    mat_inv,
    mat_vec,
    round_half_up,
    sqrt_bracket,
    sqrt_lower,
    sqrt_upper,
    floor_sqrt,
)
from .geometry import (
    Ellipsoid,
    LpBody,
    Polytope,
    lp_certified_floor_sq,
    lp_subgradient,
    lp_value,
    polytope_bounds,
    polytope_vertices,
)
from .lattice import shortest_form_vector


@dataclass
class Sandwich:
    """E is inside the body and the body is inside rho*E (and inside ``outer``)."""

    E: Ellipsoid
    rho: Fraction
    outer: Ellipsoid


@dataclass
class NoIntegerPoint:
    reason: str = ""


RoundingResult = Union[Sandwich, NoIntegerPoint]


@dataclass
class _Witness:
    point: List[int]


@dataclass
class _Flat:
    d: List[int]
    k_min: int
    k_max: int


@dataclass
class RoundingConfig:
    rounding_bits: Optional[int] = None  # default 64*m
    max_iterations: int = 100000
    early_slices: int = 2  # stop once a direction has at most this many slices
    check_every: int = 0  # 0 means every m iterations
    shortcuts: bool = True  # witness, empty-axis and flat-direction exits


def rho_impl(m: int) -> int:
    """ceil(4 m sqrt(m))."""
    target = 16 * m ** 3
    r = floor_sqrt(target)
    return r if r * r == target else r + 1


def shrink_bound(m: int) -> Fraction:
    """Per-step determinant shrink factor guaranteed for shallow cuts."""
    return 1 - Fraction(1, 2 * (m + 1) ** 3)


def _ceil_log2(x: Fraction) -> int:
    """Smallest integer q with 2**q >= x (x > 0)."""
    x = Fraction(x)
    q = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** q < x:
        q += 1
    while Fraction(2) ** (q - 1) >= x:
        q -= 1
    return q


def _dyadic_round(x: Fraction, q: int) -> Fraction:
    return Fraction(round_half_up(x * (1 << q)), 1 << q) if q >= 0 else Fraction(round_half_up(x / (1 << -q)) * (1 << -q))


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _approx_float(x: Fraction) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def _eps_bits(m: int) -> int:
    return _ceil_log2(Fraction(64 * (m + 1) ** 3))


class _Engine:
    """Shared iteration state for the two body classes."""

    def __init__(self, m: int, D, c, config: RoundingConfig):
        self.m = m
        self.D = [[Fraction(a) for a in row] for row in D]
        self.c = [Fraction(a) for a in c]
        self.config = config
        self.qmin = config.rounding_bits if config.rounding_bits is not None else 64 * m
        self.eps = Fraction(1, 1 << _eps_bits(m))
        self.iterations = 0

    # -- exact cut ---------------------------------------------------------
    def cut(self, a: Sequence[Fraction], gamma: Fraction, s2: Fraction) -> None:
        """Replace E by an ellipsoid containing E ∩ {x : a^T x <= a^T c + gamma}."""
        m = self.m
        D, c = self.D, self.c
        Da = mat_vec(D, a)
        mag = (s2.numerator.bit_length() - s2.denominator.bit_length()) // 2
        bits = max(48 - mag, 0)
        s_lo, s_hi = sqrt_bracket(s2, bits)
        if s_lo <= 0:
            s_lo = s_hi / 2
        alpha = -gamma / s_lo
        lo_clip = Fraction(-1, m) if m > 1 else Fraction(-1, 2)
        alpha = min(max(alpha, lo_clip), 1 - Fraction(1, 1 << 20))
        if m == 1:
            tau = (1 - alpha) / 2
            sig = Fraction(0)
        else:
            tau = (1 + m * alpha) / (m + 1)
            sig = 2 * (1 + m * alpha) / ((m + 1) * (1 + alpha))
        tau = _dyadic_floor(tau, 50)
        sig = min(max(_dyadic_floor(sig, 50), Fraction(0)), 1 - Fraction(1, 1 << 50))
        kappa = tau / s_lo
        kb = 50 - (kappa.numerator.bit_length() - kappa.denominator.bit_length())
        kappa = _dyadic_round(kappa, kb)
        t_lo, t_hi = kappa * s_lo, kappa * s_hi
        one_minus = 1 - sig
        q1 = max((t_lo - 1) ** 2, (t_hi - 1) ** 2) / one_minus
        q2 = (kappa * s2 + gamma) ** 2 / (s2 * one_minus)
        if m > 1:
            q2 += 1 - gamma * gamma / s2
        delta = max(q1, q2)
        # the new matrix before size control
        sp = sig / s2
        newD = [[delta * (D[i][j] - sp * Da[i] * Da[j]) for j in range(m)] for i in range(m)]
        newc = [ci - kappa * dai for ci, dai in zip(c, Da)]
        self._snap(newD, newc)

    def _snap(self, D1: List[List[Fraction]], c1: List[Fraction]) -> None:
        m = self.m
        eps = self.eps
        tr = sum((D1[i][i] for i in range(m)), Fraction(0))
        dt = det(D1)
        if dt <= 0:
            raise ArithmeticError("lost positive definiteness")
        lam_lo = dt / tr ** (m - 1) if m > 1 else dt
        q = max(
            self.qmin,
            _ceil_log2(m / (eps * lam_lo)),
            (_ceil_log2(16 * m / (eps * eps * lam_lo)) + 1) // 2,
        )
        scale = 1 + eps
        D2 = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                v = _dyadic_round(scale * D1[i][j], q)
                D2[i][j] = v
                D2[j][i] = v
        self.D = D2
        self.c = [_dyadic_round(x, q) for x in c1]

    def det(self) -> Fraction:
        return det(self.D)

    # -- integer-mode helpers ---------------------------------------------
    def axis_empty(self) -> bool:
        for i in range(self.m):
            lo = ceil_add_sqrt(self.c[i], self.D[i][i], -1)
            hi = floor_add_sqrt(self.c[i], self.D[i][i], 1)
            if lo > hi:
                return True
        return False

    def flat_direction(self) -> Tuple[List[int], int, int]:
        d, val = shortest_form_vector(self.D)
        ctr = dot(d, self.c)
        return d, ceil_add_sqrt(ctr, val, -1), floor_add_sqrt(ctr, val, 1)


# ---------------------------------------------------------------------------
# polytopes


def _integerize_rows(P: Polytope) -> Polytope:
    A, b = [], []
    for row, bb in zip(P.A, P.beta):
        L = lcm_denominators(list(row) + [bb])
        A.append([int(x * L) for x in row])
        b.append(Fraction(bb) * L)
    return Polytope(A, b)


def _initial_polytope_ellipsoid(P: Polytope, floor_r2: Optional[Fraction]):
    """Box-based initial ellipsoid.  Returns (D, c) or a NoIntegerPoint/str."""
    m = P.dim
    verts = polytope_vertices(P)
    if verts is None:
        Pi = _integerize_rows(P)
        Pz = Polytope(Pi.A, [ceil_frac(b) for b in Pi.beta])
        t, _ = polytope_bounds(Pz)
        D = [[Fraction(m * t * t) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
        return D, [Fraction(0)] * m
    if not verts:
        return "empty"
    lo = [min(v[i] for v in verts) for i in range(m)]
    hi = [max(v[i] for v in verts) for i in range(m)]
    half = [(h - l) / 2 for l, h in zip(lo, hi)]
    if any(h == 0 for h in half):
        return "flat"
    if floor_r2 is not None and any(h * h < floor_r2 for h in half):
        return "flat"
    c = [(l + h) / 2 for l, h in zip(lo, hi)]
    D = [[m * half[i] ** 2 if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    return D, c


def _polytope_cut(P: Polytope, eng: _Engine):
    """Deepest constraint violated by the (m+1)-shrunken ellipsoid, or None."""
    m = eng.m
    best = None
    best_depth = -math.inf
    k2 = (m + 1) ** 2
    for a, b in zip(P.A, P.beta):
        gamma = b - dot(a, eng.c)
        s2 = dot(a, mat_vec(eng.D, a))
        if s2 == 0:
            continue
        if gamma >= 0 and k2 * gamma * gamma >= s2:
            continue
        depth = -_approx_float(gamma) / math.sqrt(_approx_float(s2)) if s2 > 0 else math.inf
        if best is None or depth > best_depth:
            best = ([Fraction(x) for x in a], Fraction(gamma), Fraction(s2))
            best_depth = depth
    return best


def _interval_polytope(P: Polytope):
    """Exact feasible interval of a 1-dimensional polytope: (lo, hi) or None."""
    lo, hi = None, None
    for a, b in zip(P.A, P.beta):
        a0 = a[0]
        if a0 == 0:
            if b < 0:
                return None
            continue
        v = Fraction(b) / a0
        if a0 > 0:
            hi = v if hi is None else min(hi, v)
        else:
            lo = v if lo is None else max(lo, v)
    if lo is None or hi is None or lo > hi:
        return None
    return lo, hi


def _round_polytope_core(
    P: Polytope,
    config: RoundingConfig,
    integer_mode: bool,
    hook: Optional[Callable[[_Engine], object]] = None,
):
    """Rounding loop.  In integer mode P is the half-relaxed polytope of an
    integral one and every exit means 'no integer point' instead of raising."""
    m = P.dim
    if integer_mode:
        amax = max((dot(a, a) for a in P.A if any(a)), default=1)
        floor_r2 = Fraction(1, 4 * amax)
    else:
        floor_r2 = None
    if m == 1:
        iv = _interval_polytope(P)
        if iv is None or iv[0] == iv[1]:
            if integer_mode:
                return NoIntegerPoint("empty interval")
            raise Degenerate("polytope is empty or a point")
        lo, hi = iv
        E = Ellipsoid([[((hi - lo) / 2) ** 2]], [(lo + hi) / 2])
        return Sandwich(E, Fraction(1), E)
    init = _initial_polytope_ellipsoid(P, floor_r2)
    if isinstance(init, str):
        if integer_mode:
            return NoIntegerPoint(f"relaxed polytope is {init}")
        raise Degenerate(f"polytope is {init}")
    D0, c0 = init
    eng = _Engine(m, D0, c0, config)
    if integer_mode:
        det_floor = floor_r2 ** m
    else:
        det_floor = _degenerate_det_floor(P)
    shrink = shrink_bound(m)
    check_every = config.check_every or m
    while True:
        if eng.iterations > config.max_iterations:
            raise RuntimeError("rounding did not terminate")
        if integer_mode and config.shortcuts:
            z = [round_half_up(x) for x in eng.c]
            if P.contains(z):
                return _Witness(z)
            if eng.axis_empty():
                return NoIntegerPoint("empty coordinate interval")
            if hook is not None and eng.iterations % check_every == 0:
                out = hook(eng)
                if out is not None:
                    return out
        cut = _polytope_cut(P, eng)
        if cut is None:
            k = m + 1
            inner = Ellipsoid([[x / (k * k) for x in row] for row in eng.D], list(eng.c))
            return Sandwich(inner, Fraction(k), Ellipsoid(eng.D, eng.c))
        a, gamma, s2 = cut
        if gamma <= 0 and gamma * gamma >= s2:
            if integer_mode:
                return NoIntegerPoint("cut misses the ellipsoid")
            raise Degenerate("polytope is empty or flat")
        before = eng.det()
        eng.cut(a, gamma, s2)
        eng.iterations += 1
        after = eng.det()
        assert after <= before * shrink, "volume did not decrease"
        if after < det_floor:
            if integer_mode:
                return NoIntegerPoint("volume floor")
            raise Degenerate("volume floor undercut: polytope is not full-dimensional")


def _degenerate_det_floor(P: Polytope) -> Fraction:
    """det(D) lower bound for any ellipsoid containing a full-dimensional P.

    A full-dimensional integral polytope contains a simplex with vertex
    denominators at most Delta = n^{n/2} r^n, so vol >= 1/(n! Delta^{n+1});
    the unit ball volume is below 6.
    """
    m = P.dim
    Pi = _integerize_rows(P)
    Pz = Polytope(Pi.A, [ceil_frac(b) for b in Pi.beta])
    t, _ = polytope_bounds(Pz)
    fact = math.factorial(m)
    return Fraction(1, (6 * fact * t ** (m + 1)) ** 2)


def round_polytope(P: Polytope, config: Optional[RoundingConfig] = None) -> RoundingResult:
    """Approximate Löwner-John ellipsoid of a full-dimensional bounded polytope.

    Returns Sandwich(E, rho, outer) with E inside P and P inside rho*E.
    Raises Degenerate when P is empty or not full-dimensional.
    """
    return _round_polytope_core(P, config or RoundingConfig(), integer_mode=False)


# ---------------------------------------------------------------------------
# lp-bodies


def _holder_factor(n: int, p: int) -> Fraction:
    """Rational upper bound on n^{1 - 2/p}."""
    if p == 2:
        return Fraction(1)
    k = 24
    return Fraction(iroot_ceil(n ** (p - 2) * (1 << (k * p)), p), 1 << k)


def lp_initial_ellipsoid(body: LpBody):
    """Slice of the Hölder ellipsoid ||w||_2^2 < alpha^2 n^{1-2/p}; None if empty."""
    m, n = body.m, body.n
    Vi = body.V_inv
    M = [[sum((Vi[k][i] * Vi[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    M11 = [row[:m] for row in M[:m]]
    M11inv = mat_inv(M11)
    t1, t2 = body.t[:m], body.t[m:]
    rho2 = body.alpha ** 2 * _holder_factor(n, body.p)
    if m < n:
        w0 = [-x for x in t2]
        M12w = [sum((M[i][m + j] * w0[j] for j in range(n - m)), Fraction(0)) for i in range(m)]
        ustar = [-x for x in mat_vec(M11inv, M12w)]
        M22w = [sum((M[m + i][m + j] * w0[j] for j in range(n - m)), Fraction(0)) for i in range(n - m)]
        s = dot(w0, M22w) - dot(M12w, mat_vec(M11inv, M12w))
        c = [a + b for a, b in zip(t1, ustar)]
    else:
        s = Fraction(0)
        c = list(t1)
    room = rho2 - s
    if room <= 0:
        return None
    D = [[room * x for x in row] for row in M11inv]
    return D, c


def _lp_probe(body: LpBody, eng: _Engine):
    """Probe the 2m conjugate-axis points.  Returns ('inner', D_in) or
    ('cut', a, gamma, s2) or ('empty',)."""
    m = eng.m
    fac = ldl(eng.D)
    if fac is None:
        raise ArithmeticError("ellipsoid lost positive definiteness")
    L, lam = fac
    r = Fraction(1, m + 1)
    thetas = [sqrt_lower(x, 30) for x in lam]
    best = None
    best_depth = -math.inf
    for i in range(m):
        axis = [L[k][i] * thetas[i] * r for k in range(m)]
        for sgn in (1, -1):
            q = [ci + sgn * ai for ci, ai in zip(eng.c, axis)]
            Fq = lp_value(body, q)
            if Fq < 0:
                continue
            g = lp_subgradient(body, q)
            if all(x == 0 for x in g):
                return ("empty",)
            gamma = dot(g, q) - Fq - dot(g, eng.c)
            s2 = dot(g, mat_vec(eng.D, g))
            depth = -_approx_float(gamma) / math.sqrt(_approx_float(s2))
            if best is None or depth > best_depth:
                best = ("cut", g, gamma, s2)
                best_depth = depth
    if best is not None:
        return best

    def inside(radius: Fraction) -> bool:
        for i in range(m):
            axis = [L[k][i] * thetas[i] * radius for k in range(m)]
            for sgn in (1, -1):
                if lp_value(body, [ci + sgn * ai for ci, ai in zip(eng.c, axis)]) >= 0:
                    return False
        return True

    # the cross-polytope of probes at the widest passing radius gives the inner ellipsoid
    radius = next((w for w in _WIDER_PROBES if w > r and inside(w)), r)
    scale = radius * radius / m
    Din = [
        [scale * sum((L[i][k] * thetas[k] ** 2 * L[j][k] for k in range(m)), Fraction(0)) for j in range(m)]
        for i in range(m)
    ]
    ratio = max(l / (th * th) for l, th in zip(lam, thetas))
    rho = sqrt_upper(m * ratio / (radius * radius), 30)
    return ("inner", Din, rho)


_WIDER_PROBES = (Fraction(7, 8), Fraction(3, 4), Fraction(1, 2))


def _round_lp_core(
    body: LpBody,
    config: RoundingConfig,
    integer_mode: bool,
    hook: Optional[Callable[[_Engine], object]] = None,
):
    m = body.m
    init = lp_initial_ellipsoid(body)
    if init is None:
        return NoIntegerPoint("slice is empty")
    eng = _Engine(m, init[0], init[1], config)
    det_floor = lp_certified_floor_sq(body) ** m
    shrink = shrink_bound(m)
    check_every = config.check_every or m
    while True:
        if eng.iterations > config.max_iterations:
            raise RuntimeError("rounding did not terminate")
        if integer_mode and config.shortcuts:
            z = [round_half_up(x) for x in eng.c]
            if lp_value(body, z) < 0:
                return _Witness(z)
            if eng.axis_empty():
                return NoIntegerPoint("empty coordinate interval")
            if hook is not None and eng.iterations % check_every == 0:
                out = hook(eng)
                if out is not None:
                    return out
        res = _lp_probe(body, eng)
        if res[0] == "empty":
            return NoIntegerPoint("F has a nonnegative minimum")
        if res[0] == "inner":
            rho = min(res[2], Fraction(rho_impl(m)))
            return Sandwich(Ellipsoid(res[1], list(eng.c)), rho, Ellipsoid(eng.D, eng.c))
        _, g, gamma, s2 = res
        if gamma <= 0 and gamma * gamma >= s2:
            return NoIntegerPoint("cut misses the ellipsoid")
        before = eng.det()
        eng.cut(g, gamma, s2)
        eng.iterations += 1
        after = eng.det()
        assert after <= before * shrink, "volume did not decrease"
        if after < det_floor:
            return NoIntegerPoint("volume floor")


def round_lp_body(body: LpBody, config: Optional[RoundingConfig] = None) -> RoundingResult:
    """Sandwich(E, rho, outer) with rho <= rho_impl(m), or NoIntegerPoint.

    NoIntegerPoint is certified either by the volume floor or by an empty
    range of lattice hyperplanes meeting the outer ellipsoid."""
    res = _round_lp_core(body, config or RoundingConfig(), integer_mode=False)
    if isinstance(res, Sandwich):
        eng = _Engine(body.m, res.outer.D, res.outer.c, config or RoundingConfig())
        _, lo, hi = eng.flat_direction()
        if lo > hi:
            return NoIntegerPoint("outer ellipsoid misses every lattice hyperplane")
    return res
