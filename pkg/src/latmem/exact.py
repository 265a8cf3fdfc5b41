"""Exact rational linear algebra, Hermite normal form, integer kernels and LLL.

Matrices are lists of rows.  Entries are ``int`` or ``fractions.Fraction``;
``Fraction`` always keeps a reduced, positive-denominator form, so equality and
size checks are plain comparisons.  A basis matrix stores its generators as
columns.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import List, Sequence, Tuple, Union

from .errors import NegativeRadicand, RankDeficient, Singular

Number = Union[int, Fraction]
Vector = List[Number]
Matrix = List[List[Number]]

DEFAULT_DELTA = Fraction(3, 4)


# ---------------------------------------------------------------------------
# scalars and serialization


def to_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"not an exact number: {x!r}")


def parse_rat(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats are rejected."""
    text = s.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rat(x: Number) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def normalize(x: Number) -> Number:
    """Return an ``int`` when ``x`` is integral."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def size(x) -> int:
    """max(|p|, |q|) of a rational, or the maximum over a vector/matrix."""
    if isinstance(x, (list, tuple)):
        return max((size(e) for e in x), default=0)
    f = Fraction(x)
    return max(abs(f.numerator), f.denominator)


def is_integral(x) -> bool:
    if isinstance(x, (list, tuple)):
        return all(is_integral(e) for e in x)
    return Fraction(x).denominator == 1


def lcm_denominators(xs) -> int:
    out = 1
    for x in xs:
        if isinstance(x, (list, tuple)):
            d = lcm_denominators(x)
        else:
            d = Fraction(x).denominator
        out = out * d // gcd(out, d)
    return out


def round_half_up(x: Number) -> int:
    """Nearest integer, halves rounded up."""
    f = Fraction(x) + Fraction(1, 2)
    return f.numerator // f.denominator


def floor_frac(x: Number) -> int:
    f = Fraction(x)
    return f.numerator // f.denominator


def ceil_frac(x: Number) -> int:
    return -floor_frac(-Fraction(x))


# ---------------------------------------------------------------------------
# square roots


def floor_sqrt(r: Number) -> int:
    r = Fraction(r)
    if r < 0:
        raise NegativeRadicand(str(r))
    return isqrt(r.numerator * r.denominator) // r.denominator


def floor_add_sqrt(c: Number, r: Number, sign: int = 1) -> int:
    """Return floor(c + sign*sqrt(r)) using only exact squared comparisons."""
    c = Fraction(c)
    r = Fraction(r)
    if r < 0:
        raise NegativeRadicand(str(r))
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")

    def below(k: int) -> bool:
        # k <= c + sign*sqrt(r)
        if sign > 0:
            d = k - c
            return d <= 0 or d * d <= r
        e = c - k
        return e >= 0 and e * e >= r

    k = floor_frac(c) + sign * floor_sqrt(r)
    while not below(k):
        k -= 1
    while below(k + 1):
        k += 1
    return k


def ceil_add_sqrt(c: Number, r: Number, sign: int = 1) -> int:
    """Return ceil(c + sign*sqrt(r))."""
    return -floor_add_sqrt(-Fraction(c), r, -sign)


def sqrt_bracket(r: Number, bits: int) -> Tuple[Fraction, Fraction]:
    """Dyadic lo <= sqrt(r) <= hi with hi - lo = 2**-bits."""
    r = Fraction(r)
    if r < 0:
        raise NegativeRadicand(str(r))
    scale = 1 << (2 * bits)
    lo_num = isqrt((r.numerator * scale) // r.denominator)
    lo = Fraction(lo_num, 1 << bits)
    return lo, lo + Fraction(1, 1 << bits)


def sqrt_lower(r: Number, rel_bits: int = 40) -> Fraction:
    """Rational lower bound for sqrt(r) with relative error about 2**-rel_bits."""
    r = Fraction(r)
    if r <= 0:
        if r < 0:
            raise NegativeRadicand(str(r))
        return Fraction(0)
    mag = (r.numerator.bit_length() - r.denominator.bit_length()) // 2
    bits = max(rel_bits - mag, 0)
    return sqrt_bracket(r, bits)[0]


def sqrt_upper(r: Number, rel_bits: int = 40) -> Fraction:
    r = Fraction(r)
    if r <= 0:
        if r < 0:
            raise NegativeRadicand(str(r))
        return Fraction(0)
    mag = (r.numerator.bit_length() - r.denominator.bit_length()) // 2
    bits = max(rel_bits - mag, 0)
    return sqrt_bracket(r, bits)[1]


def iroot_ceil(x: int, k: int) -> int:
    """Smallest integer y >= 0 with y**k >= x."""
    if x <= 0:
        return 0
    y = iroot_floor(x, k)
    return y if y ** k == x else y + 1


def iroot_floor(x: int, k: int) -> int:
    """Largest integer y >= 0 with y**k <= x."""
    if x <= 0:
        return 0
    if k == 1:
        return x
    if k == 2:
        return isqrt(x)
    lo, hi = 0, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


# ---------------------------------------------------------------------------
# vectors and matrices


def dot(u: Sequence[Number], v: Sequence[Number]) -> Number:
    return sum((a * b for a, b in zip(u, v)), 0)


def vec_add(u, v) -> Vector:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(s, v) -> Vector:
    return [s * a for a in v]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def shape(M: Matrix) -> Tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Matrix, cols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*M)]


def columns(M: Matrix) -> List[Vector]:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def from_columns(cols: Sequence[Sequence[Number]], n: int | None = None) -> Matrix:
    if not cols:
        return [[] for _ in range(n or 0)]
    return [list(row) for row in zip(*cols)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    bt = columns(B)
    if not bt:
        return [[] for _ in A]
    return [[dot(row, col) for col in bt] for row in A]


def mat_vec(A: Matrix, v: Sequence[Number]) -> Vector:
    return [dot(row, v) for row in A]


def mat_scale(s, A: Matrix) -> Matrix:
    return [[s * a for a in row] for row in A]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def quad_form(x: Sequence[Number], G: Matrix, y: Sequence[Number] | None = None) -> Number:
    """x^T G y (y defaults to x)."""
    if y is None:
        y = x
    return dot(x, mat_vec(G, y))


def frac_matrix(M) -> List[List[Fraction]]:
    return [[to_frac(a) for a in row] for row in M]


def int_matrix(M) -> List[List[int]]:
    out = []
    for row in M:
        r = []
        for a in row:
            f = Fraction(a)
            if f.denominator != 1:
                raise ValueError(f"non-integral entry {a}")
            r.append(f.numerator)
        out.append(r)
    return out


def _echelon(M: Matrix):
    """Row-reduce a Fraction copy; returns (reduced rows, pivot columns, swap sign)."""
    A = frac_matrix(M)
    rows, cols = shape(A)
    pivots = []
    sign = 1
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            sign = -sign
        inv = 1 / A[r][c]
        for i in range(r + 1, rows):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots, sign


def rank(M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(_echelon(M)[1])


def det(M: Matrix) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A, pivots, sign = _echelon(M)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= A[i][i]
    return out


def mat_inv(M: Matrix) -> List[List[Fraction]]:
    n = len(M)
    A = [[to_frac(a) for a in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            raise Singular("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def solve(M: Matrix, b: Sequence[Number]) -> List[Fraction] | None:
    """Exact solution of M x = b for any shape; None if inconsistent.

    Free variables are set to zero.
    """
    rows, cols = shape(M)
    aug = [list(M[i]) + [b[i]] for i in range(rows)]
    A, pivots, _ = _echelon(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = A[r][cols] - sum((A[r][j] * x[j] for j in range(c + 1, cols)), Fraction(0))
        x[c] = s / A[r][c]
    return x


def ldl(G: Matrix) -> Tuple[List[List[Fraction]], List[Fraction]] | None:
    """G = L diag(d) L^T with L unit lower triangular; None unless all d > 0."""
    n = len(G)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d: List[Fraction] = []
    for j in range(n):
        s = to_frac(G[j][j]) - sum((L[j][k] * L[j][k] * d[k] for k in range(j)), Fraction(0))
        if s <= 0:
            return None
        d.append(s)
        for i in range(j + 1, n):
            t = to_frac(G[i][j]) - sum((L[i][k] * L[j][k] * d[k] for k in range(j)), Fraction(0))
            L[i][j] = t / s
    return L, d


def is_positive_definite(G: Matrix) -> bool:
    if any(G[i][j] != G[j][i] for i in range(len(G)) for j in range(i)):
        return False
    return ldl(G) is not None


# ---------------------------------------------------------------------------
# Hermite normal form and kernels


def hnf(M: Matrix) -> Tuple[List[List[int]], List[List[int]]]:
    """Column-style Hermite normal form: H = M U with U unimodular.

    H is lower echelon, pivots are positive and entries left of a pivot lie in
    [0, pivot).  Zero columns are gathered on the right.
    """
    rows, cols = shape(M)
    H = int_matrix(M)
    U = identity(cols)

    def addmul(dst: int, src: int, q: int) -> None:
        if q == 0:
            return
        for row in H:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    def swap(a: int, b: int) -> None:
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def negate(a: int) -> None:
        for row in H:
            row[a] = -row[a]
        for row in U:
            row[a] = -row[a]

    piv = 0
    for i in range(rows):
        if piv >= cols:
            break
        for j in range(piv + 1, cols):
            while H[i][j] != 0:
                addmul(piv, j, H[i][piv] // H[i][j])
                swap(piv, j)
        if H[i][piv] == 0:
            continue
        if H[i][piv] < 0:
            negate(piv)
        for j in range(piv):
            addmul(j, piv, H[i][j] // H[i][piv])
        piv += 1
    return H, U


def hnf_rank(H: Matrix) -> int:
    """Number of nonzero columns of an HNF."""
    cols = shape(H)[1]
    return sum(1 for j in range(cols) if any(row[j] != 0 for row in H))


def column_hnf_basis(M: Matrix) -> List[List[int]]:
    """Canonical basis (nonzero HNF columns) of the lattice spanned by M's columns."""
    rows = len(M)
    H, _ = hnf(M)
    r = hnf_rank(H)
    return [row[:r] for row in H] if rows else []


def integer_kernel(M: Matrix) -> List[List[int]]:
    """Basis (as columns of a k x r matrix) of {z in Z^k : M z = 0}."""
    rows, cols = shape(M)
    if rows == 0:
        return identity(cols)
    H, U = hnf(M)
    r = hnf_rank(H)
    K = [row[r:] for row in U]
    if cols - r == 0:
        return [[] for _ in range(cols)]
    return column_hnf_basis(K)


# ---------------------------------------------------------------------------
# LLL


def lll_gram(G: Matrix, delta: Number = DEFAULT_DELTA) -> Tuple[List[List[int]], List[List[Fraction]]]:
    """LLL-reduce the basis whose Gram matrix is G.

    Returns (U, G') with G' = U^T G U reduced; U's columns express the new
    basis in the old one.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    m = len(G)
    g = frac_matrix(G)
    U = identity(m)
    mu = [[Fraction(0)] * m for _ in range(m)]
    Bn = [Fraction(0)] * m
    if m == 0:
        return U, g

    def red(k: int, l: int) -> None:
        if 2 * abs(mu[k][l]) <= 1:
            return
        q = round_half_up(mu[k][l])
        # b_k -= q b_l
        for row in U:
            row[k] -= q * row[l]
        gkl = g[k][l]
        g[k][k] += q * q * g[l][l] - 2 * q * gkl
        for i in range(m):
            if i != k:
                g[k][i] -= q * g[l][i]
                g[i][k] = g[k][i]
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k: int, kmax: int) -> None:
        for row in U:
            row[k], row[k - 1] = row[k - 1], row[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m_ = mu[k][k - 1]
        bnew = Bn[k] + m_ * m_ * Bn[k - 1]
        mu[k][k - 1] = m_ * Bn[k - 1] / bnew
        Bn[k] = Bn[k - 1] * Bn[k] / bnew
        Bn[k - 1] = bnew
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m_ * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    Bn[0] = g[0][0]
    if Bn[0] == 0:
        raise RankDeficient("zero basis vector")
    k, kmax = 1, 0
    while k < m:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (g[k][j] - sum((mu[j][i] * mu[k][i] * Bn[i] for i in range(j)), Fraction(0))) / Bn[j]
            Bn[k] = g[k][k] - sum((mu[k][i] * mu[k][i] * Bn[i] for i in range(k)), Fraction(0))
            if Bn[k] == 0:
                raise RankDeficient("basis vectors are linearly dependent")
        red(k, k - 1)
        if Bn[k] < (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return U, g


def lll_reduce(B: Matrix, delta: Number = DEFAULT_DELTA) -> Tuple[Matrix, List[List[int]]]:
    """LLL-reduce the columns of B.  Returns (B', U) with B' = B U."""
    rows, cols = shape(B)
    if cols == 0:
        return [list(r) for r in B], []
    if cols > rows:
        raise RankDeficient("more columns than rows")
    Bt = transpose(B)
    G = [[dot(u, v) for v in Bt] for u in Bt]
    U, _ = lll_gram(G, delta)
    Bp = [[normalize(a) for a in row] for row in mat_mul(B, U)]
    return Bp, U


def gram_schmidt(B: Matrix) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """Gram-Schmidt data of the columns: (mu, B*) with B* as column vectors."""
    cols = columns(B)
    m = len(cols)
    star: List[List[Fraction]] = []
    mu = [[Fraction(0)] * m for _ in range(m)]
    for i, b in enumerate(cols):
        v = [Fraction(x) for x in b]
        for j in range(i):
            nj = dot(star[j], star[j])
            mu[i][j] = Fraction(dot(b, star[j])) / nj
            v = [a - mu[i][j] * s for a, s in zip(v, star[j])]
        mu[i][i] = Fraction(1)
        star.append(v)
    return mu, star


def is_lll_reduced(B: Matrix, delta: Number = DEFAULT_DELTA) -> bool:
    """Size reduction and Lovasz condition, checked exactly."""
    mu, star = gram_schmidt(B)
    m = len(star)
    norms = [dot(s, s) for s in star]
    if any(n == 0 for n in norms):
        return False
    for i in range(m):
        for j in range(i):
            if 2 * abs(mu[i][j]) > 1:
                return False
    for k in range(1, m):
        if norms[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True
