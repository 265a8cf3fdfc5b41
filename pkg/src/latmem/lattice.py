"""Shortest vectors of quadratic forms, dual bases, sublattice intersections
and integer points of affine subspaces."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DependentNormals, NotPositiveDefinite, RankDeficient, Singular
from .exact import (
    Matrix,
    ceil_add_sqrt,
    column_hnf_basis,
    floor_add_sqrt,
    hnf,
    integer_kernel,
    is_positive_definite,
    ldl,
    lll_gram,
    mat_inv,
    mat_mul,
    mat_vec,
    quad_form,
    rank,
    shape,
    transpose,
)


def _normalize_sign(v: Sequence[int]) -> Tuple[int, ...]:
    for a in v:
        if a != 0:
            return tuple(v) if a > 0 else tuple(-x for x in v)
    return tuple(v)


def _enumerate_form(G: Matrix, bound: Fraction, keep_ties: bool = True) -> Tuple[Fraction, List[List[int]]]:
    """All nonzero x with x^T G x minimal, provided the minimum is <= bound."""
    m = len(G)
    fac = ldl(G)
    if fac is None:
        raise NotPositiveDefinite("form is not positive definite")
    L, d = fac
    best = Fraction(bound)
    found: List[List[int]] = []
    x = [0] * m

    # x^T G x = sum_i d_i (x_i + sum_{j>i} L[j][i] x_j)^2
    def rec(i: int, partial: Fraction) -> None:
        nonlocal best, found
        c = sum((L[j][i] * x[j] for j in range(i + 1, m)), Fraction(0))
        room = (best - partial) / d[i]
        if room < 0:
            return
        lo = ceil_add_sqrt(-c, room, -1)
        hi = floor_add_sqrt(-c, room, 1)
        for xi in range(lo, hi + 1):
            x[i] = xi
            val = partial + d[i] * (xi + c) ** 2
            if val > best:
                continue
            if i == 0:
                if all(v == 0 for v in x):
                    continue
                if val < best:
                    best = val
                    found = [list(x)]
                elif keep_ties:
                    found.append(list(x))
            else:
                rec(i - 1, val)
        x[i] = 0

    rec(m - 1, Fraction(0))
    return best, found


def shortest_form_vector(G: Matrix) -> Tuple[List[int], Fraction]:
    """Nonzero integer d minimizing d^T G d, with its value.

    Ties are broken by picking, among minimizers normalized to a positive first
    nonzero entry, the lexicographically largest one.
    """
    m = len(G)
    if m == 0 or not is_positive_definite(G):
        raise NotPositiveDefinite("form is not positive definite")
    U, Gr = lll_gram(G)
    bound = min(Gr[i][i] for i in range(m))
    val, xs = _enumerate_form(Gr, bound)
    cands = {_normalize_sign(mat_vec(U, x)) for x in xs}
    best = max(cands)
    return list(best), Fraction(val)


def dual_basis(B: Matrix) -> List[List[Fraction]]:
    """(B^T)^{-1} for a square nonsingular basis."""
    r, c = shape(B)
    if r != c:
        raise Singular("dual basis needs a square basis")
    return mat_inv(transpose(B))


def intersection_basis(B: Matrix, m: int) -> List[List[int]]:
    """Basis of L(B^T) intersected with {x : x_i = 0 for i >= m} (n x m matrix)."""
    n = len(B)
    if shape(B) != (n, n) or rank(B) < n:
        raise Singular("intersection basis needs a nonsingular square B")
    if not 0 <= m < n:
        raise ValueError("need 0 <= m < n")
    Bt = transpose(B)
    K = integer_kernel(Bt[m:])
    if not K or not K[0]:
        return [[] for _ in range(n)]
    return column_hnf_basis(mat_mul(Bt, K))


def integer_point_in_subspace(H, n: int) -> Optional[List[int]]:
    """Integer v with <d_i, v> = k_i for every hyperplane of H, or None.

    H is a sequence of hyperplanes (objects with ``d`` and ``k``, or pairs);
    their normals must be linearly independent.
    """
    pairs = [(h.d, h.k) if hasattr(h, "d") else tuple(h) for h in H]
    normals = [list(d) for d, _ in pairs]
    ks = [k for _, k in pairs]
    r = len(normals)
    if r == 0:
        return [0] * n
    if rank(normals) < r:
        raise DependentNormals("hyperplane normals are dependent")
    H, U = hnf(normals)
    # H is r x n lower echelon with r pivots in columns 0..r-1
    y: List[int] = []
    for i in range(r):
        s = Fraction(ks[i]) - sum(H[i][j] * y[j] for j in range(i))
        q = s / H[i][i]
        if q.denominator != 1:
            return None
        y.append(q.numerator)
    y += [0] * (n - r)
    return [int(a) for a in mat_vec(U, y)]


def complete_basis(normals: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    """Integer vectors (rows) that extend the rational span of ``normals`` to R^n.

    The completion uses unit vectors chosen greedily.
    """
    rows = [list(d) for d in normals]
    extra: List[List[int]] = []
    r = rank(rows) if rows else 0
    for i in range(n):
        if r + len(extra) == n:
            break
        e = [int(j == i) for j in range(n)]
        if rank(rows + extra + [e]) > r + len(extra):
            extra.append(e)
    if r + len(extra) != n:
        raise RankDeficient("cannot complete basis")
    return extra


def gram(B: Matrix) -> List[List[Fraction]]:
    """B^T B for column basis B."""
    Bt = transpose(B)
    return [[Fraction(sum(a * b for a, b in zip(u, v))) for v in Bt] for u in Bt]


def form_value(G: Matrix, d: Sequence[int]) -> Fraction:
    return Fraction(quad_form(d, G))
