import os
import random
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from latmem.exact import det, rank
from latmem.geometry import Ellipsoid, LpBody, Polytope

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def random_basis(rng, n, m, lo=-5, hi=5):
    """n x m integer matrix of full column rank."""
    while True:
        B = [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]
        if rank(B) == m:
            return B


def random_box_polytope(rng, n, extra=None):
    """Box with random integer bounds plus cuts that keep the box center strictly inside."""
    A, beta = [], []
    lo = [rng.randint(-5, 3) for _ in range(n)]
    hi = [a + rng.randint(1, 4) for a in lo]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        A.append(list(e))
        beta.append(hi[i])
        e[i] = -1
        A.append(list(e))
        beta.append(-lo[i])
    center = [Fraction(a + b, 2) for a, b in zip(lo, hi)]
    for _ in range(rng.randint(0, 3) if extra is None else extra):
        a = [rng.randint(-8, 8) for _ in range(n)]
        if not any(a):
            continue
        val = sum(x * y for x, y in zip(a, center))
        A.append(a)
        beta.append(int(val // 1) + rng.randint(1, 4))
    return Polytope(A, beta)


def random_cut_polytope(rng, n):
    """Nonnegative box plus one unrestricted cut: may be empty or lower-dimensional."""
    A, beta = [], []
    for i in range(n):
        for s in (1, -1):
            e = [0] * n
            e[i] = s
            A.append(e)
            beta.append(rng.randint(0, 5))
    A.append([rng.randint(-8, 8) for _ in range(n)])
    beta.append(rng.randint(-8, 8))
    return Polytope(A, beta)


def random_lp_body(rng, n, m=None, ps=(2, 3, 4)):
    while True:
        V = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        if det(V) != 0:
            break
    t = [Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(n)]
    return LpBody(rng.choice(ps), V, t, rng.randint(1, 8), rng.randint(1, 8), n if m is None else m)


def random_ellipsoid(rng, m):
    while True:
        Q = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)] for _ in range(m)]
        if det(Q) != 0:
            break
    D = [[sum((Q[i][k] * Q[j][k] for k in range(m)), Fraction(0)) for j in range(m)] for i in range(m)]
    c = [Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(m)]
    return Ellipsoid(D, c)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
