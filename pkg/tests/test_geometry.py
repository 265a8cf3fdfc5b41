import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latmem.exact import mat_inv, mat_vec
from latmem.geometry import (
    Ellipsoid,
    Hyperplane,
    LpBody,
    Polytope,
    ellipsoid_support,
    lp_circumscribed_radius_sq,
    lp_norm_pow,
    lp_radius_bound,
    lp_separate,
    lp_size,
    lp_subgradient,
    lp_value,
    lp_volume_floor,
    polytope_bounds,
    symmetric_polytope,
)
from latmem.oracle import integer_points

from conftest import random_ellipsoid, random_lp_body

I2 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
rat = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 6))


def unit_body(p, alpha_n=1, alpha_d=1, t=(0, 0)):
    return LpBody(p, I2, [Fraction(a) for a in t], alpha_n, alpha_d, 2)


def analytic_gradient_p2(body, y):
    """Gradient of alpha_d^2 ||V^{-1}((y,0) - t)||_2^2: 2 alpha_d^2 W^T V^{-1}((y,0) - t)."""
    n, m = body.n, body.m
    full = list(y) + [0] * (n - m)
    w = mat_vec(body.V_inv, [a - b for a, b in zip(full, body.t)])
    cols = [[body.V_inv[i][j] for i in range(n)] for j in range(m)]
    return [2 * body.alpha_d**2 * sum(c * x for c, x in zip(col, w)) for col in cols]


class TestEllipsoidSupport:
    def test_unit_ball(self):
        assert ellipsoid_support(Ellipsoid(I2, [0, 0]), [1, 0]) == (0, 1)

    def test_scaled_shifted(self):
        E = Ellipsoid([[4, 0], [0, 4]], [1, 1])
        assert ellipsoid_support(E, [1, 1]) == (2, 8)

    def test_rejects_zero_direction(self):
        with pytest.raises(ValueError):
            ellipsoid_support(Ellipsoid(I2, [0, 0]), [0, 0])

    def test_sampled_points_inside_interval(self):
        rng = random.Random(3)
        for _ in range(20):
            m = rng.randint(1, 3)
            E = random_ellipsoid(rng, m)
            Dinv = mat_inv(E.D)
            d = [rng.randint(-3, 3) for _ in range(m)]
            if not any(d):
                continue
            ctr, rad = ellipsoid_support(E, d)
            for _ in range(50):
                x = [c + Fraction(rng.randint(-40, 40), rng.randint(1, 8)) for c in E.c]
                diff = [a - b for a, b in zip(x, E.c)]
                if sum(a * b for a, b in zip(diff, mat_vec(Dinv, diff))) > 1:
                    continue
                s = sum(a * b for a, b in zip(d, x)) - ctr
                assert s * s <= rad


class TestSubgradient:
    def test_unit_ball_gradient(self):
        assert lp_subgradient(unit_body(2), [1, 0]) == [2, 0]

    def test_zero_at_minimizer(self):
        body = LpBody(3, [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(1)]], [Fraction(1, 2), Fraction(-3)], 1, 2, 2)
        assert lp_subgradient(body, [Fraction(1, 2), Fraction(-3)]) == [0, 0]

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_subgradient_inequality(self, p):
        rng = random.Random(p)
        for _ in range(60):
            n = rng.randint(1, 3)
            body = random_lp_body(rng, n, rng.randint(1, n), ps=(p,))
            y = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(body.m)]
            z = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(body.m)]
            g = lp_subgradient(body, y)
            lhs = lp_value(body, z)
            rhs = lp_value(body, y) + sum(a * (b - c) for a, b, c in zip(g, z, y))
            assert lhs >= rhs
            if p == 2:
                assert g == analytic_gradient_p2(body, y)


class TestSeparation:
    def test_outside_point_axis(self):
        g = lp_separate(unit_body(2), [2, 0])
        assert g[1] == 0 and g[0] > 0

    def test_inside_point(self):
        assert lp_separate(unit_body(2), [0, 0]) is None

    def test_l4_diagonal(self):
        body = unit_body(4)
        assert lp_value(body, [1, 1]) == 1
        g = lp_separate(body, [1, 1])
        assert g[0] == g[1] and g[0] > 0

    def test_separates_interior_grid(self):
        rng = random.Random(11)
        for _ in range(25):
            body = random_lp_body(rng, 2)
            y = [Fraction(rng.randint(-20, 20), 2) for _ in range(2)]
            g = lp_separate(body, y)
            if g is None:
                assert lp_value(body, y) < 0
                continue
            gy = sum(a * b for a, b in zip(g, y))
            for x in itertools.product([Fraction(k, 2) for k in range(-24, 25)], repeat=2):
                if lp_value(body, x) < 0:
                    assert sum(a * b for a, b in zip(g, x)) <= gy


class TestRadii:
    def test_unit_ball_bound(self):
        assert lp_circumscribed_radius_sq(unit_body(2)) == 4

    def test_stretched_bound(self):
        body = LpBody(2, [[Fraction(1, 3), 0], [0, Fraction(1)]], [0, 0], 1, 1, 2)
        assert lp_circumscribed_radius_sq(body) == 20
        assert lp_circumscribed_radius_sq(body) >= 18

    def test_alpha_scaling_quadruples(self):
        assert lp_circumscribed_radius_sq(unit_body(3, 2)) == 4 * lp_circumscribed_radius_sq(unit_body(3))

    def test_bound_contains_body(self):
        rng = random.Random(5)
        for _ in range(20):
            body = random_lp_body(rng, 2)
            R2 = lp_circumscribed_radius_sq(body)
            t = body.t
            # every body point x satisfies ||x - t||^2 <= R2; test grid points
            for x in itertools.product(range(-12, 13), repeat=2):
                if body.contains(list(x)):
                    assert sum((a - b) ** 2 for a, b in zip(x, t)) <= R2


class TestVolumeFloor:
    def test_positive_and_monotone(self):
        rng = random.Random(9)
        for _ in range(10):
            body = random_lp_body(rng, 2)
            S = lp_size(body)
            R = lp_radius_bound(body, S)
            r1 = lp_volume_floor(body, S, R)
            r2 = lp_volume_floor(body, 2 * S, R)
            assert r1 > 0
            assert r1 / r2 >= 2 ** (2 * body.n**2 * body.p)

    def test_unit_ball_floor_at_most_one(self):
        body = unit_body(2)
        S = lp_size(body)
        assert lp_volume_floor(body, S, lp_radius_bound(body, S)) <= 1

    def test_ball_around_integer_points(self):
        rng = random.Random(21)
        checked = 0
        for _ in range(60):
            body = random_lp_body(rng, 2)
            pts = integer_points(body)
            if not pts:
                continue
            S = lp_size(body)
            r = lp_volume_floor(body, S, lp_radius_bound(body, S))
            for z in pts[:3]:
                for u in ((1, 0), (0, 1), (-1, 0), (0, -1), (Fraction(3, 5), Fraction(4, 5))):
                    assert body.contains([a + r * b for a, b in zip(z, u)])
            checked += 1
            if checked >= 20:
                break
        assert checked > 0


class TestHolder:
    @given(st.lists(rat, min_size=1, max_size=4), st.sampled_from([2, 3, 4, 5]))
    def test_power_sandwich(self, x, p):
        n = len(x)
        lp = lp_norm_pow(x, p)
        l2 = sum(a * a for a in x)
        # ||x||_p <= ||x||_2 <= n^{1/2 - 1/p} ||x||_p, raised to the 2p-th power
        assert lp**2 <= l2**p
        assert l2**p <= n ** (p - 2) * lp**2


class TestPolytopeBounds:
    def test_unit_cube_inner(self):
        assert polytope_bounds(symmetric_polytope([[1, 0], [0, 1]], [1, 1]))[1] == 1

    def test_cross_polytope_inner(self):
        assert polytope_bounds(symmetric_polytope([[1, 1], [1, -1]], [1, 1]))[1] == Fraction(1, 2)

    def test_box_formula(self):
        # size 3 in dimension 2: t = 2^{2/2} * 3^2
        P = Polytope([[1, 0], [0, 1], [-1, -1]], [3, 3, 0])
        assert polytope_bounds(P)[0] == 18

    def test_box_contains_vertices(self):
        rng = random.Random(2)
        for _ in range(20):
            A = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(4)]
            P = Polytope(A, [rng.randint(1, 4) for _ in range(4)])
            t = polytope_bounds(P)[0]
            for rows in itertools.combinations(range(4), 2):
                M = [A[i] for i in rows]
                if M[0][0] * M[1][1] - M[0][1] * M[1][0] == 0:
                    continue
                v = mat_vec(mat_inv(M), [P.beta[i] for i in rows])
                if P.contains(v):
                    assert all(abs(a) <= t for a in v)


def test_hyperplane_rejects_zero_normal():
    with pytest.raises(ValueError):
        Hyperplane((0, 0), 1)


def test_lp_body_is_open():
    body = unit_body(2)
    assert not body.contains([1, 0])
    assert body.contains([Fraction(99, 100), 0])
