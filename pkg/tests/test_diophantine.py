import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latmem.diophantine import frank_tardos_decompose, q_bound, replace_hyperplane, simultaneous_approx
from latmem.errors import DependentInput
from latmem.exact import rank
from latmem.geometry import AffineSubspace, Hyperplane


def l1_ball(n, radius):
    for z in itertools.product(range(-radius, radius + 1), repeat=n):
        if sum(abs(a) for a in z) <= radius:
            yield z


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def assert_equivalent(H, h, out, N):
    for z in l1_ball(H.n, N - 1):
        if not H.contains(z):
            continue
        lhs = dot(h.d, z) == h.k
        rhs = all(g.contains(z) for g in out.hyperplanes)
        assert lhs == rhs, (z, h, out)


def coefficient_limit(n, N):
    return 2 ** ((n + 2) ** 2) * N**n


class TestSimultaneousApprox:
    def test_integers(self):
        res = simultaneous_approx([2, -3], 3)
        assert (res.q, res.p) == (1, [2, -3])

    def test_common_denominator(self):
        res = simultaneous_approx([Fraction(5, 7), Fraction(3, 7)], 3)
        assert res.q == 7 and res.p == [5, 3]

    def test_half(self):
        res = simultaneous_approx([Fraction(1, 2)], 3)
        assert (res.q, res.p) == (2, [1])

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            simultaneous_approx([Fraction(1, 3)], 1)

    @given(
        st.lists(st.builds(Fraction, st.integers(-1000, 1000), st.integers(1, 1000)), min_size=1, max_size=4),
        st.integers(2, 8),
    )
    def test_invariants(self, alpha, N):
        res = simultaneous_approx(alpha, N)
        assert 1 <= res.q <= q_bound(len(alpha), N)
        for a, p in zip(alpha, res.p):
            assert abs(res.q * a - p) < Fraction(1, N)


class TestFrankTardos:
    def test_small_integer_vector(self):
        assert frank_tardos_decompose([1, 2, 0], 4) == [([1, 2, 0], 1)]

    def test_equal_thirds(self):
        parts = frank_tardos_decompose([Fraction(1, 3), Fraction(1, 3)], 4)
        assert len(parts) == 1
        wbar, chi = parts[0]
        assert wbar[0] == wbar[1] != 0
        assert [chi * a for a in wbar] == [Fraction(1, 3)] * 2

    def test_huge_entry_needs_two_rounds(self):
        w = [1, 10**9 + 1]
        parts = frank_tardos_decompose(w, 4)
        assert len(parts) >= 2
        self._check(w, parts, 4)

    @staticmethod
    def _check(w, parts, N):
        n = len(w)
        assert [sum(chi * wb[i] for wb, chi in parts) for i in range(n)] == [Fraction(a) for a in w]
        assert len(parts) <= n
        for wb, _ in parts:
            assert max(abs(a) for a in wb) <= coefficient_limit(n - 1, N)
        # <w, z> = 0 iff <wbar_i, z> = 0 for all i, on the l1 ball of radius N - 1
        for z in l1_ball(n, N - 1):
            assert (dot(w, z) == 0) == all(dot(wb, z) == 0 for wb, _ in parts)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_vectors(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 3)
        N = rng.randint(2, 5)
        w = [rng.choice([0, rng.randint(-9, 9), rng.randint(-10**8, 10**8)]) for _ in range(n)]
        if not any(w):
            w[0] = 1
        self._check(w, frank_tardos_decompose(w, N), N)


class TestReplaceHyperplane:
    def test_already_small(self):
        out = replace_hyperplane(AffineSubspace(2), Hyperplane((1, 0), 0), 4)
        assert out.hyperplanes == [Hyperplane((1, 0), 0)]
        assert not out.infeasible

    def test_huge_normal(self):
        H, h, N = AffineSubspace(2), Hyperplane((10**12, 1), 5), 4
        out = replace_hyperplane(H, h, N)
        assert out.hyperplanes
        for g in out.hyperplanes:
            assert max(max(abs(a) for a in g.d), abs(g.k)) <= coefficient_limit(2, N)
        assert_equivalent(H, h, out, N)

    def test_lifted_norm_identity(self):
        for z in l1_ball(3, 2):
            assert sum(abs(a) for a in list(z) + [-1]) == sum(abs(a) for a in z) + 1

    def test_unreachable_value_gives_missing_hyperplane(self):
        H, h, N = AffineSubspace(2), Hyperplane((1, 0), 10**6), 4
        out = replace_hyperplane(H, h, N)
        assert out.infeasible and len(out.hyperplanes) == 1
        assert_equivalent(H, h, out, N)

    def test_parity_obstruction(self):
        H, h, N = AffineSubspace(2), Hyperplane((2, 4), 3), 5
        out = replace_hyperplane(H, h, N)
        assert out.infeasible
        assert_equivalent(H, h, out, N)

    def test_dependent_normal_rejected(self):
        H = AffineSubspace(2, [Hyperplane((1, 1), 0)])
        with pytest.raises(DependentInput):
            replace_hyperplane(H, Hyperplane((2, 2), 3), 4)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_equivalence(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 3)
        N = rng.randint(2, 6)
        hs = []
        for _ in range(rng.randint(0, n - 1)):
            d = [rng.randint(-3, 3) for _ in range(n)]
            if any(d) and rank([list(g.d) for g in hs] + [d]) == len(hs) + 1:
                hs.append(Hyperplane(d, rng.randint(-2, 2)))
        H = AffineSubspace(n, hs)
        while True:
            d = [rng.choice([rng.randint(-5, 5), rng.randint(-10**6, 10**6)]) for _ in range(n)]
            if any(d) and rank(H.normals + [d]) == len(hs) + 1:
                break
        z0 = [rng.randint(-1, 1) for _ in range(n)]
        k = dot(d, z0) if rng.random() < 0.6 else rng.randint(-10**6, 10**6)
        out = replace_hyperplane(H, Hyperplane(d, k), N)
        assert out.hyperplanes
        for g in out.hyperplanes:
            assert max(max(abs(a) for a in g.d), abs(g.k)) <= coefficient_limit(n, N)
        assert rank(H.normals + [list(g.d) for g in out.hyperplanes]) == len(hs) + len(out.hyperplanes)
        assert_equivalent(H, Hyperplane(d, k), out, N)
