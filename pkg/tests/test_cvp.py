import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latmem.cvp import (
    NormSpec,
    cvp_decision,
    cvp_optimize,
    cvp_search,
    enumerability,
    norm_pow,
)
from latmem.errors import ContractViolation, RankDeficient
from latmem.exact import mat_vec
from latmem.oracle import oracle_cvp

from conftest import random_basis

FIXTURE_B = [[4], [7]]
FIXTURE_T = [0, 5]

HEX = NormSpec.polyhedral([[1, 0], [0, 1], [1, 1]], [2, 2, 3])
OCT3 = NormSpec.polyhedral([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], [1, 2, 1, 3])


def norms_for(n):
    out = [NormSpec.lp(1), NormSpec.lp(2), NormSpec.lp(3), NormSpec.lp(4), NormSpec.infinity()]
    if n == 2:
        out.append(HEX)
    if n == 3:
        out.append(OCT3)
    return out


class TestEnumerability:
    def test_lp(self):
        e = enumerability(NormSpec.lp(3))
        assert (e.k, e.K) == (3, 1)

    def test_infinity(self):
        e = enumerability(NormSpec.infinity())
        assert (e.k, e.K) == (1, 1)

    def test_polyhedral_product(self):
        e = enumerability(NormSpec.polyhedral([[1, 0], [0, 1]], [2, 3]))
        assert (e.k, e.K) == (1, 6)

    @pytest.mark.parametrize("norm", [NormSpec.lp(1), NormSpec.lp(3), NormSpec.infinity(), HEX])
    def test_scaled_powers_are_integers(self, norm):
        rng = random.Random(4)
        e = enumerability(norm)
        for _ in range(200):
            x = [rng.randint(-20, 20) for _ in range(2)]
            assert (e.K * norm_pow(norm, x)).denominator == 1

    def test_rejects_unbounded_polyhedral(self):
        with pytest.raises(ContractViolation):
            NormSpec.polyhedral([[1, 1], [2, 2]], [1, 1])


class TestNormPow:
    def test_values(self):
        assert norm_pow(NormSpec.lp(1), [3, -4]) == 7
        assert norm_pow(NormSpec.lp(2), [3, -4]) == 25
        assert norm_pow(NormSpec.lp(3), [1, -2]) == 9
        assert norm_pow(NormSpec.infinity(), [3, -4]) == 4
        assert norm_pow(HEX, [2, 2]) == Fraction(4, 3)

    @given(st.lists(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 5)), min_size=2, max_size=2))
    def test_homogeneity(self, x):
        for norm in (NormSpec.lp(3), NormSpec.infinity(), HEX):
            k = 3 if norm.kind == "lp" else 1
            assert norm_pow(norm, [2 * a for a in x]) == 2**k * norm_pow(norm, x)


class TestDecision:
    def test_fixture_threshold(self):
        norm = NormSpec.lp(1)
        assert cvp_decision(FIXTURE_B, FIXTURE_T, norm, 5)
        assert not cvp_decision(FIXTURE_B, FIXTURE_T, norm, 4)

    def test_target_in_lattice_at_zero(self):
        B = [[2, 1], [0, 3]]
        t = mat_vec(B, [2, -1])
        for norm in (NormSpec.lp(2), NormSpec.infinity(), HEX):
            assert cvp_decision(B, t, norm, 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_threshold_is_sharp(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 3)
        B = random_basis(rng, n, rng.randint(1, n))
        t = [rng.randint(-5, 5) for _ in range(n)]
        for norm in norms_for(n):
            opt = cvp_optimize(B, t, norm)
            K = enumerability(norm).K
            eps = Fraction(1, 3 * K * K)
            assert cvp_decision(B, t, norm, opt)
            assert cvp_decision(B, t, norm, opt + eps)
            if opt > 0:
                assert not cvp_decision(B, t, norm, opt - eps)


class TestOptimize:
    def test_fixture(self):
        assert cvp_optimize(FIXTURE_B, FIXTURE_T, NormSpec.lp(1)) == 5

    def test_target_in_lattice(self):
        B = [[1, 1], [-1, 2]]
        assert cvp_optimize(B, mat_vec(B, [3, 1]), NormSpec.lp(3)) == 0

    def test_even_lattice_infinity(self):
        assert cvp_optimize([[2, 0], [0, 2]], [1, 1], NormSpec.infinity()) == 1


class TestSearch:
    def test_fixture(self):
        res = cvp_search(FIXTURE_B, FIXTURE_T, NormSpec.lp(1))
        assert res.closest == [0, 0]
        assert res.distance_pow == 5

    def test_target_in_lattice(self):
        B = [[3, 1], [1, 2]]
        t = mat_vec(B, [-2, 5])
        res = cvp_search(B, t, NormSpec.lp(2))
        assert res.closest == t and res.distance_pow == 0

    def test_rational_inputs(self):
        B = [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
        t = [Fraction(1, 5), Fraction(1, 7)]
        res = cvp_search(B, t, NormSpec.lp(2))
        assert res.distance_pow == oracle_cvp(B, t, NormSpec.lp(2)).distance_pow

    def test_rank_deficient_basis(self):
        with pytest.raises(RankDeficient):
            cvp_search([[1, 2], [2, 4]], [0, 1], NormSpec.lp(2))

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_oracle(self, seed):
        rng = random.Random(50 + seed)
        for _ in range(6):
            n = rng.randint(1, 3)
            B = random_basis(rng, n, rng.randint(1, n))
            t = [rng.randint(-5, 5) for _ in range(n)]
            norm = rng.choice(norms_for(n))
            res = cvp_search(B, t, norm)
            ref = oracle_cvp(B, t, norm)
            assert res.distance_pow == ref.distance_pow
            assert res.closest == mat_vec(B, res.coeffs)
            assert norm_pow(norm, [a - b for a, b in zip(t, res.closest)]) == res.distance_pow
