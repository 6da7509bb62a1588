"""Ramification filtrations, characteristic polynomials, and the exact
constants feeding the height bound."""

import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from galheight import ramification as rf
from galheight.errors import OddWeight, PreconditionViolated

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def quiet_profile(p, k, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return rf.ram_profile(p, k, n)


class TestTameDegree:
    @pytest.mark.parametrize("p,k,expected", [
        (5, 2, 24),
        (5, 4, 8),
        (7, 6, 48),
        (59, 2, 3480),
    ])
    def test_delta(self, p, k, expected):
        assert rf.delta(p, k) == expected

    def test_delta_always_exceeds_one(self):
        # k-1 odd, q-1 even: the gcd can never be all of q-1
        for p in PRIMES:
            for k in range(2, 30, 2):
                assert rf.delta(p, k) > 1

    def test_rejects_bad_input(self):
        with pytest.raises(PreconditionViolated):
            rf.delta(4, 2)
        with pytest.raises(OddWeight):
            rf.delta(5, 3)
        with pytest.raises(PreconditionViolated):
            rf.delta(5, 0)

    def test_s_value(self):
        assert rf.s_value(5, 2) == 4
        assert rf.s_value(7, 4) == 2
        assert rf.s_value(59, 2) == 58


class TestP3:
    def test_holds(self):
        assert rf.p3_holds(5, 2)
        assert rf.p3_holds(59, 2)
        assert rf.p3_holds(7, 6)

    def test_fails(self):
        assert not rf.p3_holds(3, 2)      # p < 5
        assert not rf.p3_holds(5, 4)      # (p+1)/2 = 3 divides 3
        assert not rf.p3_holds(5, 6)      # p divides k-1
        assert not rf.p3_holds(9, 2)      # not prime


class TestModularProfile:
    def test_weight_two_level_two(self):
        prof = rf.ram_profile(5, 2, 2)
        assert (prof.q, prof.d, prof.delta) == (25, 1, 24)
        assert prof.e_n == 600
        assert prof.i_n == 24
        assert prof.group == (24, 5, 5)
        assert prof.last_group == (5, 5)
        assert prof.jumps == ((1, 24, 1),)

    def test_level_three(self):
        prof = rf.ram_profile(5, 2, 3)
        assert prof.e_n == 15000
        assert prof.i_n == 624
        assert prof.jumps == ((1, 24, 1), (25, 624, 2))
        assert prof.group == (24, 25, 25)

    def test_weight_four(self):
        prof = quiet_profile(5, 4, 2)
        assert prof.d == 3
        assert prof.delta == 8
        assert prof.i_n == 8
        assert prof.jumps == ((1, 8, 1),)

    def test_base_level(self):
        prof = rf.ram_profile(59, 2, 1)
        assert prof.e_n == 3480
        assert prof.i_n == 0
        assert prof.jumps == ()
        assert prof.group == (3480,) and prof.last_group == (3480,)

    def test_warns_when_weight_condition_fails(self):
        with pytest.warns(UserWarning, match="weight condition"):
            rf.ram_profile(5, 4, 2)

    def test_no_warning_when_it_holds(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            rf.ram_profile(5, 2, 2)

    def test_json_key_order(self):
        keys = list(rf.ram_profile(5, 2, 2).to_json())
        assert keys == ["p", "k", "q", "d", "delta", "n", "e_n", "i_n",
                        "jumps", "group", "last_group"]

    def test_rejects_level_zero(self):
        with pytest.raises(PreconditionViolated):
            rf.ram_profile(5, 2, 0)

    @given(st.sampled_from(PRIMES[1:]), st.integers(1, 12),
           st.integers(1, 4))
    @settings(max_examples=80, deadline=None)
    def test_jump_ranges_partition(self, p, half_k, n):
        k = 2 * half_k
        prof = quiet_profile(p, k, n)
        # contiguous, ordered, and exactly covering [1, i_n]
        expect_start = 1
        for lo, hi, j in prof.jumps:
            assert lo == expect_start
            assert hi >= lo
            expect_start = hi + 1
        if prof.jumps:
            assert prof.jumps[-1][1] == prof.i_n
        else:
            assert prof.i_n == 0
        assert prof.e_n == prof.delta * prof.q ** (prof.n - 1)
        assert prof.d * prof.i_n == prof.q ** (prof.n - 1) - 1


class TestCycloProfile:
    def test_example(self):
        prof = rf.cyclo_profile(5, 3)
        assert prof.e_n == 100
        assert prof.i_n == 24
        assert prof.jumps == ((1, 4, 1), (5, 24, 2))

    def test_base(self):
        prof = rf.cyclo_profile(2, 1)
        assert prof.e_n == 1 and prof.i_n == 0 and prof.jumps == ()

    def test_rejects_composite(self):
        with pytest.raises(PreconditionViolated):
            rf.cyclo_profile(6, 1)

    @given(st.sampled_from(PRIMES), st.integers(1, 5))
    @settings(max_examples=50, deadline=None)
    def test_matches_modular_specialization(self, p, n):
        """Same break law with q -> p and d -> 1: boundaries become
        p^(j-1) .. p^j - 1 and the total degree (p-1)p^(n-1)."""
        prof = rf.cyclo_profile(p, n)
        assert prof.e_n == (p - 1) * p ** (n - 1)
        for lo, hi, j in prof.jumps:
            assert lo == p ** (j - 1) and hi == p ** j - 1


class TestHerbrand:
    def test_exact_fraction(self):
        assert rf.herbrand_eta(24, 24) == 1
        assert rf.herbrand_eta(25, 24) == Fraction(25, 24)
        assert rf.herbrand_eta(0, 3) == 0

    def test_rejects(self):
        with pytest.raises(PreconditionViolated):
            rf.herbrand_eta(-1, 2)
        with pytest.raises(PreconditionViolated):
            rf.herbrand_eta(1, 0)

    @given(st.integers(0, 10 ** 6), st.integers(1, 10 ** 4))
    @settings(max_examples=100)
    def test_inverse_of_scaling(self, i, d):
        assert rf.herbrand_eta(d * i, d) == i


class TestCharpolys:
    def test_crystalline_at_zero(self):
        quad = rf.crystalline_charpoly(5, 2, 0)
        assert quad.linear == 0 and quad.constant == 5
        assert str(quad) == "X^2 + 5"
        assert quad(0) == 5 and quad(2) == 9

    def test_crystalline_with_character(self):
        quad = rf.crystalline_charpoly(5, 2, 3, chi_p=-1)
        assert quad.linear == 3 and quad.constant == 5

    def test_crystalline_matrix_identity_sweep(self):
        # the internal cross-check must hold on a dense parameter grid
        for p in (5, 7, 59):
            for kprime in (2, 4, 6):
                for a in range(-6, 7):
                    for chi in (1, -1):
                        quad = rf.crystalline_charpoly(p, kprime, a, chi)
                        assert quad.constant == p ** (kprime - 1)
                        assert quad.linear == -a * chi

    def test_crystalline_rejects_low_weight(self):
        with pytest.raises(PreconditionViolated):
            rf.crystalline_charpoly(5, 1, 0)

    def test_frobenius(self):
        quad = rf.frobenius_charpoly(2, -1, 2)
        assert quad.linear == 1 and quad.constant == 2
        quad = rf.frobenius_charpoly(2, 1, 4)
        assert quad.linear == -1 and quad.constant == 8
        with pytest.raises(PreconditionViolated):
            rf.frobenius_charpoly(6, 0, 2)

    def test_companion_satisfies_cayley_hamilton(self):
        def mul(x, y):
            return ((x[0][0] * y[0][0] + x[0][1] * y[1][0],
                     x[0][0] * y[0][1] + x[0][1] * y[1][1]),
                    (x[1][0] * y[0][0] + x[1][1] * y[1][0],
                     x[1][0] * y[0][1] + x[1][1] * y[1][1]))

        for lin, const in [(0, 5), (-3, 7), (2, -4), (1, 1)]:
            quad = rf.MonicQuadratic(linear=lin, constant=const)
            C = quad.companion()
            C2 = mul(C, C)
            for i in range(2):
                for j in range(2):
                    ident = 1 if i == j else 0
                    assert C2[i][j] + lin * C[i][j] + const * ident == 0

    @pytest.mark.parametrize("p,k,expected", [
        (5, 2, -5),
        (59, 2, -59),
        (7, 6, -16807),
    ])
    def test_frobenius_square_scalar(self, p, k, expected):
        assert rf.frobp_square_scalar(p, k) == expected


class TestBoundConstants:
    def test_cyclotomic(self):
        c = rf.h2_constants("cyclotomic", 5)
        assert (c.C1, c.C2) == (5, 5)
        assert c.kind == "cyclotomic"

    def test_modular(self):
        c = rf.h2_constants("modular", 59, degK=2)
        assert c.C1 == 3481
        assert c.C2 == 59 ** 8
        assert c.kind == "modular(degK=2)"

    def test_rejections(self):
        with pytest.raises(PreconditionViolated):
            rf.h2_constants("cyclotomic", 4)
        with pytest.raises(PreconditionViolated):
            rf.h2_constants("modular", 3, degK=1)
        with pytest.raises(PreconditionViolated):
            rf.h2_constants("modular", 5)
        with pytest.raises(PreconditionViolated):
            rf.h2_constants("adelic", 5)

    def test_ratio_bound_sweep(self):
        for p in (5, 7, 11, 59):
            for k in (2, 4, 8):
                for n in (1, 2, 3):
                    assert rf.ratio_bound_check(p, k, n)

    def test_ratio_tight_at_base(self):
        # n = 1, d = 1: e_1/(i_1+1) = (q-1)/1 meets the bound exactly
        prof = rf.ram_profile(5, 2, 1)
        assert Fraction(prof.e_n, prof.i_n + 1) == prof.q - 1

    def test_h1_witness(self):
        assert rf.h1_witness(5) == 256
        assert rf.h1_witness(7) == 4096
        assert rf.h1_witness(5, M=3) == 6561
        assert rf.h1_witness(5, k=2) == 256   # weight is inert here

    def test_h1_witness_rejects(self):
        with pytest.raises(PreconditionViolated):
            rf.h1_witness(3)
        with pytest.raises(PreconditionViolated):
            rf.h1_witness(5, M=1)
