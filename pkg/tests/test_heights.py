"""Heights, torsion detection, and the lower-bound constants.

The height values asserted here are cross-checked two independent ways:
frozen literals computed from closed forms (log 2, half the log of the
golden ratio) and a numpy-roots Mahler oracle defined locally, which
shares no code with the mpmath ladder under test."""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from galheight import heights as ht
from galheight.errors import (NonpositiveConstant, PreconditionViolated,
                              ReduciblePolynomial, ZeroPolynomial)

GOLDEN = (-1, -1, 1)
LEHMER = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)


def mahler_height(coeffs):
    """Independent oracle: numpy companion-matrix roots, raw coefficients
    (constant first), no normalization."""
    cs = [float(c) for c in coeffs]
    while cs and cs[-1] == 0.0:
        cs.pop()
    d = len(cs) - 1
    acc = math.log(abs(cs[-1]))
    for r in np.roots(list(reversed(cs))):
        a = abs(r)
        if a > 1.0:
            acc += math.log(a)
    return acc / d


@pytest.fixture(scope="module")
def corpus():
    """100 random integer polynomials, nonzero constant term, degree 2-5."""
    rng = np.random.default_rng(20260822)
    out = []
    while len(out) < 100:
        d = int(rng.integers(2, 6))
        cs = [int(c) for c in rng.integers(-9, 10, size=d + 1)]
        if cs[0] == 0 or cs[-1] == 0:
            continue
        out.append(ht.AlgebraicNumber(cs, check_irreducible=False))
    return out


class TestAlgebraicNumber:
    def test_normalization(self):
        f = ht.AlgebraicNumber((-4, 2))
        assert f.coeffs == (-2, 1) and f.degree == 1

    def test_sign_and_trim(self):
        f = ht.AlgebraicNumber((2, -1, 0, 0))
        assert f.coeffs == (-2, 1)

    def test_rejects_zero_and_constants(self):
        with pytest.raises(ZeroPolynomial):
            ht.AlgebraicNumber((0, 0, 0))
        with pytest.raises(PreconditionViolated):
            ht.AlgebraicNumber((5, 0, 0))

    def test_rejects_reducible(self):
        with pytest.raises(ReduciblePolynomial):
            ht.AlgebraicNumber((-1, 0, 1))

    def test_reducible_bypass(self):
        f = ht.AlgebraicNumber((-1, 0, 1), check_irreducible=False)
        assert f.irreducible is None

    def test_high_degree_unchecked(self):
        f = ht.AlgebraicNumber(LEHMER)
        assert f.degree == 10 and f.irreducible is None

    def test_checked_flag(self):
        assert ht.AlgebraicNumber((-2, 1)).irreducible is True

    def test_parse(self):
        assert ht.AlgebraicNumber.parse("-1, -1, 1").coeffs == GOLDEN
        with pytest.raises(PreconditionViolated):
            ht.AlgebraicNumber.parse("1, x, 3")


class TestWeilHeight:
    def test_rational_two(self):
        h = ht.weil_height((-2, 1))
        assert h.value == pytest.approx(math.log(2), abs=1e-9)
        assert h.abs_error <= 1e-9

    def test_golden_ratio(self):
        h = ht.weil_height(GOLDEN)
        closed = 0.5 * math.log((1 + math.sqrt(5)) / 2)
        assert h.value == pytest.approx(closed, abs=1e-9)
        assert h.value == pytest.approx(0.24060591252980174, abs=1e-9)

    def test_lehmer(self):
        h = ht.weil_height(LEHMER)
        assert h.value == pytest.approx(0.016235761200773816, abs=1e-9)

    def test_torsion_heights_vanish(self):
        x = sympy.Symbol("x")
        for n in range(1, 31):
            cs = tuple(int(c) for c in reversed(
                sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))
            h = ht.weil_height(ht.AlgebraicNumber(cs,
                                                  check_irreducible=False))
            assert h.value < 1e-10, f"Phi_{n}"

    def test_kronecker_positivity(self):
        # irreducible, not a root of unity: strictly positive height
        for cs in [(-2, 1), GOLDEN, (3, 1, 1), (1, 2)]:
            f = ht.AlgebraicNumber(cs)
            assert not ht.is_root_of_unity(f)
            assert ht.weil_height(f).value > 1e-4

    def test_agreement_with_oracle(self, corpus):
        for f in corpus:
            mine = ht.weil_height(f).value
            ref = mahler_height(f.coeffs)
            assert mine == pytest.approx(ref, abs=1e-6), f.coeffs

    def test_reciprocal_invariance(self, corpus):
        # reversing the coefficients inverts the roots; the measure of a
        # polynomial with nonzero constant term is unchanged
        for f in corpus:
            rev = ht.AlgebraicNumber(tuple(reversed(f.coeffs)),
                                     check_irreducible=False)
            h1 = ht.weil_height(f).value
            h2 = ht.weil_height(rev).value
            assert h1 == pytest.approx(h2, abs=1e-8), f.coeffs

    def test_power_rule(self, corpus):
        # the polynomial with roots r^m has height m*h; built by resultant
        x, y = sympy.symbols("x y")
        for f in corpus[:25]:
            fy = sum(c * y ** i for i, c in enumerate(f.coeffs))
            g = sympy.Poly(sympy.resultant(fy, x - y ** 2, y), x)
            gcs = [int(c) for c in reversed(g.all_coeffs())]
            assert mahler_height(gcs) == pytest.approx(
                2 * ht.weil_height(f).value, abs=1e-6), f.coeffs

    def test_value_clamped_nonnegative(self):
        h = ht.weil_height((1, 1))
        assert h.value == 0.0

    @given(st.lists(st.integers(-5, 5), min_size=2, max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_height_is_nonnegative(self, cs):
        if all(c == 0 for c in cs) or len([c for c in cs if c]) < 2:
            return
        if cs[-1] == 0:
            return
        f = ht.AlgebraicNumber(cs, check_irreducible=False)
        try:
            h = ht.weil_height(f)
        except ht.RootIsolationFailure:
            # repeated roots defeat the certification ladder; the typed
            # failure is the contract, not a wrong value
            return
        assert h.value >= 0.0
        assert 0 < h.abs_error <= 1e-9


class TestRootOfUnity:
    def test_cyclotomic_family(self):
        x = sympy.Symbol("x")
        for n in (1, 2, 3, 4, 6, 12, 30):
            cs = tuple(int(c) for c in reversed(
                sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))
            f = ht.AlgebraicNumber(cs, check_irreducible=False)
            assert ht.is_root_of_unity(f), f"Phi_{n}"

    def test_rejects_nontorsion(self):
        assert not ht.is_root_of_unity((-2, 1))
        assert not ht.is_root_of_unity(GOLDEN)
        assert not ht.is_root_of_unity((1, 2))   # not monic


class TestAccelerationLambda:
    @pytest.mark.parametrize("p,C1,C2,lam", [
        (5, 5, 5, 7),
        (5, 25, 625, 629),
        (11, 121, 11 ** 8, 214358887),
        (5, 1, 1, 0),
    ])
    def test_examples(self, p, C1, C2, lam):
        assert ht.acceleration_lambda(p, C1, C2) == lam

    def test_custom_policy(self):
        assert ht.acceleration_lambda(5, 5, 5, policy=lambda a: 2 * a) == 5

    def test_policy_must_increase(self):
        with pytest.raises(PreconditionViolated, match="strictly increase"):
            ht.acceleration_lambda(5, 5, 5, policy=lambda a: a)

    def test_policy_step_guard(self):
        slow = lambda a: a + Fraction(1, 4 * 10 ** 6)
        with pytest.raises(PreconditionViolated, match="10\\^6 steps"):
            ht.acceleration_lambda(5, 1, 2, policy=slow)

    def test_rejects_bad_input(self):
        with pytest.raises(PreconditionViolated):
            ht.acceleration_lambda(2, 5, 5)
        with pytest.raises(PreconditionViolated):
            ht.acceleration_lambda(5, 0, 5)
        with pytest.raises(PreconditionViolated):
            ht.acceleration_lambda(5, 5, 0)

    @given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6),
           st.integers(0, 10 ** 6))
    @settings(max_examples=80, deadline=None)
    def test_monotone(self, C1, C2, bump):
        base = ht.acceleration_lambda(5, C1, C2)
        assert ht.acceleration_lambda(5, C1, C2 + bump) >= base
        assert ht.acceleration_lambda(5, C1 + bump, C2) >= base


class TestBoundConstant:
    def test_small_lambda(self):
        b = ht.bound_constant(5, 7)
        assert b.log_c == pytest.approx(-12.046634139389402, abs=1e-12)
        assert b.c == pytest.approx(5.864260683994597e-06, rel=1e-12)
        assert b.c_decimal == "5.864261e-06"

    def test_lambda_zero(self):
        b = ht.bound_constant(59, 0)
        assert b.c == pytest.approx(math.log(29.5) / 2, rel=1e-12)

    def test_positive_for_small_p(self):
        assert ht.bound_constant(3, 2).c > 0

    def test_rejects(self):
        with pytest.raises(NonpositiveConstant):
            ht.bound_constant(2, 1)
        with pytest.raises(PreconditionViolated):
            ht.bound_constant(5, -1)

    def test_scientific_rollover(self):
        # 9.9999999... must render as 1.000000e+01, not 10.000000e+00
        assert ht._scientific(math.log(9.9999999)) == "1.000000e+01"
        assert ht._scientific(math.log(10.0)) == "1.000000e+01"
        assert ht._scientific(math.log(5.864260683994597e-06)) \
            == "5.864261e-06"


class TestBogomolovBound:
    def test_cyclotomic_chain(self):
        b = ht.bogomolov_bound(5, "cyclotomic")
        assert (b.C1, b.C2, b.lam) == (5, 5, 7)
        assert b.c == pytest.approx(math.log(2.5) / (2 * 5 ** 7), rel=1e-12)
        assert list(b.to_json()) == ["p", "kind", "C1", "C2", "lambda",
                                     "log_c", "c", "c_decimal"]

    def test_modular_underflow_stays_finite(self):
        b = ht.bogomolov_bound(11, "modular", degK=2)
        assert b.C2 == 11 ** 8
        assert b.lam == 214358887
        assert b.c is None
        assert b.c_decimal == "1.023698e-223231777"
        # closed form: log log(11/2) - log 2 - lambda*log 11
        expect = math.log(math.log(5.5)) - math.log(2) \
            - 214358887 * math.log(11)
        assert b.log_c == pytest.approx(expect, rel=1e-15)

    def test_rejects(self):
        with pytest.raises(PreconditionViolated):
            ht.bogomolov_bound(4, "cyclotomic")
        with pytest.raises(PreconditionViolated):
            ht.bogomolov_bound(3, "cyclotomic")


class TestEmpiricalCheck:
    def test_mixed_sample(self):
        out = ht.empirical_bound_check([(1, 0, 1), (-2, 1), GOLDEN], 0.1)
        assert out["checked"] == 3 and out["violations"] == 0
        assert [e["status"] for e in out["entries"]] \
            == ["torsion", "ok", "ok"]
        assert out["entries"][0]["height"] == 0.0

    def test_violation_counted(self):
        out = ht.empirical_bound_check([GOLDEN], 0.5)
        assert out["violations"] == 1
        assert out["entries"][0]["status"] == "violation"
        assert out["entries"][0]["height"] == pytest.approx(
            0.24060591252980174, abs=1e-9)
