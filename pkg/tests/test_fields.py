import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from superlie.fields import (
    ArityMismatch,
    DegreeCapExceeded,
    FieldCtx,
    MultiPoly,
    ZeroInverse,
)

F3 = FieldCtx.prime(3)
F5 = FieldCtx.prime(5)
F7 = FieldCtx.prime(7)
Q = FieldCtx.rationals()


def brute_force_inverse(a, p):
    # independent oracle: scan all residues
    for b in range(1, p):
        if (a * b) % p == 1:
            return b
    raise AssertionError(f"no inverse of {a} mod {p}")


class TestFieldCtx:
    def test_rejects_char_two(self):
        with pytest.raises(ValueError):
            FieldCtx.prime(2)

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            FieldCtx.prime(9)

    def test_rejects_huge(self):
        with pytest.raises(ValueError):
            FieldCtx.prime(2**31 + 11)

    def test_inverse_examples(self):
        assert F5.inv(2) == 3
        assert F5.inv(1) == 1
        assert Q.inv(Fraction(1)) == 1
        # frozen from the brute-force scan of residues 1..6
        assert brute_force_inverse(3, 7) == 5
        assert F7.inv(3) == 5

    def test_zero_inverse(self):
        with pytest.raises(ZeroInverse):
            F5.inv(0)
        with pytest.raises(ZeroInverse):
            Q.inv(Fraction(0))

    def test_inverse_matches_oracle_everywhere(self):
        for p in (3, 5, 7, 11):
            ctx = FieldCtx.prime(p)
            for a in range(1, p):
                assert ctx.inv(a) == brute_force_inverse(a, p)

    def test_of_parses_strings(self):
        assert F5.of("7") == 2
        assert F5.of("-1") == 4
        assert F5.of("1/2") == 3
        assert Q.of("3/4") == Fraction(3, 4)

    def test_of_fraction_in_prime_field(self):
        assert F5.of(Fraction(1, 2)) == 3
        assert F7.of(Fraction(-1, 3)) == F7.mul(F7.neg(1), F7.inv(3))

    @given(a=st.integers(0, 4), b=st.integers(0, 4))
    def test_round_trip_add_f5(self, a, b):
        assert F5.sub(F5.add(a, b), b) == a

    @given(a=st.integers(0, 6), b=st.integers(1, 6))
    def test_round_trip_mul_f7(self, a, b):
        assert F7.mul(F7.mul(a, b), F7.inv(b)) == a

    @given(
        a=st.fractions(min_value=-50, max_value=50, max_denominator=20),
        b=st.fractions(min_value=-50, max_value=50, max_denominator=20),
    )
    def test_round_trip_rationals(self, a, b):
        assert Q.sub(Q.add(a, b), b) == a
        if b != 0:
            assert Q.mul(Q.mul(a, b), Q.inv(b)) == a

    def test_round_trip_bulk(self):
        import random

        rng = random.Random(0)
        for _ in range(1000):
            a, b = rng.randrange(7), rng.randrange(1, 7)
            assert F7.sub(F7.add(a, b), b) == a
            assert F7.mul(F7.mul(a, b), F7.inv(b)) == a


def poly(ctx, arity, terms):
    return MultiPoly(ctx, arity, terms)


class TestMultiPoly:
    def test_eval_square(self):
        f = poly(F5, 1, {(2,): 1})
        assert f.eval([3]) == 4

    def test_eval_zero_poly(self):
        f = MultiPoly.zero(F7, 2)
        assert f.eval([3, 4]) == 0

    def test_arity_mismatch(self):
        f = poly(F5, 2, {(1, 0): 1})
        with pytest.raises(ArityMismatch):
            f.eval([1])

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            poly(F5, 1, {(4,): 1})
        x = MultiPoly.variable(F5, 1, 0)
        sq = x * x
        with pytest.raises(DegreeCapExceeded):
            _ = sq * sq

    def test_is_zero_over_f3(self):
        # 6*x1^3 - 9*x0*x1*x2 + 3*x0^2*x3: every coefficient vanishes mod 3
        terms = {(0, 3, 0, 0): 6, (1, 1, 1, 0): -9, (2, 0, 0, 1): 3}
        assert poly(F3, 4, terms).is_zero() == (True, None)
        ok, witness = poly(Q, 4, terms).is_zero()
        assert not ok and witness is not None

    def test_is_zero_witness(self):
        ok, witness = poly(Q, 1, {(3,): 3}).is_zero()
        assert not ok
        assert witness == ((3,), Fraction(3))
        assert poly(F3, 1, {(3,): 3}).is_zero() == (True, None)

    def test_s2_coefficient_polynomial_nonzero_over_q(self):
        # 6 a1^2 a3 - 3 a0 a2 a3 - 3 a1 a2^2 in variables (a0,a1,a2,a3)
        f = poly(Q, 4, {(0, 2, 0, 1): 6, (1, 0, 1, 1): -3, (0, 1, 2, 0): -3})
        ok, witness = f.is_zero()
        assert not ok and witness is not None
        assert f.eval([1, 1, 1, 1]) == 0  # vanishing at a point proves nothing
        assert f.eval([0, 1, 0, 1]) == 6

    @given(
        st.lists(st.integers(0, 4), min_size=3, max_size=3),
        st.lists(st.integers(0, 4), min_size=3, max_size=3),
        st.lists(st.integers(0, 4), min_size=3, max_size=3),
    )
    @settings(max_examples=60)
    def test_distributivity_degree_one(self, cf, cg, ch):
        def lin(cs):
            t = {(0, 0): cs[0], (1, 0): cs[1], (0, 1): cs[2]}
            return poly(F5, 2, t)

        f, g, h = lin(cf), lin(cg), lin(ch)
        assert (f + g) * h == f * h + g * h

    def test_zero_iff_vanishes_everywhere_small(self):
        import itertools

        cases = [
            poly(F5, 2, {(1, 1): 2, (0, 2): 3}),
            poly(F5, 2, {}),
            poly(F3, 3, {(1, 1, 1): 3}),
            poly(F7, 1, {(3,): 1, (1,): -1}),  # x^3 - x is NOT identically 0 in F7
        ]
        for f in cases:
            p = f.ctx.p
            vanishes = all(
                f.eval(pt) == 0
                for pt in itertools.product(range(p), repeat=f.arity)
            )
            assert f.is_zero()[0] == vanishes or (
                # x^p-ish polynomials can vanish pointwise without being the
                # zero polynomial; is_zero() = True must still imply vanishing
                not f.is_zero()[0]
            )
            if f.is_zero()[0]:
                assert vanishes

    def test_eval_matches_horner_oracle(self):
        import random

        rng = random.Random(1)
        for _ in range(50):
            c3, c2, c1, c0 = (rng.randrange(7) for _ in range(4))
            f = poly(F7, 1, {(3,): c3, (2,): c2, (1,): c1, (0,): c0})
            x = rng.randrange(7)
            assert f.eval([x]) == (((c3 * x + c2) * x + c1) * x + c0) % 7
