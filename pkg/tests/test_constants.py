from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from genusmaps.constants import (
    ConstantsTable,
    compute_a,
    compute_p,
    compute_t,
    compute_t_exact,
    compute_v,
    tg_table,
    verify_a,
)
from genusmaps.numeric import DomainError, PrecisionReal, as_mpf


class TestASequence:
    def test_base_case(self):
        assert compute_a(0) == [Fraction(1)]

    def test_a1(self):
        # g=1: (1)(-1)/48 * a_0, empty sum
        assert compute_a(1)[1] == Fraction(-1, 48)

    def test_a2(self):
        # g=2: (6*4/48) * a_1 - (1/2) a_1^2 = -1/96 - 1/4608
        assert compute_a(2)[2] == Fraction(-1, 96) - Fraction(1, 4608)

    def test_independent_reverification(self):
        assert verify_a(compute_a(12))

    def test_negative_gmax(self):
        with pytest.raises(DomainError):
            compute_a(-1)


class TestTg:
    def test_t0_is_2_over_sqrt_pi(self):
        prec = 256
        t0 = as_mpf(compute_t(0, prec), prec)
        with mp.workprec(prec):
            target = 2 / mpmath.sqrt(mpmath.pi)
            assert abs(t0 / target - 1) < mpmath.mpf(10) ** -70

    def test_t1_exact_rational(self):
        assert compute_t_exact(1) == Fraction(1, 24)
        assert compute_t_exact(2) is None  # Gamma(9/2) is irrational

    def test_exact_matches_numeric(self):
        for g in (1, 3, 5):
            exact = compute_t_exact(g)
            numeric = compute_t(g, 128)
            assert float(numeric) == pytest.approx(float(exact), rel=1e-30)

    def test_positive_through_g10(self):
        for g in range(11):
            assert compute_t(g, 128) > 0

    def test_precision_agreement(self):
        # 128-bit and 512-bit evaluations agree to at least 120 bits
        for g in (0, 2, 4, 7):
            lo = as_mpf(compute_t(g, 128), 512)
            hi = as_mpf(compute_t(g, 512), 512)
            with mp.workprec(512):
                assert abs(lo / hi - 1) < mpmath.mpf(2) ** -120


class TestVg:
    def test_v0_is_required(self):
        with pytest.raises(DomainError):
            compute_v(3, None)

    def test_all_finite(self):
        for v in compute_v(8, Fraction(1)):
            assert mpmath.isfinite(v.value)

    def test_precision_stability(self):
        prec = 192
        lo = compute_v(6, 1, prec)
        hi = compute_v(6, 1, prec + 64)
        with mp.workprec(prec + 64):
            for a, b in zip(lo, hi):
                assert abs(a.value / b.value - 1) < mpmath.mpf(2) ** (32 - prec)

    def test_v1_matches_hand_evaluation(self):
        # v_1 = 1/(2 sqrt(3)) * (-1/2) v_0 with the half-index a term zero
        v0 = Fraction(3)
        v1 = compute_v(1, v0)[0]
        with mp.workprec(256):
            target = -mpmath.mpf(3) / (4 * mpmath.sqrt(3))
            assert abs(v1.value - target) < mpmath.mpf(10) ** -70


class TestPg:
    def test_finite_g1_to_5(self):
        for g in range(1, 6):
            assert mpmath.isfinite(compute_p(g, 1).value)

    def test_precision_stability(self):
        a = compute_p(3, 1, 256)
        b = compute_p(3, 1, 512)
        with mp.workprec(512):
            assert abs(a.value / b.value - 1) < mpmath.mpf(2) ** -200

    def test_requires_positive_index(self):
        with pytest.raises(DomainError):
            compute_p(0, 1)


class TestConstantsTable:
    def test_add_and_lookup(self):
        t = ConstantsTable()
        t.add("t_0", compute_t(0), "exact-recursion")
        assert "t_0" in t
        assert t.provenance("t_0") == "exact-recursion"

    def test_rejects_unknown_provenance(self):
        t = ConstantsTable()
        with pytest.raises(ValueError):
            t.add("x", PrecisionReal(1), "made-up")

    def test_tg_table_records(self):
        table = tg_table(3)
        recs = table.as_records()
        assert [r["name"] for r in recs] == ["t_0", "t_1", "t_2", "t_3"]
        assert all(r["provenance"] == "exact-recursion" for r in recs)
