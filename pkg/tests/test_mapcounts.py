import math

import mpmath
import pytest
from mpmath import mp

from genusmaps import mapcounts as mc
from genusmaps.numeric import BracketError, DomainError, as_mpf


class TestCountQuery:
    def test_density_validation(self):
        mc.CountQuery(g=0, k=2, n=10, m=20)  # fine
        with pytest.raises(DomainError):
            mc.CountQuery(g=0, k=2, n=10, m=10)  # m/n = 1 not > 1
        with pytest.raises(DomainError):
            mc.CountQuery(g=0, k=3, n=10, m=31)  # m/n > 3
        with pytest.raises(DomainError):
            mc.CountQuery(g=-1, k=2, n=10, m=20)
        with pytest.raises(DomainError):
            mc.CountQuery(g=0, k=4, n=10, m=20)


class TestMapEstimate:
    def test_structure_at_r1(self):
        # m/n = 2 puts every class at r = 1 where rho = 1, eta_1 = 1/12
        est, value = mc.map_estimate(mc.CountQuery(g=0, k=1, n=100, m=200))
        assert float(est.r) == pytest.approx(1.0, rel=1e-30)
        assert float(est.per_vertex_base) == pytest.approx(1.0, rel=1e-30)
        assert float(est.per_edge_base) == pytest.approx(12.0, rel=1e-30)
        assert float(est.n_exponent) == -3.0
        # k = 1 has no (2+r) correction factor
        assert float(est.extra_factor) == pytest.approx(1.0)
        expected = (math.log(float(est.amplitude)) - 3 * math.log(100)
                    + 200 * math.log(12))
        assert float(value.log_abs) == pytest.approx(expected)

    def test_no_overflow_at_large_n(self):
        _, value = mc.map_estimate(mc.CountQuery(g=1, k=3, n=10 ** 6,
                                                 m=2 * 10 ** 6))
        assert value.sign == 1
        assert mpmath.isfinite(value.log_abs.value)

    def test_genus_exponent(self):
        est, _ = mc.map_estimate(mc.CountQuery(g=2, k=2, n=100, m=200))
        assert float(est.n_exponent) == 2.0  # 5*2/2 - 3

    def test_unimodal_in_m_around_mean(self):
        # at fixed (g, k=3, n) the estimate peaks near the concentration mean
        n = 1000
        mean = float(mc.mean_edges(0, 3, n))
        logs = {}
        for m in range(int(n * 1.6), int(n * 2.9), 50):
            _, v = mc.map_estimate(mc.CountQuery(g=0, k=3, n=n, m=m), 64)
            logs[m] = float(v.log_abs)
        best = max(logs, key=logs.get)
        assert abs(best - mean) <= 50
        ms = sorted(logs)
        increasing = [logs[b] > logs[a] for a, b in zip(ms, ms[1:])]
        # one switch from rising to falling
        assert increasing.count(False) > 0
        first_fall = increasing.index(False)
        assert all(not x for x in increasing[first_fall:])


class TestConcentration:
    def test_k3_mean_and_variance(self):
        prec = 256
        with mp.workprec(prec):
            r = mpmath.sqrt(7) / 2 - 1
            mean = as_mpf(mc.mean_edges(0, 3, 1000, prec), prec)
            target = 3 * (1 + r) / (1 + 2 * r) * 1000
            assert abs(mean / target - 1) < mpmath.mpf(2) ** (32 - prec)
            var = as_mpf(mc.edge_variance(0, 3, 1000, prec), prec)
            assert var > 0

    @pytest.mark.parametrize("k", [1, 2])
    def test_k12_have_no_concentration_point(self, k):
        # eta_1 and eta_2 never reach 1 on r > 0, so the defining equation
        # of the mean has no root; the error message should say so
        with pytest.raises(BracketError, match="no positive solution"):
            mc.mean_edges(0, k, 100)
        with pytest.raises(BracketError):
            mc.edge_variance(0, k, 100)


class TestExact2Conn:
    def test_small_values(self):
        assert mc.exact_2conn_planar(1, 1) == 1
        assert mc.exact_2conn_planar(2, 2) == 4
        assert mc.exact_2conn_planar(2, 1) == 1

    def test_symmetry(self):
        for i, j in [(2, 5), (3, 7), (1, 9)]:
            assert mc.exact_2conn_planar(i, j) == mc.exact_2conn_planar(j, i)

    def test_log_version_matches_exact(self):
        prec = 128
        for i, j in [(1, 1), (3, 4), (10, 10), (20, 7)]:
            exact = mc.exact_2conn_planar(i, j)
            logged = mc.exact_2conn_planar_log(i, j, prec)
            with mp.workprec(prec):
                assert abs(logged.to_real().value / exact - 1) \
                    < mpmath.mpf(2) ** (32 - prec)

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            mc.exact_2conn_planar(0, 1)


class TestExact3ConnAsym:
    def test_zero_outside_binomial_range(self):
        assert mc.exact_3conn_planar_asym(2, 2).sign == 0

    def test_positive_and_symmetric(self):
        a = mc.exact_3conn_planar_asym(30, 40)
        b = mc.exact_3conn_planar_asym(40, 30)
        assert a.sign == 1
        assert float(a.log_abs) == pytest.approx(float(b.log_abs), rel=1e-30)


class TestG0Consistency:
    def test_2conn_trend(self):
        rows = mc.g0_consistency(2, 500, prec=128)
        devs = [abs(r.ratio_minus_1) for r in rows]
        assert all(a > b for a, b in zip(devs, devs[1:]))
        assert devs[-1] < 0.02

    def test_euler_relation_in_rows(self):
        for row in mc.g0_consistency(2, 300, prec=64):
            # V - E + F = 2 on the sphere with F = i + 1 faces
            assert row.n - row.m + (row.i + 1) == 2

    def test_3conn_trend_monotone(self):
        rows = mc.g0_consistency(3, 500, prec=128)
        devs = [abs(r.ratio_minus_1) for r in rows]
        assert all(a > b for a, b in zip(devs, devs[1:]))

    def test_rejects_k1(self):
        with pytest.raises(DomainError):
            mc.g0_consistency(1, 100)


def test_exact_vs_estimate_at_201_400():
    # near-planar cross-check quoted to 3%
    exact = mc.exact_2conn_planar_log(200, 200)
    _, est = mc.map_estimate(mc.CountQuery(g=0, k=2, n=201, m=400))
    ratio = float((exact / est).to_real())
    assert abs(ratio - 1) < 0.03
