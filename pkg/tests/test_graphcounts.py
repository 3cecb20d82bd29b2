import mpmath
import pytest
from mpmath import mp

from genusmaps import graphcounts as gc
from genusmaps import mapcounts as mc
from genusmaps.numeric import DomainError, as_mpf
from genusmaps.parametric import rho


@pytest.fixture(scope="module")
def chain():
    return gc.constants_chain(256)


class TestNetworkBundle:
    def test_lambda2_unit_at_t_hat(self, chain):
        b = gc.network_bundle(chain.t_hat, 256)
        with mp.workprec(256):
            assert abs(b.lambda2.value - 1) < mpmath.mpf(2) ** -200

    def test_t_hat_printed_value(self, chain):
        assert mpmath.nstr(chain.t_hat.value, 5) == "0.62637"

    def test_rho2_at_t_hat(self, chain):
        b = gc.network_bundle(chain.t_hat, 256)
        assert mpmath.nstr(b.rho2.value, 4) == "0.03819"

    def test_parameter_bridge(self):
        # with t = 1/(1+2r) the network singularity equals the map one
        prec = 192
        with mp.workprec(prec):
            for i in range(20):
                r = mpmath.mpf("0.05") + i * mpmath.mpf("0.35")
                t = 1 / (1 + 2 * r)
                lhs = as_mpf(gc.network_bundle(t, prec).rho2, prec)
                rhs = as_mpf(rho(r, prec), prec)
                assert abs(lhs / rhs - 1) < mpmath.mpf(2) ** (32 - prec)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            gc.network_bundle(0)
        with pytest.raises(DomainError):
            gc.network_bundle(1)

    def test_expansion_coefficients_finite_positive(self):
        b = gc.network_bundle(0.5)
        assert b.D0 > 0
        assert b.D1 < 0
        assert b.D3half > 0
        assert b.sigma2 > 0


class TestSolveT:
    def test_roundtrip(self):
        prec = 256
        with mp.workprec(prec):
            for ratio in ("1.2", "2.0", "2.8"):
                t = gc.solve_t(mpmath.mpf(ratio), prec)
                mu = as_mpf(gc.network_bundle(t, prec).mu, prec)
                assert abs(mu - mpmath.mpf(ratio)) < mpmath.mpf(10) ** -40

    def test_monotone_in_ratio(self):
        ts = [float(gc.solve_t(x, 64)) for x in (1.1, 1.5, 2.0, 2.5, 2.9)]
        assert ts == sorted(ts)

    def test_endpoints_rejected(self):
        with pytest.raises(DomainError):
            gc.solve_t(1.0)
        with pytest.raises(DomainError):
            gc.solve_t(3.0)


class TestGraphs3Conn:
    def test_is_map_estimate_over_4m(self):
        n, m = 301, 600
        _, maps = mc.map_estimate(mc.CountQuery(g=0, k=3, n=n, m=m))
        graphs = gc.graphs_3conn(0, n, m)
        composed = maps / (4 * m)
        # bit-level: identical LogMagnitude composition
        assert composed.log_abs.value == graphs.log_abs.value
        assert composed.sign == graphs.sign == 1

    def test_density_error_propagates(self):
        with pytest.raises(DomainError):
            gc.graphs_3conn(0, 100, 500)


class TestGraphs2Conn:
    def test_B1_is_one(self):
        for t in (0.2, 0.5, 0.8):
            assert float(gc.B_g(1, t)) == 1.0

    def test_B2_at_t_hat_is_beta2(self, chain):
        with mp.workprec(256):
            b2 = as_mpf(gc.B_g(2, chain.t_hat, 256), 256)
            assert abs(b2 / chain.beta2.value - 1) < mpmath.mpf(2) ** -200
            assert mpmath.nstr(b2, 5) == "76150.0"

    def test_finite_value(self):
        v = gc.graphs_2conn(2, 500, 1000)
        assert v.sign == 1
        assert mpmath.isfinite(v.log_abs.value)

    def test_unimodal_near_concentration_density(self):
        # at fixed (g, n), the count peaks near m = mu(t*) n with
        # lambda2(t*) = 1, i.e. the t-hat density
        chain = gc.constants_chain(64)
        mu_star = float(gc.network_bundle(chain.t_hat, 64).mu)
        n = 2000
        logs = {}
        for m in range(int(1.2 * n), int(2.9 * n), 100):
            logs[m] = float(gc.graphs_2conn(1, n, m, 64).log_abs)
        best = max(logs, key=logs.get)
        assert abs(best - mu_star * n) <= 100

    def test_planar_bivariate_not_covered(self):
        with pytest.raises(DomainError, match="externally sourced"):
            gc.graphs_2conn(0, 100, 200)


class TestConstantsChain:
    def test_alpha_beta_quarter_identity(self, chain):
        with mp.workprec(256):
            for k in (1, 2, 3):
                prod = chain.alpha(k).value * chain.beta(k).value
                assert abs(prod - mpmath.mpf(1) / 4) < mpmath.mpf(2) ** -180

    def test_k0_rides_on_k1(self, chain):
        assert chain.x0.value == chain.x1.value
        assert chain.beta0.value == chain.beta1.value

    def test_printed_digits(self, chain):
        assert mpmath.nstr(chain.x3.value, 4) == "0.04751"
        assert mpmath.nstr(chain.x2.value, 4) == "0.03819"
        assert mpmath.nstr(chain.x1.value, 4) == "0.03673"
        assert mpmath.nstr(chain.beta2.value, 6) == "76150.1"
        assert mpmath.nstr(chain.beta1.value, 6) == "68724.2"
        assert mpmath.nstr(chain.alpha2.value, 6) == "3.28299e-6"
        assert mpmath.nstr(chain.alpha1.value, 6) == "3.63773e-6"
        # published as 3.77651e-6; agree to one unit in the last digit
        assert abs(chain.alpha0.value - mpmath.mpf("3.77651e-6")) < 1e-11

    def test_refitted_P1_consistent_with_printed(self, chain):
        # the refit must agree with the published four digits
        assert abs(float(chain.expansion.P1) - (-0.03979)) < 5e-5

    def test_G01_at_x1_printed(self, chain):
        assert mpmath.nstr(chain.expansion.G01_0.value, 4) == "0.03744"

    def test_provenance_tags(self, chain):
        table = chain.table()
        assert table.provenance("x3") == "closed-form"
        assert table.provenance("t_hat") == "root-solve"
        assert table.provenance("beta1") == "paper-numeric"
        assert table.provenance("alpha0") == "paper-numeric"


class TestGraphsByVertices:
    def test_log_structure(self, chain):
        # log value = ln(alpha_k beta_k^g t_g) + (5g/2-7/2) ln n - n ln x_k
        from genusmaps.constants import compute_t
        prec = 128
        g, k, n = 1, 3, 500
        got = gc.graphs_by_vertices(g, k, n, prec, chain).value
        with mp.workprec(prec):
            expect = (mpmath.log(chain.alpha3.value)
                      + g * mpmath.log(chain.beta3.value)
                      + mpmath.log(as_mpf(compute_t(g, prec), prec))
                      + (mpmath.mpf(5 * g) / 2 - mpmath.mpf(7) / 2)
                      * mpmath.log(n)
                      - n * mpmath.log(chain.x3.value))
            assert abs(got.log_abs.value - expect) < mpmath.mpf(2) ** (40 - prec)

    def test_alpha3_beta3_quarter_shortcut(self, chain):
        with mp.workprec(256):
            prod = chain.alpha3.value * chain.beta3.value
            assert abs(prod - mpmath.mpf(1) / 4) < mpmath.mpf(2) ** -180

    def test_externally_sourced_flag(self, chain):
        assert gc.graphs_by_vertices(0, 0, 50, 64, chain).externally_sourced
        assert gc.graphs_by_vertices(0, 1, 50, 64, chain).externally_sourced
        assert not gc.graphs_by_vertices(0, 2, 50, 64, chain).externally_sourced
        assert not gc.graphs_by_vertices(1, 1, 50, 64, chain).externally_sourced

    def test_monotone_in_g(self, chain):
        n = 10 ** 6
        vals = [float(gc.graphs_by_vertices(g, 2, n, 64, chain).value.log10())
                for g in range(4)]
        assert vals == sorted(vals)

    def test_rejects_bad_k(self, chain):
        with pytest.raises(DomainError):
            gc.graphs_by_vertices(0, 4, 10, 64, chain)
