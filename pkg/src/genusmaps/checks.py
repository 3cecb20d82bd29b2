"""Self-check suites: every release-gating criterion in one place.

Four suites — constants, identities, oracle, convergence — each returning a
list of CheckResult.  The CLI `check` command and the acceptance test run the
same code, so a green CLI run and a green test run mean the same thing.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import mpmath
from mpmath import mp

from genusmaps.numeric import as_mpf
from genusmaps import constants as const
from genusmaps import parametric as par
from genusmaps import mapcounts as mc
from genusmaps import graphcounts as gc
from genusmaps import oracle as orc


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    threshold: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: measured {self.measured} "
                f"(threshold {self.threshold}) in {self.seconds:.2f}s")

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "measured": self.measured, "threshold": self.threshold,
                "seconds": round(self.seconds, 3)}


def _run(name: str, threshold: str, fn: Callable) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, measured = fn()
    except Exception as exc:  # a crash is a failure with the error as value
        passed, measured = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name=name, passed=passed, measured=measured,
                       threshold=threshold, seconds=time.perf_counter() - t0)


def _digits_match(value: mpmath.mpf, printed: str) -> bool:
    """True when value agrees with the printed decimal to +/- 1 unit in its
    last printed digit."""
    printed_v = mpmath.mpf(printed)
    mant = printed.lower().split("e")[0]
    frac_digits = len(mant.split(".")[1]) if "." in mant else 0
    if "e" in printed.lower():
        exp = int(printed.lower().split("e")[1])
    else:
        exp = 0
    ulp = mpmath.mpf(10) ** (exp - frac_digits)
    return abs(value - printed_v) <= ulp


# ---------------------------------------------------------------------------
# Suite: constants  (criteria 1 and 2)
# ---------------------------------------------------------------------------

def check_tg_reproduction(prec: int = 256) -> CheckResult:
    def fn():
        with mp.workprec(prec):
            t0 = as_mpf(const.compute_t(0, prec), prec)
            target = 2 / mpmath.sqrt(mpmath.pi)
            rel = abs(t0 / target - 1)
        t1 = const.compute_t_exact(1)
        ok = rel < mpmath.mpf(10) ** -30 and t1 == Fraction(1, 24)
        return ok, f"|t_0 rel err| = {mpmath.nstr(rel, 3)}, t_1 = {t1}"
    return _run("constants.t_g_reproduction",
                "t_0 to 30 digits; t_1 == 1/24 exactly", fn)


PRINTED_TABLE = {
    "x3": "0.04751", "x2": "0.03819", "x1": "0.03673",
    "beta3": "1.48590e5", "beta2": "7.6150e4", "beta1": "6.87242e4",
    "alpha3": "1.68248e-6", "alpha2": "3.28299e-6", "alpha1": "3.63773e-6",
    "alpha0": "3.77651e-6", "t_hat": "0.62637",
}


def check_graph_constants_table(prec: int = 256) -> List[CheckResult]:
    chain = gc.constants_chain(prec)
    out = []
    for name, printed in PRINTED_TABLE.items():
        def fn(name=name, printed=printed):
            v = as_mpf(getattr(chain, name), prec)
            ok = _digits_match(v, printed)
            return ok, f"{name} = {mpmath.nstr(v, 8)} vs printed {printed}"
        out.append(_run(f"constants.table.{name}",
                        "+/- 1 unit in last printed digit", fn))
    return out


def suite_constants(prec: int = 256) -> List[CheckResult]:
    return [check_tg_reproduction(prec)] + check_graph_constants_table(prec)


# ---------------------------------------------------------------------------
# Suite: identities  (criteria 3, 4, 8, 9)
# ---------------------------------------------------------------------------

def check_Ag_consistency(prec: int = 256, seed: int = 20230901) -> CheckResult:
    def fn():
        rng = random.Random(seed)
        worst = mpmath.mpf(0)
        for g in range(1, 6):
            for _ in range(20):
                r = rng.uniform(0.2, 5.0)
                res = as_mpf(par.consistency_check_Ag(g, r, prec), prec)
                worst = max(worst, res)
        return worst < mpmath.mpf(10) ** -30, f"max residual {mpmath.nstr(worst, 3)}"
    return _run("identities.Ag_two_routes", "< 1e-30", fn)


def check_quad_identities(prec: int = 256, grid: int = 20) -> CheckResult:
    def fn():
        worst = mpmath.mpf(0)
        lo, hi = mpmath.mpf("0.1"), mpmath.mpf(5)
        for i in range(grid):
            for j in range(grid):
                r = lo + (hi - lo) * i / (grid - 1)
                s = lo + (hi - lo) * j / (grid - 1)
                rep = par.quad_identities(r, s, prec, fd_steps=0)
                worst = max(worst, as_mpf(rep.residual_yhat, prec),
                            as_mpf(rep.residual_ystar, prec))
        # second-order convergence of the derivative check at sample points
        ratios_ok = True
        ratio_vals = []
        for (r, s) in [(1.3, 0.4), (0.7, 2.1), (3.0, 3.0)]:
            rep = par.quad_identities(r, s, prec, fd_steps=3)
            for q in rep.fd_ratios:
                ratio_vals.append(float(q))
                if not 0.8 * 4 <= float(q) <= 1.2 * 4:
                    ratios_ok = False
        ok = worst < mpmath.mpf(10) ** -60 and ratios_ok
        return ok, (f"max algebraic residual {mpmath.nstr(worst, 3)}; "
                    f"fd ratios {[round(v, 2) for v in ratio_vals]}")
    return _run("identities.quadrangulation",
                "residuals < 1e-60; fd ratio 4 +/- 20%", fn)


def check_roundtrip_solvers(prec: int = 256, seed: int = 77) -> CheckResult:
    def fn():
        rng = random.Random(seed)
        with mp.workprec(prec):
            tol = mpmath.mpf(10) ** -40
            worst = mpmath.mpf(0)
            for _ in range(100):
                k = rng.choice([1, 2, 3])
                r = mpmath.mpf(rng.uniform(0.05, 20.0))
                ratio = as_mpf(par.density_mu(k, r, prec), prec)
                back = as_mpf(par.solve_r(k, ratio, prec), prec)
                worst = max(worst, abs(back / r - 1))
            for _ in range(100):
                t = mpmath.mpf(rng.uniform(0.05, 0.95))
                ratio = as_mpf(gc.network_bundle(t, prec).mu, prec)
                back = as_mpf(gc.solve_t(ratio, prec), prec)
                worst = max(worst, abs(back / t - 1))
            return worst < tol, f"max relative error {mpmath.nstr(worst, 3)}"
    return _run("identities.solver_roundtrip", "< 1e-40", fn)


def check_concentration(prec: int = 256) -> CheckResult:
    def fn():
        with mp.workprec(prec):
            r_star = mpmath.sqrt(7) / 2 - 1
            target = 3 * (1 + r_star) / (1 + 2 * r_star)
            mean = as_mpf(mc.mean_edges(0, 3, 1, prec), prec)
            e1 = abs(mean / target - 1)
            e2 = abs(as_mpf(par.sigma2(2, 1, prec), prec) - mpmath.mpf(3) / 4)
            e3 = abs(as_mpf(par.sigma2(3, 1, prec), prec) - mpmath.mpf(1) / 4)
            worst = max(e1, e2, e3)
            ok = worst < mpmath.mpf(2) ** (32 - prec)
        return ok, f"max deviation {mpmath.nstr(worst, 3)}"
    return _run("identities.edge_concentration",
                "mean_edges(k=3)/n = 3(1+r*)/(1+2r*); sigma2 values exact", fn)


def suite_identities(prec: int = 256) -> List[CheckResult]:
    return [
        check_Ag_consistency(prec),
        check_quad_identities(prec),
        check_roundtrip_solvers(prec),
        check_concentration(prec),
    ]


# ---------------------------------------------------------------------------
# Suite: oracle  (criteria 5 and 10)
# ---------------------------------------------------------------------------

def check_census_vs_formulas(m_max: int = 4) -> CheckResult:
    def fn():
        entries = orc.census(m_max)
        g0 = orc.totals_by(entries, genus=0)
        expected = {m: orc.tutte_planar_total(m) for m in range(1, m_max + 1)}
        if g0 != expected:
            return False, f"genus-0 totals {g0} != {expected}"
        for m in range(1, m_max + 1):
            sub = [e for e in entries if e.edges == m]
            cells = orc.counts_by_vf(sub, genus=0, min_connectivity=2)
            for (V, F), cnt in cells.items():
                if V >= 2 and F >= 2:
                    ref = mc.exact_2conn_planar(V - 1, F - 1)
                    if ref != cnt:
                        return False, (f"2-connected cell m={m} (V,F)=({V},{F})"
                                       f": census {cnt} != formula {ref}")
        # Euler / integrality already asserted inside census()
        return True, (f"genus-0 totals {list(g0.values())}; all 2-connected "
                      "(V,F) cells match")
    return _run("oracle.census_vs_exact_formulas",
                "exact equality; Euler + integrality asserted", fn)


def check_census_determinism(m: int = 4) -> CheckResult:
    def fn():
        csvs = [orc.to_csv(orc.census(m, workers=w)) for w in (1, 2, 8)]
        ok = csvs[0] == csvs[1] == csvs[2]
        return ok, f"CSV bitwise equal across workers 1/2/8: {ok}"
    return _run("oracle.worker_determinism", "bitwise-equal CSV", fn)


def suite_oracle() -> List[CheckResult]:
    return [check_census_vs_formulas(), check_census_determinism()]


# ---------------------------------------------------------------------------
# Suite: convergence  (criteria 6 and 7)
# ---------------------------------------------------------------------------

def check_2conn_convergence(prec: int = 128) -> CheckResult:
    def fn():
        rows = mc.g0_consistency(2, 500, prec=prec)
        devs = [abs(r.ratio_minus_1) for r in rows]
        decreasing = all(devs[i] > devs[i + 1] for i in range(len(devs) - 1))
        ok = decreasing and devs[-1] < 0.02
        return ok, f"|ratio-1| along i=100..500: {[round(d, 5) for d in devs]}"
    return _run("convergence.2connected_planar",
                "decreasing and < 2% at i=500", fn)


def check_3conn_cross_asymptotic(prec: int = 128) -> CheckResult:
    def fn():
        i = 300
        n, m = i + 1, 2 * i
        exact = mc.exact_3conn_planar_asym(i, i, prec) / (4 * m)
        est = gc.graphs_3conn(0, n, m, prec)
        dev = abs(float((exact / est).to_real()) - 1)
        return dev < 0.05, f"|ratio-1| = {dev:.5f} at i=j=300"
    return _run("convergence.3connected_cross_asymptotic", "< 5% at i=j=300", fn)


def suite_convergence(prec: int = 128) -> List[CheckResult]:
    return [check_2conn_convergence(prec), check_3conn_cross_asymptotic(prec)]


SUITES = {
    "constants": lambda: suite_constants(),
    "identities": lambda: suite_identities(),
    "oracle": lambda: suite_oracle(),
    "convergence": lambda: suite_convergence(),
}


def run_suite(name: str) -> List[CheckResult]:
    if name == "all":
        out = []
        for key in ("constants", "identities", "oracle", "convergence"):
            out.extend(SUITES[key]())
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES)} or 'all'")
    return SUITES[name]()
