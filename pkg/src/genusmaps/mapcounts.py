"""Asymptotic counts of rooted k-connected maps on genus-g surfaces,
plus the exact planar reference formulas used to sanity-check them.

The headline estimate is

    M(n, m; g, k) ~ C_k(r) A_g(r) (2+r)^((k-1)(5g-3)/2)
                    * n^(5g/2 - 3) rho(r)^(-n) eta_k(r)^(-m)

with r chosen so that the edge density m/n matches the class-k density map.
Counts at realistic (n, m) dwarf any fixed-width float, so evaluation happens
in log-space (LogMagnitude).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from genusmaps.numeric import (
    DEFAULT_PRECISION,
    BracketError,
    DomainError,
    LogMagnitude,
    PrecisionReal,
    as_mpf,
)
from genusmaps import parametric
from genusmaps.parametric import density_mu, eta, rho, sigma2, solve_r

DENSITY_INTERVALS = {1: (1, None), 2: (1, None), 3: (Fraction(3, 2), 3)}


@dataclass(frozen=True)
class CountQuery:
    g: int
    k: int
    n: int
    m: int

    def __post_init__(self):
        if self.g < 0:
            raise DomainError("genus must be >= 0")
        if self.k not in (1, 2, 3):
            raise DomainError("connectivity class must be 1, 2 or 3")
        if self.n < 1 or self.m < 1:
            raise DomainError("n and m must be positive")
        lo, hi = DENSITY_INTERVALS[self.k]
        ratio = Fraction(self.m, self.n)
        if not (ratio > lo and (hi is None or ratio < hi)):
            hi_s = "inf" if hi is None else str(hi)
            raise DomainError(
                f"m/n = {float(ratio):.4f} outside the k={self.k} density "
                f"interval ({lo}, {hi_s})")


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Structured form of the map-count asymptotic at a density point r."""

    r: PrecisionReal
    amplitude: PrecisionReal       # C_k(r) * A_g(r)
    extra_factor: PrecisionReal    # (2+r)^((k-1)(5g-3)/2)
    n_exponent: PrecisionReal      # 5g/2 - 3
    per_vertex_base: PrecisionReal  # 1/rho(r)
    per_edge_base: PrecisionReal    # 1/eta_k(r)

    def evaluate(self, n: int, m: int) -> LogMagnitude:
        prec = self.amplitude.precision
        with mp.workprec(prec + 16):
            log_val = (
                mpmath.log(self.amplitude.value)
                + mpmath.log(self.extra_factor.value)
                + self.n_exponent.value * mpmath.log(n)
                + n * mpmath.log(self.per_vertex_base.value)
                + m * mpmath.log(self.per_edge_base.value))
            return LogMagnitude.from_log(PrecisionReal(log_val, prec))


def map_estimate(q: CountQuery, prec: int = DEFAULT_PRECISION):
    """Asymptotic rooted-map count for the query.

    Returns (AsymptoticEstimate, LogMagnitude value at (n, m)).
    """
    work = prec + 16
    with mp.workprec(work):
        ratio = mpmath.mpf(q.m) / q.n
        r = solve_r(q.k, ratio, work)
        amp = parametric.amplitude_C(q.k, r, work) * parametric.A_g(q.g, r, prec=work)
        extra = (2 + as_mpf(r, work)) ** (
            mpmath.mpf((q.k - 1) * (5 * q.g - 3)) / 2)
        est = AsymptoticEstimate(
            r=PrecisionReal(r, prec),
            amplitude=PrecisionReal(amp, prec),
            extra_factor=PrecisionReal(extra, prec),
            n_exponent=PrecisionReal(Fraction(5 * q.g, 2) - 3, prec),
            per_vertex_base=PrecisionReal(1 / as_mpf(rho(r, work), work), prec),
            per_edge_base=PrecisionReal(1 / as_mpf(eta(q.k, r, work), work), prec),
        )
    return est, est.evaluate(q.n, q.m)


def _eta_unit_root(k: int, prec: int) -> PrecisionReal:
    """The r* > 0 with eta_k(r*) = 1, when it exists.

    eta_3 crosses 1 at r* = sqrt(7)/2 - 1.  eta_1 is bounded above by 1/4 and
    eta_2 stays below 1 for every r > 0 (loops and multiple edges make the
    edge count of those classes unbounded per vertex), so for k in {1, 2} the
    concentration point does not exist and a bracket error is raised.
    """
    if k == 3:
        with mp.workprec(prec + 16):
            return PrecisionReal(mpmath.sqrt(7) / 2 - 1, prec)
    raise BracketError(
        f"eta_{k}(r) = 1 has no positive solution: eta_1 <= 1/4 and "
        f"eta_2 < 1 for all r > 0, so edge counts in class k={k} have no "
        "fixed-density concentration point")


def mean_edges(g: int, k: int, n: int, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Asymptotic mean edge count: density_mu(k, r*) * n with eta_k(r*) = 1."""
    r_star = _eta_unit_root(k, prec + 16)
    return density_mu(k, r_star, prec) * n


def edge_variance(g: int, k: int, n: int, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Asymptotic edge-count variance: n * sigma_k^2(r*) with eta_k(r*) = 1."""
    r_star = _eta_unit_root(k, prec + 16)
    return sigma2(k, r_star, prec) * n


def exact_2conn_planar(i: int, j: int) -> int:
    """Exact number of rooted 2-connected planar maps with i+1 vertices and
    j+1 faces:

        (2i+j-2)! (2j+i-2)! / (i! j! (2i-1)! (2j-1)!)
    """
    if i < 1 or j < 1:
        raise DomainError("i and j must be >= 1")
    num = math.factorial(2 * i + j - 2) * math.factorial(2 * j + i - 2)
    den = (math.factorial(i) * math.factorial(j)
           * math.factorial(2 * i - 1) * math.factorial(2 * j - 1))
    q, rem = divmod(num, den)
    assert rem == 0, "closed formula must be integral"
    return q


def exact_2conn_planar_log(i: int, j: int,
                           prec: int = DEFAULT_PRECISION) -> LogMagnitude:
    """Log-space version of exact_2conn_planar for large (i, j)."""
    if i < 1 or j < 1:
        raise DomainError("i and j must be >= 1")
    with mp.workprec(prec + 16):
        lg = mpmath.loggamma
        val = (lg(2 * i + j - 1) + lg(2 * j + i - 1)
               - lg(i + 1) - lg(j + 1) - lg(2 * i) - lg(2 * j))
        return LogMagnitude.from_log(PrecisionReal(val, prec))


def exact_3conn_planar_asym(i: int, j: int,
                            prec: int = DEFAULT_PRECISION) -> LogMagnitude:
    """Asymptotic number of rooted 3-connected planar maps with i+1 vertices
    and j+1 faces:

        1/(3^5 i j) * binom(2i, j+3) * binom(2j, i+3)

    Zero when either binomial vanishes.
    """
    if j + 3 > 2 * i or i + 3 > 2 * j:
        return LogMagnitude(0, PrecisionReal(0, prec))
    with mp.workprec(prec + 16):
        lg = mpmath.loggamma

        def lbinom(a, b):
            return lg(a + 1) - lg(b + 1) - lg(a - b + 1)
        val = lbinom(2 * i, j + 3) + lbinom(2 * j, i + 3) \
            - 5 * mpmath.log(3) - mpmath.log(i) - mpmath.log(j)
        return LogMagnitude.from_log(PrecisionReal(val, prec))


@dataclass(frozen=True)
class ConvergenceRow:
    i: int
    n: int
    m: int
    ratio_minus_1: float


def g0_consistency(k: int, i_max: int, step: int = 100,
                   prec: int = DEFAULT_PRECISION) -> list:
    """Exact-vs-asymptotic ratio table along the diagonal i = j.

    For genus 0, a map with i+1 vertices and i+1 faces has, by the Euler
    relation, m = 2i edges.  Returns rows of (exact / estimate - 1).
    """
    if k not in (2, 3):
        raise DomainError("cross-check covers k in {2, 3} only")
    rows = []
    for i in range(step, i_max + 1, step):
        n, m = i + 1, 2 * i
        if k == 2:
            exact = exact_2conn_planar_log(i, i, prec)
        else:
            exact = exact_3conn_planar_asym(i, i, prec)
        _, est = map_estimate(CountQuery(g=0, k=k, n=n, m=m), prec)
        ratio = (exact / est).to_real()
        rows.append(ConvergenceRow(i=i, n=n, m=m,
                                   ratio_minus_1=float(ratio) - 1.0))
    return rows
