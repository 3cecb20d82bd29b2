"""Singular-curve functions in the (r, s) parametrization.

Rooted maps on orientable surfaces are counted through generating functions
whose dominant singularities live on the curve rs = 1.  Everything here is a
closed-form function of the parameter r > 0 (or of the pair (r, s) for the
quadrangulation substitution identities): the singular point rho(r), the
per-edge bases eta_k(r), the amplitudes C_k(r) and A_g(r), edge densities and
their inverses, and edge-count variances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mp

from genusmaps.numeric import (
    DEFAULT_PRECISION,
    ConvergenceError,
    DomainError,
    PrecisionReal,
    as_mpf,
    find_root,
)
from genusmaps.constants import compute_t

VALID_K_MAPS = (1, 2, 3)


def _pos(name: str, v: mpmath.mpf) -> None:
    if not (v > 0):
        raise DomainError(f"{name} must be positive, got {v}")


def _lift(fn: Callable, *args, prec: int) -> PrecisionReal:
    """Evaluate fn on mpf-converted args at guard precision."""
    work = prec + 16
    with mp.workprec(work):
        vals = [as_mpf(a, work) for a in args]
        return PrecisionReal(fn(*vals), prec)


def rho(r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Per-vertex singular base: rho(r) = r^3 (2+r) / (1+2r)."""
    def f(rv):
        _pos("r", rv)
        return rv**3 * (2 + rv) / (1 + 2 * rv)
    return _lift(f, r, prec=prec)


def eta(k: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Per-edge singular base eta_k(r) for connectivity class k in {1,2,3}."""
    def f(rv):
        _pos("r", rv)
        if k == 1:
            return (1 + 2 * rv) / (4 * (1 + rv + rv**2) ** 2)
        if k == 2:
            return 4 / ((1 + 2 * rv) * (2 + rv) ** 2)
        if k == 3:
            return 3 / (4 * rv * (2 + rv))
        raise DomainError(f"k must be in {VALID_K_MAPS}, got {k}")
    return _lift(f, r, prec=prec)


def amplitude_C(k: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Connectivity-class amplitude C_k(r)."""
    def f(rv):
        _pos("r", rv)
        if k == 1:
            return (2 + rv) * mpmath.sqrt(
                (1 + rv + rv**2) / ((1 + 2 * rv) * (4 + 7 * rv + 4 * rv**2)))
        if k == 2:
            return 1 / mpmath.sqrt((1 + 2 * rv) * (2 + rv))
        if k == 3:
            return 1 / mpmath.sqrt(rv * (2 + rv) ** 3)
        raise DomainError(f"k must be in {VALID_K_MAPS}, got {k}")
    return _lift(f, r, prec=prec)


def A_g(g: int, r, t_g=None, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Genus amplitude:

    A_g(r) = 1/(2 sqrt(pi)) * r^6 (2+r)^(3/2) / (1+2r)^2
             * (12 (1+r)^3 (1+2r)^4 / (r^12 (2+r)^5))^(g/2) * t_g
    """
    if g < 0:
        raise DomainError("g must be >= 0")
    if t_g is None:
        t_g = compute_t(g, prec + 16)

    def f(rv, tv):
        _pos("r", rv)
        base = rv**6 * (2 + rv) ** mpmath.mpf("1.5") / (1 + 2 * rv) ** 2
        ratio = 12 * (1 + rv) ** 3 * (1 + 2 * rv) ** 4 / (rv**12 * (2 + rv) ** 5)
        return base * ratio ** (mpmath.mpf(g) / 2) * tv / (2 * mpmath.sqrt(mpmath.pi))
    return _lift(f, r, t_g, prec=prec)


def c_of_r(r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Prefactor c(r) in the reparametrized constant t_g(r) = c(r) d(r)^g t_g."""
    def f(rv):
        _pos("r", rv)
        return rv**3 * (1 + 2 * rv) * (2 + rv) / (
            32 * mpmath.sqrt(mpmath.pi)
            * mpmath.sqrt(4 + 7 * rv + 4 * rv**2)
            * (1 + rv + rv**2) ** mpmath.mpf("3.5"))
    return _lift(f, r, prec=prec)


def d_of_r(r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Growth factor d(r) in t_g(r) = c(r) d(r)^g t_g."""
    def f(rv):
        _pos("r", rv)
        return 32 * mpmath.sqrt(3) * (1 + rv + rv**2) ** 4 \
            * (1 + rv) ** mpmath.mpf("1.5") \
            / (rv ** mpmath.mpf("3.5") * (2 + rv) ** mpmath.mpf("1.25")
               * (1 + 2 * rv) ** mpmath.mpf("1.25"))
    return _lift(f, r, prec=prec)


def tg_of_r(g: int, r, t_g=None, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Reparametrized constant t_g(r) = c(r) d(r)^g t_g."""
    if t_g is None:
        t_g = compute_t(g, prec + 16)
    c = c_of_r(r, prec + 16)
    d = d_of_r(r, prec + 16)
    with mp.workprec(prec + 16):
        return PrecisionReal(c.value * d.value**g * as_mpf(t_g, prec + 16), prec)


def A_g_via_tgr(g: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """A_g(r) reassembled from the t_g(r) route:

    A_g(r) = 16 r^3 (2+r)^(1/2) (1+r+r^2)^(7/2) (4+7r+4r^2)^(1/2) / (1+2r)^3
             * ((1+2r)^(13/2) / (256 r^5 (1+r+r^2)^8 (2+r)^(5/2)))^(g/2)
             * t_g(r)
    """
    tgr = tg_of_r(g, r, prec=prec + 16)

    def f(rv, tv):
        _pos("r", rv)
        pre = 16 * rv**3 * mpmath.sqrt(2 + rv) \
            * (1 + rv + rv**2) ** mpmath.mpf("3.5") \
            * mpmath.sqrt(4 + 7 * rv + 4 * rv**2) / (1 + 2 * rv) ** 3
        ratio = (1 + 2 * rv) ** mpmath.mpf("6.5") / (
            256 * rv**5 * (1 + rv + rv**2) ** 8 * (2 + rv) ** mpmath.mpf("2.5"))
        return pre * ratio ** (mpmath.mpf(g) / 2) * tv
    return _lift(f, r, tgr, prec=prec)


def consistency_check_Ag(g: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """|A_g(r) via the t_g(r) route / closed form - 1|.

    The two expressions are provably identical; the returned residual measures
    only round-off, so it should sit near 2^-prec.
    """
    direct = A_g(g, r, prec=prec)
    composed = A_g_via_tgr(g, r, prec=prec)
    return abs(composed / direct - 1)


def density_mu(k: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Edge density m/n as a function of r for class k."""
    def f(rv):
        _pos("r", rv)
        if k == 1:
            return (1 + rv) * (1 + rv + rv**2) / (rv**2 * (2 + rv))
        if k == 2:
            return (1 + rv) / rv
        if k == 3:
            return 3 * (1 + rv) / (1 + 2 * rv)
        raise DomainError(f"k must be in {VALID_K_MAPS}, got {k}")
    return _lift(f, r, prec=prec)


def solve_r(k: int, ratio, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Invert density_mu(k, .): the unique r > 0 with m/n = ratio.

    Closed forms exist for k = 2 (ratio > 1) and k = 3 (3/2 < ratio < 3);
    k = 1 (ratio > 1) is solved by bracketed root finding on the monotone
    density map.
    """
    work = prec + 16
    with mp.workprec(work):
        mu = as_mpf(ratio, work)
        if k == 2:
            if not mu > 1:
                raise DomainError("k=2 requires m/n > 1")
            return PrecisionReal(1 / (mu - 1), prec)
        if k == 3:
            if not (mpmath.mpf(3) / 2 < mu < 3):
                raise DomainError("k=3 requires 3/2 < m/n < 3")
            return PrecisionReal((3 - mu) / (2 * mu - 3), prec)
        if k != 1:
            raise DomainError(f"k must be in {VALID_K_MAPS}, got {k}")
        if not mu > 1:
            raise DomainError("k=1 requires m/n > 1")
        # density_mu(1, .) decreases from +inf to 1 on (0, inf); expand a
        # bracket geometrically before handing off to the safeguarded solver.
        lo, hi = mpmath.mpf(1), mpmath.mpf(1)
        while not as_mpf(density_mu(1, lo, work), work) > mu:
            lo /= 2
        while not as_mpf(density_mu(1, hi, work), work) < mu:
            hi *= 2
        tol = mpmath.mpf(2) ** (8 - prec) * hi

        def f(rv):
            return as_mpf(density_mu(1, rv, work), work) - mu
        return find_root(f, lo, hi, tol, prec)


def sigma2(k: int, r, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Edge-count variance density sigma_k^2(r) (variance is n * sigma_k^2)."""
    def f(rv):
        _pos("r", rv)
        if k == 1:
            return (4 + 7 * rv + 4 * rv**2) * (1 + 2 * rv) * (1 + rv + rv**2) \
                / (6 * rv**4 * (2 + rv) ** 2 * (1 + rv))
        if k == 2:
            return (2 + rv) * (1 + 2 * rv) / (6 * rv**2 * (1 + rv))
        if k == 3:
            return 3 * rv * (2 + rv) / (2 * (1 + rv) * (1 + 2 * rv) ** 2)
        raise DomainError(f"k must be in {VALID_K_MAPS}, got {k}")
    return _lift(f, r, prec=prec)


# ---------------------------------------------------------------------------
# Quadrangulation substitution identities
# ---------------------------------------------------------------------------

def xy_from_rs(r, s, prec: int = DEFAULT_PRECISION):
    """The (x, y) point parametrized by (r, s):

    x = r(2+r) / (s(2+s)),   y = s(2+s) / (4 (1+r+s)^2).
    """
    work = prec + 16
    with mp.workprec(work):
        rv, sv = as_mpf(r, work), as_mpf(s, work)
        _pos("r", rv)
        _pos("s", sv)
        x = rv * (2 + rv) / (sv * (2 + sv))
        y = sv * (2 + sv) / (4 * (1 + rv + sv) ** 2)
        return PrecisionReal(x, prec), PrecisionReal(y, prec)


def Q0(r, s, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Planar quadrangulation series value Q_0 = (2r+2s-rs)/((2+r)(2+s))."""
    def f(rv, sv):
        _pos("r", rv)
        _pos("s", sv)
        return (2 * rv + 2 * sv - rv * sv) / ((2 + rv) * (2 + sv))
    return _lift(f, r, s, prec=prec)


def yhat(r, s, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Edge variable after removing contractible 2-cycles:

    yhat = 4s / ((2+s)(2+r)^2),  which equals y (1 + Q_0)^2.
    """
    def f(rv, sv):
        _pos("r", rv)
        _pos("s", sv)
        return 4 * sv / ((2 + sv) * (2 + rv) ** 2)
    return _lift(f, r, s, prec=prec)


def ystar(r, s, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Edge variable of the near-simple reduction: y* = s(4-rs)/(4(2+r))."""
    def f(rv, sv):
        _pos("r", rv)
        _pos("s", sv)
        return sv * (4 - rv * sv) / (4 * (2 + rv))
    return _lift(f, r, s, prec=prec)


def dydx_at_fixed_yhat(r, s, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """dy/dx along the constraint yhat = const:

    dy/dx = - s^2 (2+s)^2 / (4 (2+r) (1+r+s)^3).
    """
    def f(rv, sv):
        _pos("r", rv)
        _pos("s", sv)
        return -(sv**2) * (2 + sv) ** 2 / (4 * (2 + rv) * (1 + rv + sv) ** 3)
    return _lift(f, r, s, prec=prec)


def _solve_rs_from_x_yhat(x_t, yh_t, r0, s0, work: int):
    """Newton-solve (r, s) from (x, yhat) seeded at (r0, s0).

    Partial derivatives of x(r,s) and yhat(r,s) are analytic, so the Jacobian
    is exact and convergence is quadratic from a nearby seed.
    """
    rv, sv = r0, s0
    for _ in range(200):
        fx = rv * (2 + rv) / (sv * (2 + sv)) - x_t
        fy = 4 * sv / ((2 + sv) * (2 + rv) ** 2) - yh_t
        dxdr = (2 + 2 * rv) / (sv * (2 + sv))
        dxds = -rv * (2 + rv) * (2 + 2 * sv) / (sv * (2 + sv)) ** 2
        dydr = -8 * sv / ((2 + sv) * (2 + rv) ** 3)
        dyds = 8 / ((2 + sv) ** 2 * (2 + rv) ** 2)
        det = dxdr * dyds - dxds * dydr
        dr = (fx * dyds - fy * dxds) / det
        ds = (dxdr * fy - dydr * fx) / det
        rv, sv = rv - dr, sv - ds
        if abs(dr) < mpmath.mpf(2) ** (8 - work) * (1 + abs(rv)) and \
           abs(ds) < mpmath.mpf(2) ** (8 - work) * (1 + abs(sv)):
            return rv, sv
    raise ConvergenceError("Newton iteration for (r, s) did not converge")


@dataclass(frozen=True)
class QuadIdentityReport:
    """Residuals of the quadrangulation substitution identities at one point."""

    residual_yhat: PrecisionReal
    residual_ystar: PrecisionReal
    fd_residuals: tuple  # |analytic - centered difference| for halving steps
    fd_ratios: tuple     # successive residual ratios; ~4 means second order


def quad_identities(r, s, prec: int = DEFAULT_PRECISION,
                    fd_steps: int = 3) -> QuadIdentityReport:
    """Verify the substitution identities at (r, s).

    (a) y (1 + Q_0)^2 equals the closed form of yhat;
    (b) (Q_0 - x yhat - yhat) / (x yhat) equals the closed form of y*,
        where Q_0 is reused because its value is preserved by the
        substitution (x, y) -> (x, yhat);
    (c) the analytic dy/dx at fixed yhat matches a centered finite
        difference of y along x, re-solving (r, s) at each perturbed point.
    """
    work = prec + 32
    with mp.workprec(work):
        rv, sv = as_mpf(r, work), as_mpf(s, work)
        _pos("r", rv)
        _pos("s", sv)
        x, y = (as_mpf(v, work) for v in xy_from_rs(rv, sv, work))
        q0 = as_mpf(Q0(rv, sv, work), work)
        yh = as_mpf(yhat(rv, sv, work), work)
        ys = as_mpf(ystar(rv, sv, work), work)

        res_a = abs(y * (1 + q0) ** 2 - yh)
        res_b = abs((q0 - x * yh - yh) / (x * yh) - ys)

        analytic = as_mpf(dydx_at_fixed_yhat(rv, sv, work), work)
        residuals = []
        h = x / 64
        for _ in range(fd_steps):
            rp, sp = _solve_rs_from_x_yhat(x + h, yh, rv, sv, work)
            rm, sm = _solve_rs_from_x_yhat(x - h, yh, rv, sv, work)
            yp = sp * (2 + sp) / (4 * (1 + rp + sp) ** 2)
            ym = sm * (2 + sm) / (4 * (1 + rm + sm) ** 2)
            residuals.append(abs((yp - ym) / (2 * h) - analytic))
            h /= 2
        ratios = tuple(
            PrecisionReal(residuals[i] / residuals[i + 1], prec)
            for i in range(len(residuals) - 1))
        return QuadIdentityReport(
            residual_yhat=PrecisionReal(res_a, prec),
            residual_ystar=PrecisionReal(res_b, prec),
            fd_residuals=tuple(PrecisionReal(v, prec) for v in residuals),
            fd_ratios=ratios,
        )


QUAD_VARIANTS = ("all", "no2cycle", "nearsimple")


def quad_amplitude(variant: str, g: int, r,
                   prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Singular-expansion amplitude of the genus-g quadrangulation series.

    "all" counts every rooted bipartite quadrangulation, "no2cycle" those with
    no contractible 2-cycles, "nearsimple" the near-simple ones.
    """
    if g < 1:
        raise DomainError("g must be >= 1")
    if variant not in QUAD_VARIANTS:
        raise DomainError(f"variant must be one of {QUAD_VARIANTS}")
    ag = A_g(g, r, prec=prec + 16)
    work = prec + 16
    with mp.workprec(work):
        rv = as_mpf(r, work)
        _pos("r", rv)
        agv = as_mpf(ag, work)
        gam = mpmath.gamma(mpmath.mpf(5 * g - 3) / 2)
        if variant == "all":
            val = mpmath.sqrt(mpmath.pi / (3 * (1 + rv))) \
                * (1 + rv + rv**2) * agv * gam / rv**2
        elif variant == "no2cycle":
            val = mpmath.sqrt(mpmath.pi / (3 * (1 + rv))) * agv * gam / rv \
                * (2 + rv) ** (mpmath.mpf(5 * g - 3) / 2)
        else:
            val = mpmath.sqrt(3 * mpmath.pi / (1 + rv)) * agv * gam \
                / ((2 + rv) * (1 + 2 * rv)) * (2 + rv) ** (5 * g - 3)
        return PrecisionReal(val, prec)
