"""Arbitrary-precision substrate: precision-tagged reals, exact rationals,
log-space magnitudes, log-gamma, and safeguarded bracketed root finding.

Everything downstream (singular-curve functions, asymptotic estimates,
constant chains) computes on these types.  All values are immutable and all
operations are pure functions, so the module is safe to use from any number
of threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
from mpmath import mp

DEFAULT_PRECISION = 256

Number = Union[int, float, str, Fraction, "PrecisionReal", mpmath.mpf]


class GenusMapsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GenusMapsError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class BracketError(GenusMapsError, ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConvergenceError(GenusMapsError, RuntimeError):
    """An iteration failed to converge within its budget."""


class ResourceLimitError(GenusMapsError, RuntimeError):
    """A requested computation exceeds the configured resource guard."""


def as_mpf(x: Number, prec: int) -> mpmath.mpf:
    """Convert ``x`` to an mpf rounded to ``prec`` bits."""
    with mp.workprec(prec):
        if isinstance(x, PrecisionReal):
            return +x.value
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
        return mpmath.mpf(x)


class PrecisionReal:
    """A real number carrying an explicit binary precision.

    Arithmetic between two values is performed at the minimum of the two
    precisions; each operation is correctly rounded at that precision, so the
    relative error per operation is at most 2^(1-p).  Instances are
    immutable.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value: Number, precision: int = DEFAULT_PRECISION):
        precision = int(precision)
        if precision <= 0:
            raise ValueError("precision must be a positive number of bits")
        if isinstance(value, PrecisionReal):
            precision = min(precision, value.precision)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "value", as_mpf(value, precision))

    def __setattr__(self, name, val):  # pragma: no cover - immutability guard
        raise AttributeError("PrecisionReal is immutable")

    # -- coercion helpers -------------------------------------------------

    def _coerce(self, other) -> Optional[tuple[mpmath.mpf, int]]:
        if isinstance(other, PrecisionReal):
            prec = min(self.precision, other.precision)
            return as_mpf(other, prec), prec
        if isinstance(other, (int, float, Fraction, mpmath.mpf)):
            return as_mpf(other, self.precision), self.precision
        return None

    def _binary(self, other, op, swap=False):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        ov, prec = pair
        a, b = (ov, self.value) if swap else (self.value, ov)
        with mp.workprec(prec):
            return PrecisionReal(op(a, b), prec)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, swap=True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: a / b, swap=True)

    def __pow__(self, other):
        return self._binary(other, lambda a, b: a ** b)

    def __rpow__(self, other):
        return self._binary(other, lambda a, b: a ** b, swap=True)

    def __neg__(self):
        return PrecisionReal(-self.value, self.precision)

    def __abs__(self):
        return PrecisionReal(abs(self.value), self.precision)

    # -- elementary functions ---------------------------------------------

    def sqrt(self) -> "PrecisionReal":
        if self.value < 0:
            raise DomainError("sqrt of a negative value")
        with mp.workprec(self.precision):
            return PrecisionReal(mpmath.sqrt(self.value), self.precision)

    def exp(self) -> "PrecisionReal":
        with mp.workprec(self.precision):
            return PrecisionReal(mpmath.exp(self.value), self.precision)

    def log(self) -> "PrecisionReal":
        if self.value <= 0:
            raise DomainError("log of a non-positive value")
        with mp.workprec(self.precision):
            return PrecisionReal(mpmath.log(self.value), self.precision)

    # -- comparisons (on value) ---------------------------------------------

    def __eq__(self, other):
        pair = self._coerce(other)
        return NotImplemented if pair is None else self.value == pair[0]

    def __lt__(self, other):
        pair = self._coerce(other)
        return NotImplemented if pair is None else self.value < pair[0]

    def __le__(self, other):
        pair = self._coerce(other)
        return NotImplemented if pair is None else self.value <= pair[0]

    def __gt__(self, other):
        pair = self._coerce(other)
        return NotImplemented if pair is None else self.value > pair[0]

    def __ge__(self, other):
        pair = self._coerce(other)
        return NotImplemented if pair is None else self.value >= pair[0]

    def __hash__(self):
        return hash(self.value)

    # -- rendering ----------------------------------------------------------

    def __float__(self):
        return float(self.value)

    def to_decimal(self, digits: Optional[int] = None) -> str:
        if digits is None:
            digits = max(6, int(self.precision * 0.3010) - 2)
        with mp.workprec(self.precision):
            return mp.nstr(self.value, digits)

    def __repr__(self):
        return f"PrecisionReal({self.to_decimal(20)}, precision={self.precision})"


@dataclass(frozen=True)
class LogMagnitude:
    """Sign plus natural log of absolute value.

    Represents quantities like rho(r)^(-n) * eta_k(r)^(-m) whose magnitude is
    far outside fixed-width float range.  ``log_abs`` is meaningless when
    ``sign == 0`` and is stored as zero in that case.
    """

    sign: int
    log_abs: PrecisionReal

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")

    @classmethod
    def from_real(cls, x: PrecisionReal) -> "LogMagnitude":
        if x.value == 0:
            return cls(0, PrecisionReal(0, x.precision))
        sign = 1 if x.value > 0 else -1
        return cls(sign, abs(x).log())

    @classmethod
    def from_log(cls, log_abs: PrecisionReal, sign: int = 1) -> "LogMagnitude":
        return cls(sign, log_abs)

    def __mul__(self, other):
        if isinstance(other, LogMagnitude):
            if self.sign == 0 or other.sign == 0:
                prec = min(self.log_abs.precision, other.log_abs.precision)
                return LogMagnitude(0, PrecisionReal(0, prec))
            return LogMagnitude(self.sign * other.sign, self.log_abs + other.log_abs)
        if isinstance(other, (int, float, Fraction, PrecisionReal)):
            return self * LogMagnitude.from_real(
                PrecisionReal(other, self.log_abs.precision))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LogMagnitude):
            if other.sign == 0:
                raise ZeroDivisionError("division by a zero LogMagnitude")
            if self.sign == 0:
                return self
            return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)
        if isinstance(other, (int, float, Fraction, PrecisionReal)):
            return self / LogMagnitude.from_real(
                PrecisionReal(other, self.log_abs.precision))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if self.sign == 0:
            if k <= 0:
                raise ZeroDivisionError("0 ** nonpositive power")
            return self
        sign = self.sign if k % 2 else 1
        return LogMagnitude(sign, self.log_abs * k)

    def log10(self) -> PrecisionReal:
        if self.sign == 0:
            raise DomainError("log10 of a zero magnitude")
        prec = self.log_abs.precision
        with mp.workprec(prec):
            return PrecisionReal(self.log_abs.value / mpmath.log(10), prec)

    def to_real(self) -> PrecisionReal:
        if self.sign == 0:
            return PrecisionReal(0, self.log_abs.precision)
        return self.sign * self.log_abs.exp()

    def scientific(self, digits: int = 10) -> str:
        """Render as ``[-]d.dddddddddE+xxx`` in base 10."""
        if self.sign == 0:
            return "0"
        prec = self.log_abs.precision
        with mp.workprec(prec):
            l10 = self.log_abs.value / mpmath.log(10)
            e = mpmath.floor(l10)
            mant = mpmath.power(10, l10 - e)
            head = "-" if self.sign < 0 else ""
            return f"{head}{mp.nstr(mant, digits)}e{int(e):+d}"

    def compare_abs(self, other: "LogMagnitude") -> int:
        """-1/0/+1 comparison of absolute magnitudes."""
        if self.sign == 0 or other.sign == 0:
            return (self.sign != 0) - (other.sign != 0)
        a, b = self.log_abs, other.log_abs
        return (a > b) - (a < b)


def log_gamma(x: Number, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Natural log of the Gamma function for positive real ``x``."""
    xv = as_mpf(x, prec)
    if xv <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {xv}")
    with mp.workprec(prec + 8):
        return PrecisionReal(mpmath.loggamma(xv), prec)


def gamma_half_integer(two_x: int, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Gamma(two_x / 2) for any non-pole half-integer argument.

    Needed because the map-constant formulas evaluate Gamma at -1/2 when the
    genus is zero, which the positive-axis log_gamma cannot reach.
    """
    if two_x % 2 == 0 and two_x <= 0:
        raise DomainError(f"Gamma has a pole at {two_x // 2}")
    with mp.workprec(prec + 8):
        return PrecisionReal(mpmath.gamma(mpmath.mpf(two_x) / 2), prec)


def find_root(
    f: Callable,
    lo: Number,
    hi: Number,
    tol: Number,
    prec: int = DEFAULT_PRECISION,
    df: Optional[Callable] = None,
    max_iter: Optional[int] = None,
) -> PrecisionReal:
    """Find the root of ``f`` inside the bracket [lo, hi].

    ``f`` is called with an mpf argument and must return a real value of any
    numeric type.  The bracket must exhibit a sign change.  The search uses
    Illinois-damped false position (Newton proposals when ``df`` is given)
    with a bisection safeguard, and stops once the bracket width is at most
    ``tol``.  The returned value is the midpoint of the final bracket, so the
    result is deterministic for fixed inputs and precision.
    """
    work = prec + 32
    with mp.workprec(work):
        a = as_mpf(lo, work)
        b = as_mpf(hi, work)
        tolv = as_mpf(tol, work)
        if not (a < b):
            raise BracketError(f"empty bracket [{a}, {b}]")
        if tolv <= 0:
            raise DomainError("tol must be positive")

        def feval(x):
            return as_mpf(f(x), work)

        fa, fb = feval(a), feval(b)
        if fa == 0:
            return PrecisionReal(a, prec)
        if fb == 0:
            return PrecisionReal(b, prec)
        if (fa > 0) == (fb > 0):
            raise BracketError(
                f"no sign change on bracket [{mp.nstr(a, 8)}, {mp.nstr(b, 8)}]")

        budget = max_iter if max_iter is not None else 4 * prec + 256
        side = 0  # Illinois: which endpoint was retained last
        for _ in range(budget):
            width = b - a
            if width <= tolv:
                return PrecisionReal((a + b) / 2, prec)
            x = None
            if df is not None:
                # Newton step from the endpoint with the smaller residual.
                x0, f0 = (a, fa) if abs(fa) < abs(fb) else (b, fb)
                d0 = as_mpf(df(x0), work)
                if d0 != 0:
                    x = x0 - f0 / d0
            if x is None and fb != fa:
                x = (a * fb - b * fa) / (fb - fa)
            margin = width / 64
            if x is None or not (a + margin < x < b - margin):
                x = (a + b) / 2
            fx = feval(x)
            if fx == 0:
                return PrecisionReal(x, prec)
            if (fx > 0) == (fa > 0):
                a, fa = x, fx
                if side == -1:
                    fb /= 2  # Illinois damping against endpoint stagnation
                side = -1
            else:
                b, fb = x, fx
                if side == 1:
                    fa /= 2
                side = 1
        raise ConvergenceError(
            f"bracket failed to shrink below tol within {budget} iterations")
