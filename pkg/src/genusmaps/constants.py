"""Map-asymptotics constants.

The orientable constants t_g come from an exact rational recursion for a
helper sequence a_g followed by a single Gamma evaluation.  The nonorientable
analogues p_g come from a companion recursion (sequence v_g) whose status is
conjectural; everything derived from it is tagged accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mp

from genusmaps.numeric import (
    DEFAULT_PRECISION,
    DomainError,
    PrecisionReal,
    gamma_half_integer,
)

PROVENANCE_TAGS = frozenset(
    {"exact-recursion", "closed-form", "root-solve", "conjectured", "paper-numeric",
     "census"})


def compute_a(g_max: int) -> List[Fraction]:
    """Exact helper sequence a_0..a_{g_max}.

    a_0 = 1 and for g >= 1:

        a_g = (5g-4)(5g-6)/48 * a_{g-1} - 1/2 * sum_{h=1}^{g-1} a_h a_{g-h}
    """
    if g_max < 0:
        raise DomainError("g_max must be >= 0")
    a = [Fraction(1)]
    for g in range(1, g_max + 1):
        head = Fraction((5 * g - 4) * (5 * g - 6), 48) * a[g - 1]
        tail = sum((a[h] * a[g - h] for h in range(1, g)), Fraction(0))
        a.append(head - Fraction(1, 2) * tail)
    return a


def verify_a(a: List[Fraction]) -> bool:
    """Independent re-check of the a_g recursion (used by tests and checks)."""
    if not a or a[0] != 1:
        return False
    for g in range(1, len(a)):
        expect = Fraction((5 * g - 4) * (5 * g - 6), 48) * a[g - 1] \
            - Fraction(1, 2) * sum(a[h] * a[g - h] for h in range(1, g))
        if a[g] != expect:
            return False
    return True


def compute_t_exact(g: int) -> Optional[Fraction]:
    """t_g as an exact rational when the Gamma factor is rational.

    Gamma((5g-1)/2) is rational exactly when (5g-1)/2 is a positive integer,
    i.e. for odd g.  Returns None otherwise.
    """
    if g < 0:
        raise DomainError("g must be >= 0")
    if (5 * g - 1) % 2 != 0:
        return None
    n = (5 * g - 1) // 2  # Gamma(n) = (n-1)!
    if n <= 0:
        return None
    fact = Fraction(1)
    for i in range(2, n):
        fact *= i
    a_g = compute_a(g)[g]
    return -a_g / (Fraction(2) ** (g - 2) * fact)


def compute_t(g: int, prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """t_g = -a_g / (2^(g-2) Gamma((5g-1)/2)).

    At g = 0 the Gamma argument is -1/2 and Gamma(-1/2) = -2 sqrt(pi), which
    gives the planar value t_0 = 2/sqrt(pi).
    """
    if g < 0:
        raise DomainError("g must be >= 0")
    a_g = compute_a(g)[g]
    gam = gamma_half_integer(5 * g - 1, prec)
    with mp.workprec(prec + 8):
        num = PrecisionReal(-a_g, prec + 8)
        denom = PrecisionReal(Fraction(2) ** (g - 2), prec + 8) * gam
        return PrecisionReal((num / denom).value, prec)


def compute_v(g_max: int, v0: Fraction | int | float,
              prec: int = DEFAULT_PRECISION) -> List[PrecisionReal]:
    """Companion sequence v_1..v_{g_max} for the nonorientable constants.

    v_g = 1/(2 sqrt(3)) * ( -3 a_{g/2} + (5g-6)/2 * v_{g-1}
                            + sum_{k=1}^{g-1} v_k v_{g-k} )

    with a_{g/2} = 0 when g is odd.  The base value v_0 is not determined by
    the recursion and must be supplied by the caller; there is no default.
    Returned list is indexed so result[g-1] == v_g.
    """
    if g_max < 1:
        raise DomainError("g_max must be >= 1")
    if v0 is None:
        raise DomainError("v0 is a required input: the recursion for v_1 "
                          "references v_0, which is not fixed by the recursion")
    a = compute_a(g_max // 2 + 1)
    work = prec + 16
    with mp.workprec(work):
        inv2s3 = 1 / (2 * mpmath.sqrt(3))
        v = [PrecisionReal(v0, work)]  # v[0] = v_0
        for g in range(1, g_max + 1):
            a_half = a[g // 2] if g % 2 == 0 else Fraction(0)
            acc = PrecisionReal(-3 * a_half, work)
            acc = acc + PrecisionReal(Fraction(5 * g - 6, 2), work) * v[g - 1]
            for k in range(1, g):
                acc = acc + v[k] * v[g - k]
            v.append(PrecisionReal(inv2s3, work) * acc)
    return [PrecisionReal(x, prec) for x in v[1:]]


def compute_p(g: int, v0: Fraction | int | float,
              prec: int = DEFAULT_PRECISION) -> PrecisionReal:
    """Conjectured nonorientable constant p_g = v_{2g-1} / (2^(g-2) Gamma((5g-3)/2)).

    Always tagged "conjectured" when placed in a ConstantsTable.
    """
    if g < 1:
        raise DomainError("g must be >= 1")
    v = compute_v(2 * g - 1, v0, prec + 16)
    gam = gamma_half_integer(5 * g - 3, prec + 16)
    num = v[2 * g - 2]
    with mp.workprec(prec + 16):
        denom = PrecisionReal(Fraction(2) ** (g - 2), prec + 16) * gam
        return PrecisionReal((num / denom).value, prec)


@dataclass
class ConstantsTable:
    """Named high-precision constants with provenance metadata."""

    entries: Dict[str, Tuple[PrecisionReal, str]] = field(default_factory=dict)

    def add(self, name: str, value: PrecisionReal, provenance: str) -> None:
        if provenance not in PROVENANCE_TAGS:
            raise ValueError(f"unknown provenance tag {provenance!r}")
        self.entries[name] = (value, provenance)

    def value(self, name: str) -> PrecisionReal:
        return self.entries[name][0]

    def provenance(self, name: str) -> str:
        return self.entries[name][1]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self) -> List[str]:
        return sorted(self.entries)

    def as_records(self, digits: int = 25) -> List[dict]:
        return [
            {"name": n, "value": v.to_decimal(digits), "provenance": tag,
             "precision_bits": v.precision}
            for n, (v, tag) in sorted(self.entries.items())
        ]


def tg_table(g_max: int, prec: int = DEFAULT_PRECISION) -> ConstantsTable:
    """t_0..t_{g_max} as a provenance-tagged table."""
    table = ConstantsTable()
    for g in range(g_max + 1):
        table.add(f"t_{g}", compute_t(g, prec), "exact-recursion")
    return table
