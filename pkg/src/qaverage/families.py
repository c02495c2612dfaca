"""One-parameter families (E_t, P_t) with P_t = (0, 0) of exact order N.

For N >= 4 the curves are in Tate normal form

    E(b, c):  y^2 + (1 - c) xy - b y = x^3 - b x^2,

with (b, c) given by Kubert's rational functions of his parameter.  For
N = 3 the family is y^2 + a1 xy + a1 y = x^3 (a1 = a3).  Every instance is
gated by the exact order check before it is handed out.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count as _count
from math import gcd
from typing import Callable, Iterator

from .curve import CurveModel, CurvePoint, point_order, scalar_mul
from .errors import InadmissibleParameter, SingularCurveError

SUPPORTED_N = (3, 4, 5, 6, 7, 8, 9, 10, 12)


@dataclass(frozen=True)
class FamilySpec:
    N: int
    param_name: str
    domain_exclusions: str
    tate_bc: Callable[[Fraction], tuple[Fraction, Fraction]] | None = None


def _bc4(b):
    return b, Fraction(0)


def _bc5(c):
    return c, c


def _bc6(c):
    return c + c * c, c


def _bc7(d):
    return d**3 - d**2, d**2 - d


def _bc8(d):
    b = (2 * d - 1) * (d - 1)
    return b, b / d


def _bc9(f):
    d = f * (f - 1) + 1
    c = f * (d - 1)
    return c * d, c


def _bc10(f):
    d = f * f / (f - (f - 1) ** 2)
    c = f * d - f
    return c * d, c


def _bc12(t):
    m = (3 * t - 3 * t * t - 1) / (t - 1)
    f = m / (1 - t)
    d = m + t
    c = f * (d - 1)
    return c * d, c


FAMILIES: dict[int, FamilySpec] = {
    3: FamilySpec(3, "a1", "a1 = 0"),
    4: FamilySpec(4, "b", "b in {0, -1/16}", _bc4),
    5: FamilySpec(5, "c", "c = 0", _bc5),
    6: FamilySpec(6, "c", "c in {0, -1, -1/9}", _bc6),
    7: FamilySpec(7, "d", "d in {0, 1}", _bc7),
    8: FamilySpec(8, "d", "d in {0, 1/2, 1}", _bc8),
    9: FamilySpec(9, "f", "f in {0, 1}", _bc9),
    10: FamilySpec(10, "f", "f in {0, 1/2, 1}", _bc10),
    12: FamilySpec(12, "tau", "tau in {0, 1/2, 1}", _bc12),
}

ORIGIN = CurvePoint(Fraction(0), Fraction(0))


def tate_normal_form(b, c) -> CurveModel:
    b, c = Fraction(b), Fraction(c)
    return CurveModel(a1=1 - c, a2=-b, a3=-b, a4=0, a6=0)


def family_curve(N: int, t) -> tuple[CurveModel, CurvePoint]:
    """The curve E(t) and its marked point (0, 0) of exact order N."""
    if N not in FAMILIES:
        raise ValueError(f"no family for N={N}; supported: {SUPPORTED_N}")
    t = Fraction(t)
    fam = FAMILIES[N]
    try:
        if N == 3:
            E = CurveModel(a1=t, a3=t)
        else:
            E = tate_normal_form(*fam.tate_bc(t))
    except ZeroDivisionError:
        raise InadmissibleParameter(N, t, "parameter is a pole of the parametrization") from None
    except SingularCurveError:
        raise InadmissibleParameter(N, t, "Delta = 0") from None
    order = point_order(E, ORIGIN, N)
    if order != N:
        raise InadmissibleParameter(N, t, f"(0,0) has order {order}, expected {N}")
    return E, ORIGIN


def family_point(N: int, t, k: int = 1) -> tuple[CurveModel, CurvePoint]:
    """(E(t), k * P(t))."""
    E, P = family_curve(N, t)
    return E, scalar_mul(E, k, P)


def rationals_by_height() -> Iterator[Fraction]:
    """Nonzero rationals in order of height max(|p|, q), positive first."""
    for h in _count(1):
        batch = {Fraction(h, q) for q in range(1, h) if gcd(h, q) == 1}
        batch |= {Fraction(p, h) for p in range(1, h + 1) if gcd(p, h) == 1}
        for r in sorted(batch, key=lambda r: (r.denominator, r.numerator)):
            yield r
            yield -r


def admissible_samples(N: int, count: int, *, scan_limit: int = 10_000) -> list[Fraction]:
    """The first ``count`` admissible parameters in height order (no duplicates)."""
    out: list[Fraction] = []
    if count <= 0:
        return out
    for i, t in enumerate(rationals_by_height()):
        if i >= scan_limit:
            raise RuntimeError(f"only {len(out)} admissible parameters for N={N} in scan")
        try:
            family_curve(N, t)
        except InadmissibleParameter:
            continue
        out.append(t)
        if len(out) == count:
            return out
    return out
