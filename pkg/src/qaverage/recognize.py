"""Recognition of high-precision reals as rationals of bounded height.

Candidates are the continued-fraction convergents of the input.  When
tol < 1/(4 H^2), any p/q with q <= H and |x - p/q| <= tol is a convergent
(Legendre) and is unique, since two such rationals are >= 1/H^2 apart.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

import mpmath
from mpmath import mp

from .arith import mpf_to_fraction
from .errors import AmbiguousRecognition, DomainError

Number = Union[mpmath.mpf, Fraction, int, str]


@dataclass(frozen=True)
class Recognition:
    value: Fraction
    residual: Fraction
    height: int


def height(r: Fraction) -> int:
    return max(abs(r.numerator), r.denominator)


def _exact(x: Number) -> Fraction:
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, mpmath.mpf):
        return mpf_to_fraction(x)
    raise TypeError(f"cannot recognize {type(x).__name__}")


def convergents(x: Fraction, max_quotient: Optional[int] = None) -> Iterator[Fraction]:
    """Continued-fraction convergents of x; stops early at a quotient above ``max_quotient``."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    first = True
    while True:
        a = x.numerator // x.denominator
        if not first and max_quotient is not None and a > max_quotient:
            return
        first = False
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def recognize_rational(
    x: Number, max_height: int, tol: Number, *, prec: Optional[int] = None
) -> Optional[Recognition]:
    """The rational p/q with q <= max_height and |x - p/q| <= tol, or None.

    ``prec`` (bits carried by x) caps the partial quotients at 2^(prec/2);
    it defaults to the current mpmath precision.
    """
    tol_q = _exact(tol)
    if tol_q <= 0:
        raise DomainError("tol must be positive")
    if max_height < 1:
        raise DomainError("max_height must be >= 1")
    if tol_q >= Fraction(1, 4 * max_height * max_height):
        raise DomainError(
            f"tol = {float(tol_q):.3g} does not give uniqueness at height {max_height}; "
            f"need tol < {1 / (4 * max_height**2):.3g}"
        )
    xq = _exact(x)
    bits = prec if prec is not None else mp.prec
    found: list[Fraction] = []
    for c in convergents(xq, max_quotient=2 ** (bits // 2)):
        if c.denominator > max_height:
            break
        if abs(xq - c) <= tol_q and height(c) <= max_height:
            found.append(c)
    if not found:
        return None
    if len(set(found)) > 1:
        raise AmbiguousRecognition(f"several rationals within tol: {sorted(set(found))}")
    value = found[0]
    return Recognition(value, abs(xq - value), height(value))
