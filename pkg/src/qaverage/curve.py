"""Long Weierstrass models over Q with exact rational group law."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import SingularCurveError, NotOnCurveError


@dataclass(frozen=True)
class CurveInvariants:
    b2: Fraction
    b4: Fraction
    b6: Fraction
    b8: Fraction
    c4: Fraction
    c6: Fraction
    discriminant: Fraction


@dataclass(frozen=True)
class CurveModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if invariants(self).discriminant == 0:
            raise SingularCurveError(f"discriminant vanishes for {self}")

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self.ainvs) + "]"

    def contains(self, P: "CurvePoint") -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x**3 + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def completed_square_cubic(self) -> tuple[Fraction, Fraction, Fraction]:
        """(B, C, D) with (y + (a1 x + a3)/2)^2 = x^3 + B x^2 + C x + D."""
        inv = invariants(self)
        return inv.b2 / 4, inv.b4 / 2, inv.b6 / 4


@dataclass(frozen=True)
class CurvePoint:
    """An affine point (x, y), or the point at infinity when both are None."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = CurvePoint()


def invariants(E: CurveModel) -> CurveInvariants:
    a1, a2, a3, a4, a6 = E.a1, E.a2, E.a3, E.a4, E.a6
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return CurveInvariants(b2, b4, b6, b8, c4, c6, disc)


def _check(E: CurveModel, *points: CurvePoint) -> None:
    for P in points:
        if not E.contains(P):
            raise NotOnCurveError(f"{P} is not on {E}")


def neg(E: CurveModel, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y - E.a1 * P.x - E.a3)


def add(E: CurveModel, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    _check(E, P, Q)
    return _add(E, P, Q)


def _add(E: CurveModel, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4 = E.a1, E.a2, E.a3, E.a4
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            # Q = -P; also covers doubling a 2-torsion point.
            return INFINITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(x3, y3)


def scalar_mul(E: CurveModel, n: int, P: CurvePoint) -> CurvePoint:
    _check(E, P)
    if n < 0:
        n, P = -n, neg(E, P)
    result, base = INFINITY, P
    while n:
        if n & 1:
            result = _add(E, result, base)
        base = _add(E, base, base)
        n >>= 1
    return result


def point_order(E: CurveModel, P: CurvePoint, bound: int) -> Optional[int]:
    """Smallest n >= 1 with nP = O, or None if there is none up to ``bound``."""
    _check(E, P)
    Q = P
    for n in range(1, bound + 1):
        if Q.is_infinity:
            return n
        Q = _add(E, Q, P)
    return None


def on_identity_component(E: CurveModel, P: CurvePoint) -> bool:
    """Whether the real point P lies on the identity component of E(R).

    Exact: with three real roots e3 < e2 < e1 of the completed-square cubic
    f, the non-identity component sits over [e3, e2], which lies left of the
    larger critical point of f while [e1, oo) lies right of it.
    """
    _check(E, P)
    if P.is_infinity or invariants(E).discriminant < 0:
        return True
    B, C, _ = E.completed_square_cubic()
    # larger critical point c2 = (-B + sqrt(B^2 - 3C)) / 3; test x > c2
    s = 3 * P.x + B
    return s > 0 and s * s > B * B - 3 * C
