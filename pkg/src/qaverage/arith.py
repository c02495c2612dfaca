"""Numeric scalars and exact arithmetic in cyclotomic fields.

Real and complex numbers are mpmath ``mpf``/``mpc`` values; every routine
that produces one takes an explicit working precision in bits.  Exact
values live in :class:`fractions.Fraction` (rationals) or
:class:`CycloElem` (elements of Q(zeta_N)).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import mp
from mpmath.libmp import to_rational

from .errors import DomainError

DEFAULT_PREC = 384
GUARD_BITS = 32

RationalLike = Union[int, Fraction]


def to_mpf(x: RationalLike) -> mpmath.mpf:
    """Round an exact rational to the current working precision."""
    x = Fraction(x)
    return mp.mpf(x.numerator) / x.denominator


def mpf_to_fraction(x) -> Fraction:
    """The exact dyadic rational carried by an ``mpf``."""
    x = mp.mpf(x)
    if not mp.isfinite(x):
        raise ValueError(f"cannot convert {x} to a rational")
    p, q = to_rational(x._mpf_)
    return Fraction(int(p), int(q))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# Integer / rational polynomial helpers (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    num = [Fraction(c) for c in num]
    den = _trim([Fraction(c) for c in den])
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / lead
        quo[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return _trim(quo), _trim(num[: len(den) - 1])


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, from X^n - 1 = prod_{d | n} Phi_d."""
    if n < 1:
        raise ValueError("cyclotomic polynomial needs n >= 1")
    p = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            p, rem = _poly_divmod(p, cyclotomic_poly(d))
            assert not rem
    return tuple(int(c) for c in p)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


# ---------------------------------------------------------------------------
# Cyclotomic field elements
# ---------------------------------------------------------------------------


class CycloElem:
    """An element sum_i c_i zeta_N^i of Q(zeta_N), zeta_N = exp(2 pi i / N).

    Stored modulo X^N - 1 as an integer vector over a common positive
    denominator, so multiplication is a cyclic convolution.  Equality and
    hashing go through the canonical representative modulo Phi_N.
    """

    __slots__ = ("N", "num", "den", "_reduced")

    def __init__(self, N: int, coeffs: Iterable[RationalLike] = ()):
        if N < 1:
            raise ValueError(f"conductor must be positive, got {N}")
        vec = [Fraction(0)] * N
        for i, c in enumerate(coeffs):
            vec[i % N] += Fraction(c)
        den = 1
        for c in vec:
            den = lcm(den, c.denominator)
        self._set(N, tuple(int(c * den) for c in vec), den)

    def _set(self, N: int, num: tuple, den: int) -> None:
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_reduced", None)

    @classmethod
    def _raw(cls, N: int, num: tuple, den: int) -> "CycloElem":
        obj = cls.__new__(cls)
        obj._set(N, num, den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, N: int) -> "CycloElem":
        return cls._raw(N, (0,) * N, 1)

    @classmethod
    def from_rational(cls, N: int, r: RationalLike) -> "CycloElem":
        r = Fraction(r)
        return cls._raw(N, (r.numerator,) + (0,) * (N - 1), r.denominator)

    @classmethod
    def zeta(cls, N: int, power: int = 1) -> "CycloElem":
        num = [0] * N
        num[power % N] = 1
        return cls._raw(N, tuple(num), 1)

    # -- views ---------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def __repr__(self) -> str:
        return f"CycloElem({self.N}, {self.to_poly_str()!r})"

    def to_poly_str(self, var: str = "z") -> str:
        """Canonical (reduced) form as a polynomial in ``var``, highest power first."""
        red = self.reduce()
        parts = []
        for i in range(len(red.num) - 1, -1, -1):
            c = Fraction(red.num[i], red.den)
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- reduction -----------------------------------------------------------

    def reduce(self) -> "CycloElem":
        """Canonical representative modulo Phi_N (degree < phi(N))."""
        if self._reduced is not None:
            return self._reduced
        phi = cyclotomic_poly(self.N)
        deg = len(phi) - 1
        num = list(self.num)
        # Phi_N is monic with integer coefficients, so integer arithmetic suffices.
        for i in range(len(num) - 1, deg - 1, -1):
            c = num[i]
            if c:
                shift = i - deg
                for j, p in enumerate(phi):
                    num[shift + j] -= c * p
        red = CycloElem._raw(self.N, tuple(num[:deg]) + (0,) * (self.N - deg), self.den)
        object.__setattr__(red, "_reduced", red)
        object.__setattr__(self, "_reduced", red)
        return red

    def is_zero(self) -> bool:
        return not any(self.reduce().num)

    def is_rational(self) -> bool:
        return not any(self.reduce().num[1:])

    def rational_value(self) -> Fraction:
        red = self.reduce()
        if any(red.num[1:]):
            raise ValueError(f"{self!r} is not rational")
        return Fraction(red.num[0], red.den)

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.N != self.N:
                raise ValueError(f"conductor mismatch: {self.N} vs {other.N}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.from_rational(self.N, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        den = lcm(self.den, other.den)
        fa, fb = den // self.den, den // other.den
        return CycloElem._raw(
            self.N, tuple(a * fa + b * fb for a, b in zip(self.num, other.num)), den
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloElem._raw(self.N, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            r = Fraction(other)
            return CycloElem._raw(
                self.N, tuple(a * r.numerator for a in self.num), self.den * r.denominator
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = self.N
        out = [0] * N
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        out[(i + j) % N] += a * b
        return CycloElem._raw(N, tuple(out), self.den * other.den)

    __rmul__ = __mul__

    def times_zeta(self, power: int) -> "CycloElem":
        """Multiply by zeta_N**power (a cyclic shift of the stored vector)."""
        s = power % self.N
        if s == 0:
            return self
        num = self.num[-s:] + self.num[:-s]
        return CycloElem._raw(self.N, num, self.den)

    def conjugate(self) -> "CycloElem":
        """Complex conjugation, zeta -> zeta^{-1}."""
        num = (self.num[0],) + tuple(reversed(self.num[1:]))
        return CycloElem._raw(self.N, num, self.den)

    def inverse(self) -> "CycloElem":
        red = self.reduce()
        a = _trim([Fraction(c, red.den) for c in red.num])
        if not a:
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        # Extended Euclid: s*a + t*Phi = 1.
        r0, r1 = [Fraction(c) for c in cyclotomic_poly(self.N)], a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            quo, rem = _poly_divmod(r0, r1)
            s_new = _poly_sub(s0, _poly_mul(quo, s1))
            r0, r1, s0, s1 = r1, rem, s1, s_new
            if not r1:
                raise ZeroDivisionError("element shares a factor with Phi_N")
        c = r1[0]
        return CycloElem(self.N, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloElem.from_rational(self.N, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.N, other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        if other.N != self.N:
            return False
        a, b = self.reduce(), other.reduce()
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        red = self.reduce()
        return hash((self.N, red.num, red.den))

    # -- numerics ------------------------------------------------------------

    def embed(self, prec: int) -> mpmath.mpc:
        return cyclo_embed(self, prec)


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def cyclo_reduce(x: CycloElem) -> CycloElem:
    return x.reduce()


def cyclo_embed(x: CycloElem, prec: int) -> mpmath.mpc:
    """Evaluate x at zeta_N = exp(2 pi i / N) with ``prec`` bits."""
    if prec < 8:
        raise ValueError("precision must be at least 8 bits")
    with mp.workprec(prec + 16):
        total = mp.mpc(0)
        for i, c in enumerate(x.num):
            if c:
                total += c * mp.expjpi(mp.mpf(2 * i) / x.N)
        total /= x.den
    with mp.workprec(prec):
        return +total


# ---------------------------------------------------------------------------
# Real-analytic primitives
# ---------------------------------------------------------------------------


def agm_steps(a, b, prec: int) -> tuple[mpmath.mpf, int]:
    """Arithmetic-geometric mean of positive reals and the iteration count."""
    with mp.workprec(prec + 16):
        a, b = mp.mpf(a), mp.mpf(b)
        if a <= 0 or b <= 0:
            raise DomainError("agm needs positive arguments")
        eps = mp.ldexp(1, -(prec + 8))
        steps = 0
        while abs(a - b) > eps * a:
            a, b = (a + b) / 2, mp.sqrt(a * b)
            steps += 1
        value = (a + b) / 2
    with mp.workprec(prec):
        return +value, steps


def agm(a, b, prec: int) -> mpmath.mpf:
    return agm_steps(a, b, prec)[0]


def q_frac_pow(tau, x: RationalLike, prec: int) -> mpmath.mpc:
    """exp(2 pi i tau x): the branch is fixed by tau, q is never root-extracted."""
    x = Fraction(x)
    with mp.workprec(prec + 16):
        tau = mp.mpc(tau)
        if tau.imag <= 0:
            raise DomainError("tau must lie in the upper half plane")
        val = mp.exp(2j * mp.pi * tau * x.numerator / x.denominator)
    with mp.workprec(prec):
        return +val


def decimal_digits(prec: int) -> int:
    """Decimal digits carried by ``prec`` bits (floor)."""
    return int(prec * 0.30102999566398120)
