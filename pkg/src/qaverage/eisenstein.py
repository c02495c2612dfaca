"""Weight-one Hecke-Eisenstein q-expansions over Q(zeta_N) and their evaluation.

All coefficients are stored divided by 2 pi i, so that they are exact
elements of Q(zeta_N).  Exponents live on a grid n/d: d = 1 for g_k, d = 2
for h_k, d = N for the Hecke series G_{a,b} and the expansions at the cusp 0.

Besides the exact coefficients this module evaluates the expansions
numerically, the closed-form sums F(q, w), and the Weierstrass p-function
together with its derivative through their q-expansions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable

import mpmath
from mpmath import mp

from .arith import CycloElem, q_frac_pow
from .errors import InsufficientTruncation, InvalidIndex, PoleError

# ---------------------------------------------------------------------------
# Divisors and the Hurwitz zeta function at s = 0
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def positive_divisors(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("divisors of a positive integer only")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def signed_divisors(n: int) -> tuple[int, ...]:
    """All m with m | n, both signs: the pairing m <-> -m is part of the sums."""
    pos = positive_divisors(n)
    return tuple(-d for d in reversed(pos)) + pos


def hurwitz_zeta_zero(alpha) -> Fraction:
    """zeta(0, alpha) = 1/2 - alpha for 0 < alpha <= 1."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return Fraction(1, 2) - alpha


# ---------------------------------------------------------------------------
# Exact coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeckeIndex:
    N: int
    a: int
    b: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidIndex(f"level must be positive, got {self.N}")
        object.__setattr__(self, "a", self.a % self.N)
        object.__setattr__(self, "b", self.b % self.N)
        if self.a == 0 and self.b == 0:
            raise InvalidIndex("(a, b) = (0, 0) mod N has no Hecke series")


def _inverse_zeta_minus_one(N: int, b: int) -> CycloElem:
    """1/(zeta^b - 1) for zeta^b != 1: equals (1/d) sum_{j<d} j zeta^{bj}, d = ord(zeta^b)."""
    d = N // gcd(b, N)
    num = [0] * N
    for j in range(1, d):
        num[(b * j) % N] += j
    return CycloElem._raw(N, tuple(num), d)


def half_cot_ratio(N: int, b: int) -> CycloElem:
    """(zeta^b + 1) / (zeta^b - 1), which embeds to -i cot(pi b / N)."""
    return (CycloElem.zeta(N, b) + 1) * _inverse_zeta_minus_one(N, b)


@lru_cache(maxsize=None)
def alpha_coeff(idx: HeckeIndex, n: int) -> CycloElem:
    """Coefficient of q^{n/N} in G_{a,b}, divided by 2 pi i."""
    N, a, b = idx.N, idx.a, idx.b
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        out = CycloElem.zero(N)
        if a == 0:
            # s -> 1 limit of zeta(s, b/N) - zeta(s, -b/N) is pi cot(pi b/N); 0 for b = 0
            out = out + half_cot_ratio(N, b) * Fraction(1, 2 * N)
        else:
            diff = hurwitz_zeta_zero(Fraction(a, N)) - hurwitz_zeta_zero(Fraction(N - a, N))
            out = out - diff * Fraction(1, 2 * N)
        return out
    num = [0] * N
    for m in signed_divisors(n):
        if (n // m - a) % N == 0:
            num[(b * m) % N] += 1 if m > 0 else -1
    return CycloElem._raw(N, tuple(-c for c in num), N)


def gk_coeff(N: int, k: int, n: int) -> CycloElem:
    """Coefficient of q^n in g_k."""
    if not 0 < k % N:
        raise InvalidIndex(f"k must be nonzero mod N, got k={k}, N={N}")
    if n == 0:
        return half_cot_ratio(N, k) * Fraction(1, 2)
    num = [0] * N
    for m in positive_divisors(n):
        num[(k * m) % N] -= 1
        num[(-k * m) % N] += 1
    return CycloElem._raw(N, tuple(num), 1)


def hk_coeff(N: int, k: int, n: int) -> CycloElem:
    """Coefficient of q^{n/2} in h_k (N even); the constant term is 0."""
    if N % 2:
        raise InvalidIndex(f"h_k needs even N, got {N}")
    if n == 0:
        return CycloElem.zero(N)
    num = [0] * N
    for m in positive_divisors(n):
        if m % 2:
            e = k * (n // m)
            num[e % N] -= 1
            num[(-e) % N] += 1
    return CycloElem._raw(N, tuple(num), 1)


class Twist(str, Enum):
    PLAIN = "plain"
    HALF = "half"


def gprime_cusp0_coeff(N: int, ell: int, twist: Twist | str, n: int) -> CycloElem:
    """Coefficient of q^{n/N} in the expansion at the cusp 0 (rational-valued).

    ``plain`` is the point ell*tau/N, ``half`` the point 1/2 + ell*tau/N
    (meaningful for even N only).
    """
    twist = Twist(twist)
    if not (0 < ell < N and gcd(ell, N) == 1):
        raise InvalidIndex(f"need 0 < ell < N with gcd(ell, N) = 1, got ell={ell}, N={N}")
    if n == 0:
        return CycloElem.from_rational(N, Fraction(ell, N) - Fraction(1, 2))
    total = 0
    for m in signed_divisors(n):
        if (m - ell) % N == 0:
            s = 1 if m > 0 else -1
            if twist is Twist.HALF and (n // m) % 2:
                s = -s
            total += s
    return CycloElem.from_rational(N, -total)


# -- the same coefficients rebuilt from the Hecke series ---------------------


@lru_cache(maxsize=None)
def _row_sums(N: int, n: int, sign_b: bool) -> tuple[CycloElem, ...]:
    """For each a: sum over b of (-1)^b (if sign_b) alpha_n(a, b)."""
    out = []
    for a in range(N):
        acc = CycloElem.zero(N)
        for b in range(N):
            if a == 0 and b == 0:
                continue
            term = alpha_coeff(HeckeIndex(N, a, b), n)
            acc = acc - term if sign_b and b % 2 else acc + term
        out.append(acc)
    return tuple(out)


@lru_cache(maxsize=None)
def _column_sums(N: int, n: int, sign_a: bool) -> tuple[CycloElem, ...]:
    """For each b: sum over a of (-1)^a (if sign_a) alpha_n(a, b)."""
    out = []
    for b in range(N):
        acc = CycloElem.zero(N)
        for a in range(N):
            if a == 0 and b == 0:
                continue
            term = alpha_coeff(HeckeIndex(N, a, b), n)
            acc = acc - term if sign_a and a % 2 else acc + term
        out.append(acc)
    return tuple(out)


def hecke_combination(N: int, k: int, n: int, *, sign_b: bool = False) -> CycloElem:
    """sum_{a,b mod N} zeta^{ka} [(-1)^b] alpha_n(a, b), normalized by 1/(2 pi i).

    Without the sign this is the coefficient of q^{n/N} of g_k; with it
    (N even), that of h_k.
    """
    if sign_b and N % 2:
        raise InvalidIndex("(-1)^b is only defined mod N for even N")
    rows = _row_sums(N, n, sign_b)
    acc = CycloElem.zero(N)
    for a, s in enumerate(rows):
        acc = acc + s.times_zeta(k * a)
    return acc


def hecke_cusp0_combination(N: int, ell: int, n: int, *, sign_a: bool = False) -> CycloElem:
    """sum_{a,b mod N} [(-1)^a] zeta^{-ell b} alpha_n(a, b), normalized by 1/(2 pi i)."""
    if sign_a and N % 2:
        raise InvalidIndex("(-1)^a is only defined mod N for even N")
    cols = _column_sums(N, n, sign_a)
    acc = CycloElem.zero(N)
    for b, s in enumerate(cols):
        acc = acc + s.times_zeta(-ell * b)
    return acc


# ---------------------------------------------------------------------------
# Truncated expansions
# ---------------------------------------------------------------------------

# |c_n| <= COEFF_GROWTH * n for every expansion built here (n >= 1): each is a
# sum of at most 2 * sigma_0(n) <= 2n roots of unity, possibly scaled by 1/N.
COEFF_GROWTH = 2


@dataclass(frozen=True)
class QExpansion:
    """sum_n coeffs[n] q^{n/denom}, truncated after n_max."""

    N: int
    denom: int
    coeffs: tuple[CycloElem, ...]
    label: str = ""
    growth: int = field(default=COEFF_GROWTH, compare=False)

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def dump_lines(self) -> list[str]:
        return [f"{n}/{self.denom}\t{c.to_poly_str()}" for n, c in enumerate(self.coeffs)]


def _build(N: int, denom: int, n_max: int, coeff: Callable[[int], CycloElem], label: str):
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return QExpansion(N, denom, tuple(coeff(n) for n in range(n_max + 1)), label)


def gk_expansion(N: int, k: int, n_max: int) -> QExpansion:
    return _build(N, 1, n_max, lambda n: gk_coeff(N, k, n), f"g_{k} (N={N})")


def hk_expansion(N: int, k: int, n_max: int) -> QExpansion:
    return _build(N, 2, n_max, lambda n: hk_coeff(N, k, n), f"h_{k} (N={N})")


def alpha_expansion(idx: HeckeIndex, n_max: int) -> QExpansion:
    return _build(
        idx.N, idx.N, n_max, lambda n: alpha_coeff(idx, n), f"G_{{{idx.a},{idx.b}}} (N={idx.N})"
    )


def cusp0_expansion(N: int, ell: int, twist: Twist | str, n_max: int) -> QExpansion:
    twist = Twist(twist)
    return _build(
        N, N, n_max, lambda n: gprime_cusp0_coeff(N, ell, twist, n),
        f"G' at cusp 0, ell={ell}, {twist.value} (N={N})",
    )


def _grid_ratio(tau, denom: int, prec: int):
    """|q|^{1/denom} for q = exp(2 pi i tau)."""
    with mp.workprec(prec):
        return mp.exp(-2 * mp.pi * mp.mpc(tau).imag / denom)


def linear_tail_bound(r, n_max: int, growth: int = COEFF_GROWTH):
    """Bound on sum_{n > n_max} growth * n * r^n."""
    m = n_max + 1
    return growth * m * r**m / (1 - r) ** 2


def terms_needed(tau, denom: int, prec: int, growth: int = COEFF_GROWTH) -> int:
    """Smallest n_max whose tail bound is below 2^-(prec + 16)."""
    with mp.workprec(prec + 16):
        r = _grid_ratio(tau, denom, prec + 16)
        target = mp.ldexp(1, -(prec + 16))
        # r^m (m) growth/(1-r)^2 < target; start from the log estimate and walk up
        n = max(int(mp.log(target * (1 - r) ** 2 / growth) / mp.log(r)) - 1, 1)
        while linear_tail_bound(r, n, growth) >= target:
            n += max(n // 16, 1)
        while n > 1 and linear_tail_bound(r, n - 1, growth) < target:
            n -= 1
        return n


def series_tail_bound(exp: QExpansion, tau, prec: int):
    with mp.workprec(prec + 16):
        return linear_tail_bound(_grid_ratio(tau, exp.denom, prec + 16), exp.n_max, exp.growth)


@lru_cache(maxsize=64)
def _root_table(N: int, prec: int) -> tuple:
    with mp.workprec(prec):
        return tuple(mp.expjpi(mp.mpf(2 * j) / N) for j in range(N))


def embed_with(table: tuple, c: CycloElem):
    total = mp.mpc(0)
    for z, v in zip(table, c.num):
        if v:
            total += v * z
    return total / c.den


def eval_series(exp: QExpansion, tau, prec: int, *, check_truncation: bool = True):
    """sum coeffs[n] q^{n/d} at tau; raises InsufficientTruncation if the tail is too big."""
    if check_truncation:
        tail = series_tail_bound(exp, tau, prec)
        if tail >= mp.ldexp(1, -(prec + 16)):
            raise InsufficientTruncation(
                f"{exp.label}: n_max={exp.n_max} leaves tail {mpmath.nstr(tail, 5)} at "
                f"{prec} bits; need n_max >= {terms_needed(tau, exp.denom, prec)}"
            )
    wp = prec + 24
    table = _root_table(exp.N, wp)
    with mp.workprec(wp):
        x = q_frac_pow(tau, Fraction(1, exp.denom), wp)
        total = mp.mpc(0)
        xn = mp.mpc(1)
        for c in exp.coeffs:
            if any(c.num):
                total += embed_with(table, c) * xn
            xn *= x
    with mp.workprec(prec):
        return +total


def evaluate_gk(N: int, k: int, tau, prec: int):
    return eval_series(gk_expansion(N, k, terms_needed(tau, 1, prec)), tau, prec)


def evaluate_hk(N: int, k: int, tau, prec: int):
    return eval_series(hk_expansion(N, k, terms_needed(tau, 2, prec)), tau, prec)


# ---------------------------------------------------------------------------
# Closed-form sums F(q, w)
# ---------------------------------------------------------------------------


def _geometric_terms(ratio, prec: int) -> int:
    """Terms j after which ratio^j / (1 - ratio)^2 drops below 2^-(prec + 16)."""
    if ratio >= 1:
        raise PoleError("series does not converge: |q| * max(|w|, 1/|w|) >= 1")
    target = mp.ldexp(1, -(prec + 16))
    return max(int(mp.ceil(mp.log(target * (1 - ratio) ** 2) / mp.log(ratio))), 1)


def lang_F(q_val, w, prec: int):
    """F(q, w) = -1/2 - w/(1-w) - sum_{j>=1} q^j w/(1 - q^j w) + sum_{j>=1} q^j w^-1/(1 - q^j w^-1)."""
    wp = prec + 24
    with mp.workprec(wp):
        q_val, w = mp.mpc(q_val), mp.mpc(w)
        aq = abs(q_val)
        if aq >= 1:
            raise PoleError("|q| must be < 1")
        if w == 0:
            raise PoleError("w = 0 is not in C^x")
        ratio = aq * max(abs(w), 1 / abs(w))
        terms = _geometric_terms(ratio, wp)
        pole_eps = mp.ldexp(1, -(prec - 8))

        def frac(v):
            den = 1 - v
            if abs(den) < pole_eps:
                raise PoleError(f"w is (numerically) in q^Z: |1 - q^j w^(+-1)| = {mpmath.nstr(abs(den), 5)}")
            return v / den

        total = -mp.mpf(1) / 2 - frac(w)
        winv = 1 / w
        qj = mp.mpc(1)
        for _ in range(terms):
            qj *= q_val
            total += frac(qj * winv) - frac(qj * w)
    with mp.workprec(prec):
        return +total


def lang_gk(N: int, k: int, tau, prec: int):
    """F(q, zeta^k), the closed form of g_k."""
    with mp.workprec(prec + 16):
        q = q_frac_pow(tau, 1, prec + 16)
        w = mp.expjpi(mp.mpf(2 * k) / N)
        return lang_F(q, w, prec)


def lang_hk(N: int, k: int, tau, prec: int):
    """1/2 + F(q, q^{1/2} zeta^k), the closed form of h_k."""
    with mp.workprec(prec + 16):
        q = q_frac_pow(tau, 1, prec + 16)
        w = q_frac_pow(tau, Fraction(1, 2), prec + 16) * mp.expjpi(mp.mpf(2 * k) / N)
        val = mp.mpf(1) / 2 + lang_F(q, w, prec + 8)
    with mp.workprec(prec):
        return +val


def lang_cusp0(N: int, ell: int, twist: Twist | str, tau, prec: int):
    """ell/N + F(q, +-q^{ell/N}), the closed form of the expansion at the cusp 0."""
    twist = Twist(twist)
    with mp.workprec(prec + 16):
        q = q_frac_pow(tau, 1, prec + 16)
        w = q_frac_pow(tau, Fraction(ell, N), prec + 16)
        if twist is Twist.HALF:
            w = -w
        val = mp.mpf(ell) / N + lang_F(q, w, prec + 8)
    with mp.workprec(prec):
        return +val


# ---------------------------------------------------------------------------
# Weierstrass p through its q-expansion
# ---------------------------------------------------------------------------


def wp_pair(tau, r: int, s: int, N: int, prec: int):
    """(p, p') of the lattice Z tau + Z at the point (r tau + s)/N.

    p / (2 pi i)^2 = 1/12 + w/(1-w)^2 + sum_n (w^n + w^-n - 2) n q^n/(1 - q^n),
    w = zeta^s q^{r/N}; p' is the term-wise derivative in the argument, which
    multiplies each w^n by 2 pi i n.
    """
    if not 0 <= r < N:
        raise InvalidIndex(f"need 0 <= r < N, got r={r}")
    if r == 0 and s % N == 0:
        raise PoleError("the point is a lattice point")
    wp = prec + 32
    with mp.workprec(wp):
        tau = mp.mpc(tau)
        q = q_frac_pow(tau, 1, wp)
        w = mp.expjpi(mp.mpf(2 * s) / N) * q_frac_pow(tau, Fraction(r, N), wp)
        aq = abs(q)
        # |q^n w^n|, |q^n w^-n| <= rho^n with rho = |q|^{1 - r/N}
        rho = aq / abs(w) if abs(w) < 1 else aq * abs(w)
        if rho >= 1:
            raise PoleError("series does not converge at this point")
        # tail of the p' bracket is at most 8 (M+1)^2 rho^(M+1) / ((1-|q|)(1-rho)^3);
        # (2 pi)^3 < 2^8 covers the prefactor
        target = mp.ldexp(1, -(prec + 24))
        terms = 1
        while 8 * (terms + 1) ** 2 * rho ** (terms + 1) / ((1 - aq) * (1 - rho) ** 3) >= target:
            terms += max(terms // 8, 1)
        one_minus_w = 1 - w
        if abs(one_minus_w) < mp.ldexp(1, -(prec - 8)):
            raise PoleError("the point collides with the lattice")
        p = mp.mpf(1) / 12 + w / one_minus_w**2
        dp = w * (1 + w) / one_minus_w**3
        winv = 1 / w
        qn, wn, wmn = mp.mpc(1), mp.mpc(1), mp.mpc(1)
        for n in range(1, terms + 1):
            qn *= q
            wn *= w
            wmn *= winv
            c = n * qn / (1 - qn)
            p += c * (wn + wmn - 2)
            dp += n * c * (wn - wmn)
        two_pi_i = 2j * mp.pi
        p *= two_pi_i**2
        dp *= two_pi_i**3
    with mp.workprec(prec):
        return +p, +dp


def wp_qexp(tau, r: int, s: int, N: int, prec: int):
    return wp_pair(tau, r, s, N, prec)[0]


def wp_prime_qexp(tau, r: int, s: int, N: int, prec: int):
    return wp_pair(tau, r, s, N, prec)[1]
