from fractions import Fraction
from math import gcd

import pytest
from mpmath import mp

from qaverage.arith import CycloElem, cyclo_embed
from qaverage.eisenstein import (
    HeckeIndex,
    QExpansion,
    Twist,
    alpha_coeff,
    alpha_expansion,
    cusp0_expansion,
    eval_series,
    evaluate_gk,
    evaluate_hk,
    gk_coeff,
    gk_expansion,
    gprime_cusp0_coeff,
    hecke_combination,
    hecke_cusp0_combination,
    hk_coeff,
    hk_expansion,
    hurwitz_zeta_zero,
    lang_cusp0,
    lang_F,
    lang_gk,
    lang_hk,
    signed_divisors,
    terms_needed,
    wp_pair,
)
from qaverage.errors import InsufficientTruncation, InvalidIndex, PoleError

P = 256
F = Fraction
LEVELS = (3, 4, 5, 6, 7, 8, 9, 10, 12)


def zeta(N, k=1):
    return CycloElem.zeta(N, k)


def rat(N, r):
    return CycloElem.from_rational(N, r)


def close(a, b, bits=P - 48):
    return abs(a - b) < mp.ldexp(1, -bits) * max(1, abs(b))


class TestHurwitz:
    @pytest.mark.parametrize("alpha, value", [(F(1, 2), 0), (1, F(-1, 2)), (F(1, 4), F(1, 4))])
    def test_values(self, alpha, value):
        assert hurwitz_zeta_zero(alpha) == value

    def test_against_mpmath(self):
        for alpha in (F(1, 3), F(5, 7)):
            assert abs(mp.zeta(0, mp.mpf(alpha.numerator) / alpha.denominator) - float(hurwitz_zeta_zero(alpha))) < 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            hurwitz_zeta_zero(0)


class TestAlpha:
    def test_signed_divisors(self):
        assert signed_divisors(6) == (-6, -3, -2, -1, 1, 2, 3, 6)

    def test_n1(self):
        assert alpha_coeff(HeckeIndex(5, 1, 0), 1) == rat(5, F(-1, 5))

    def test_constant_a0(self):
        assert alpha_coeff(HeckeIndex(4, 0, 1), 0) == zeta(4) * F(-1, 8)

    def test_constant_b0(self):
        assert alpha_coeff(HeckeIndex(4, 1, 0), 0) == rat(4, F(-1, 16))

    def test_invalid_index(self):
        with pytest.raises(InvalidIndex):
            HeckeIndex(5, 5, 10)

    @pytest.mark.parametrize("N, b", [(4, 1), (5, 2), (7, 3), (12, 5)])
    def test_constant_against_hurwitz_limit(self, N, b):
        # (1/(2 pi i N)) * lim_{s -> 1} [zeta(s, b/N) - zeta(s, 1 - b/N)]
        # the 1/(s-1) poles cancel, costing ~30 of the 90 working digits
        with mp.workdps(90):
            s = 1 + mp.mpf(10) ** -30
            lim = mp.zeta(s, mp.mpf(b) / N) - mp.zeta(s, 1 - mp.mpf(b) / N)
            oracle = lim / (2j * mp.pi * N)
            got = cyclo_embed(alpha_coeff(HeckeIndex(N, 0, b), 0), 128)
            assert abs(got - oracle) < mp.mpf(10) ** -28

    @pytest.mark.parametrize("N", [4, 6, 9])
    def test_constant_vanishes_for_b0_pairs(self, N):
        # for b = 0 the s -> 1 limit contributes nothing: zeta(s, a/N) - zeta(s, 1 - a/N) stays finite
        with mp.workdps(30):
            for a in range(1, N):
                s = 1 + mp.mpf(10) ** -6
                diff = mp.zeta(s, mp.mpf(a) / N) - mp.zeta(s, 1 - mp.mpf(a) / N)
                assert abs(diff - (mp.digamma(1 - mp.mpf(a) / N) - mp.digamma(mp.mpf(a) / N))) < 1e-4


class TestGk:
    def test_constant(self):
        assert gk_coeff(4, 1, 0) == zeta(4) * F(-1, 2)
        with mp.workprec(P):
            assert close(cyclo_embed(gk_coeff(4, 1, 0), P), mp.cot(mp.pi / 4) / 2j)

    def test_n1(self):
        assert gk_coeff(4, 1, 1) == -(zeta(4) - zeta(4, 3))
        assert close(cyclo_embed(gk_coeff(4, 1, 1), P), mp.mpc(0, -2))

    def test_level_two(self):
        assert all(gk_coeff(2, 1, n).is_zero() for n in range(1, 20))

    @pytest.mark.parametrize("N", LEVELS)
    def test_antisymmetry(self, N):
        for k in range(1, N):
            for n in range(0, 50 * N + 1):
                assert gk_coeff(N, N - k, n) == -gk_coeff(N, k, n)

    @pytest.mark.parametrize("N, k", [(5, 2), (7, 3), (12, 5)])
    def test_sine_bridge(self, N, k):
        with mp.workprec(P):
            for n in range(1, 40):
                d = [m for m in range(1, n + 1) if n % m == 0]
                oracle = -2j * sum(mp.sin(2 * mp.pi * k * m / N) for m in d)
                assert close(cyclo_embed(gk_coeff(N, k, n), P), oracle)

    def test_constant_cot(self):
        with mp.workprec(P):
            for N in LEVELS:
                for k in range(1, N):
                    assert close(cyclo_embed(gk_coeff(N, k, 0), P), mp.cot(mp.pi * k / N) / 2j)


class TestHk:
    def test_examples(self):
        assert hk_coeff(4, 1, 1) == -(zeta(4) - zeta(4, 3))
        assert hk_coeff(4, 1, 2).is_zero()
        assert all(hk_coeff(N, k, 0).is_zero() for N in (4, 6, 12) for k in range(N))

    def test_odd_level(self):
        with pytest.raises(InvalidIndex):
            hk_coeff(5, 1, 1)


class TestCusp0:
    def test_constant(self):
        assert gprime_cusp0_coeff(5, 1, "plain", 0) == rat(5, F(-3, 10))

    def test_plain(self):
        assert gprime_cusp0_coeff(5, 1, "plain", 1) == rat(5, -1)
        assert gprime_cusp0_coeff(5, 1, "plain", 4).is_zero()

    def test_half_twist_sign(self):
        # n = 2, N = 4, ell = 1: m = 1 qualifies with n/m = 2 even, m = -... none else
        assert gprime_cusp0_coeff(4, 1, "half", 2) == gprime_cusp0_coeff(4, 1, "plain", 2)
        # n = 1: m = 1, n/m = 1 odd flips the sign
        assert gprime_cusp0_coeff(4, 1, "half", 1) == -gprime_cusp0_coeff(4, 1, "plain", 1)

    def test_rational(self):
        assert all(gprime_cusp0_coeff(7, 3, t, n).is_rational() for t in Twist for n in range(30))

    def test_bad_ell(self):
        with pytest.raises(InvalidIndex):
            gprime_cusp0_coeff(6, 2, "plain", 1)


class TestHeckeIdentities:
    """Exact identities in Q(zeta_N) at small n (the acceptance suite runs n <= 50 N)."""

    @pytest.mark.parametrize("N", LEVELS)
    def test_gk(self, N):
        for k in range(1, N):
            for n in range(0, 3 * N + 1):
                want = gk_coeff(N, k, n // N) if n % N == 0 else CycloElem.zero(N)
                assert hecke_combination(N, k, n) == want

    @pytest.mark.parametrize("N", [4, 6, 8, 10, 12])
    def test_hk(self, N):
        for k in range(1, N):
            for n in range(0, 3 * N + 1):
                want = hk_coeff(N, k, 2 * n // N) if (2 * n) % N == 0 else CycloElem.zero(N)
                assert hecke_combination(N, k, n, sign_b=True) == want

    @pytest.mark.parametrize("N", LEVELS)
    def test_cusp0(self, N):
        for ell in (e for e in range(1, N) if gcd(e, N) == 1):
            for n in range(0, 3 * N + 1):
                assert hecke_cusp0_combination(N, ell, n) == gprime_cusp0_coeff(N, ell, "plain", n)
                if N % 2 == 0:
                    assert hecke_cusp0_combination(N, ell, n, sign_a=True) == gprime_cusp0_coeff(
                        N, ell, "half", n
                    )

    def test_sign_needs_even_level(self):
        with pytest.raises(InvalidIndex):
            hecke_combination(5, 1, 3, sign_b=True)


class TestEvaluation:
    tau = mp.mpc(0, "0.9")

    def test_zero(self):
        exp = QExpansion(5, 1, tuple(CycloElem.zero(5) for _ in range(terms_needed(self.tau, 1, P) + 1)))
        assert eval_series(exp, self.tau, P) == 0

    def test_constant_only(self):
        c = zeta(7, 2) * 3 + F(1, 2)
        # a constant expansion has no tail, so the check is skipped
        exp = QExpansion(7, 1, (c,))
        assert close(eval_series(exp, self.tau, P, check_truncation=False), cyclo_embed(c, P))

    def test_insufficient_truncation(self):
        with pytest.raises(InsufficientTruncation):
            eval_series(gk_expansion(5, 1, 10), self.tau, P)

    def test_dump_format(self):
        lines = alpha_expansion(HeckeIndex(4, 0, 1), 2).dump_lines()
        assert lines[0] == "0/4\t-1/8*z"
        assert [ln.split("\t")[0] for ln in lines] == ["0/4", "1/4", "2/4"]
        assert hk_expansion(4, 1, 3).dump_lines()[1].startswith("1/2\t")
        assert cusp0_expansion(5, 1, "plain", 0).dump_lines() == ["0/5\t-3/10"]


class TestLang:
    @pytest.mark.parametrize("N, k, tau", [(5, 1, mp.mpc(0, "0.7")), (7, 2, mp.mpc("0.5", "0.4")), (12, 5, mp.mpc("0.1", "1.2"))])
    def test_gk(self, N, k, tau):
        with mp.workprec(P):
            assert close(lang_gk(N, k, tau, P), evaluate_gk(N, k, tau, P))

    @pytest.mark.parametrize("N, k, tau", [(4, 1, mp.mpc(0, "0.7")), (6, 0, mp.mpc(0, "1.1")), (10, 3, mp.mpc("0.2", "0.5"))])
    def test_hk(self, N, k, tau):
        with mp.workprec(P):
            assert close(lang_hk(N, k, tau, P), evaluate_hk(N, k, tau, P))

    @pytest.mark.parametrize("N, ell, twist", [(5, 2, "plain"), (8, 3, "half"), (12, 7, "plain"), (12, 1, "half")])
    def test_cusp0(self, N, ell, twist):
        tau = mp.mpc(0, "0.8")
        with mp.workprec(P):
            series = eval_series(cusp0_expansion(N, ell, twist, terms_needed(tau, N, P)), tau, P)
            assert close(lang_cusp0(N, ell, twist, tau, P), series)

    def test_real_inputs(self):
        with mp.workprec(P):
            v = lang_F(mp.mpf("0.3"), mp.mpf("0.7"), P)
            assert abs(v.imag) < mp.ldexp(1, -P)

    def test_pole(self):
        with pytest.raises(PoleError):
            lang_F(mp.mpf("0.5"), mp.mpf(1), P)


class TestWp:
    tau = mp.mpc("0.5", "0.8")

    def test_even(self):
        with mp.workprec(P):
            for r, s, N in [(1, 2, 5), (2, 3, 7), (0, 1, 4)]:
                p1, d1 = wp_pair(self.tau, r, s, N, P)
                p2, d2 = wp_pair(self.tau, (N - r) % N, (N - s) % N, N, P) if r else wp_pair(self.tau, 0, N - s, N, P)
                assert close(p1, p2)
                assert close(d1, -d2)

    def test_two_torsion(self):
        with mp.workprec(P):
            for r, s in [(0, 1), (1, 0), (1, 1)]:
                _, dp = wp_pair(self.tau, r, s, 2, P)
                assert abs(dp) < mp.ldexp(1, -(P - 40))

    def test_lattice_point(self):
        with pytest.raises(PoleError):
            wp_pair(self.tau, 0, 5, 5, P)
