"""Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below."""
import random
import time
from fractions import Fraction
from math import gcd

import pytest
from mpmath import mp

from qaverage.arith import CycloElem, cyclo_embed, q_frac_pow
from qaverage.curve import scalar_mul
from qaverage.eisenstein import (
    evaluate_gk,
    evaluate_hk,
    gk_coeff,
    gprime_cusp0_coeff,
    hecke_combination,
    hecke_cusp0_combination,
    hk_coeff,
    lang_gk,
    lang_hk,
)
from qaverage.families import SUPPORTED_N, admissible_samples, family_curve
from qaverage.periods import (
    Case,
    cubic_roots,
    period_lattice,
    real_period_agm,
    real_period_quad,
    torsion_parameters,
)
from qaverage.recognize import recognize_rational
from qaverage.verify import TABLE, compute_R, run_all, select_samples
from qaverage.zerolog import d0, d0_q_average

P = 384
TABLE_RESIDUAL = mp.mpf(10) ** -80
TABLE_SECONDS = 600
SPOT_PREC = 448
SPOT_RESIDUAL = mp.mpf(10) ** -95
SPOT_SECONDS = 30
IDENTITY_RANGE = 50  # n <= 50 N
BRIDGE_TOL = mp.ldexp(1, -320)
BRIDGE_MIN_CONFIGS, BRIDGE_MIN_CASE_B = 20, 3
LANG_TOL = mp.ldexp(1, -320)
PERIOD_BITS = P - 32
MATCH_BITS = P - 48
SEPARATION_BITS = P // 2
ROUND_TRIPS = 1000


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        assert ok, detail

    return _report


def test_criterion_1_table_reproduction(report):
    start = time.perf_counter()
    summary = run_all(P, 3)
    elapsed = time.perf_counter() - start
    rows = summary.rows_passed()
    per_row = {}
    for r in summary.reports:
        per_row[(r.N, r.k)] = per_row.get((r.N, r.k), 0) + 1
    bad = [
        r for r in summary.reports
        if not (r.match and r.recognized == r.expected and r.residual < TABLE_RESIDUAL)
    ]
    ok = (
        len(rows) == 17 and all(rows.values()) and not bad
        and min(per_row.values()) >= 3 and elapsed < TABLE_SECONDS
    )
    worst = max(r.residual for r in summary.reports)
    report(1, ok, f"{sum(rows.values())}/17 rows, {len(summary.reports)} instances, "
                  f"max residual {mp.nstr(worst, 3)}, {elapsed:.1f}s")


def test_criterion_2_spot_check_11a3(report):
    period_lattice.cache_clear()
    cubic_roots.cache_clear()
    start = time.perf_counter()
    E, O = family_curve(5, 1)
    results = {k: compute_R(5, k, E, O, SPOT_PREC).value for k in (1, 2)}
    elapsed = time.perf_counter() - start
    with mp.workprec(SPOT_PREC):
        res = {k: abs(results[k] - mp.mpf(-k) / 5) for k in (1, 2)}
        recs = {k: recognize_rational(results[k], 10**12, mp.ldexp(1, -SPOT_PREC // 2), prec=SPOT_PREC) for k in (1, 2)}
    ok = (
        all(res[k] < SPOT_RESIDUAL for k in (1, 2))
        and recs[1].value == Fraction(-1, 5) and recs[2].value == Fraction(-2, 5)
        and elapsed < SPOT_SECONDS
    )
    report(2, ok, f"R(P)={recs[1].value}, R(2P)={recs[2].value}, residuals "
                  f"{mp.nstr(res[1], 3)} / {mp.nstr(res[2], 3)}, {elapsed:.2f}s")


def test_criterion_3_exact_identities(report):
    start = time.perf_counter()
    failures, checked = [], 0
    for N in SUPPORTED_N:
        units = [e for e in range(1, N) if gcd(e, N) == 1]
        for n in range(0, IDENTITY_RANGE * N + 1):
            for k in range(1, N):
                want = gk_coeff(N, k, n // N) if n % N == 0 else CycloElem.zero(N)
                checked += 1
                if hecke_combination(N, k, n) != want:
                    failures.append(("g", N, k, n))
                if N % 2 == 0:
                    want = hk_coeff(N, k, 2 * n // N) if (2 * n) % N == 0 else CycloElem.zero(N)
                    checked += 1
                    if hecke_combination(N, k, n, sign_b=True) != want:
                        failures.append(("h", N, k, n))
            for ell in units:
                checked += 1
                if hecke_cusp0_combination(N, ell, n) != gprime_cusp0_coeff(N, ell, "plain", n):
                    failures.append(("cusp0-plain", N, ell, n))
                if N % 2 == 0:
                    checked += 1
                    if hecke_cusp0_combination(N, ell, n, sign_a=True) != gprime_cusp0_coeff(N, ell, "half", n):
                        failures.append(("cusp0-half", N, ell, n))
    elapsed = time.perf_counter() - start
    report(3, not failures, f"{checked} exact identities, {len(failures)} failures, {elapsed:.1f}s")


def _family_configs():
    """(N, k0, case, tau, q) for k P on family samples, plus case-B additions."""
    out = []
    seen = set()
    for row in TABLE:
        sel = select_samples(row.N, row.k, 2)
        params = list(sel.params)
        if sel.case_b_param is not None and sel.case_b_param not in params:
            params.append(sel.case_b_param)
        for t in params:
            E, Pt = family_curve(row.N, t)
            pd = period_lattice(E, P)
            tp = torsion_parameters(E, scalar_mul(E, row.k, Pt), pd, P, N=row.N)
            key = (row.N, tp.k, tp.case, t)
            if key not in seen:
                seen.add(key)
                out.append((row.N, tp.k, tp.case, pd.tau, pd.q))
    return out


def test_criterion_4_series_average_bridge(report):
    configs = _family_configs()
    worst = mp.mpf(0)
    case_b = 0
    with mp.workprec(P):
        for N, k, case, tau, q in configs:
            z = mp.expjpi(mp.mpf(2 * k) / N)
            if case is Case.B:
                case_b += 1
                z *= q_frac_pow(tau, Fraction(1, 2), P)
                series = evaluate_hk(N, k, tau, P)
            else:
                series = evaluate_gk(N, k, tau, P)
            direct = d0_q_average(z, q, P).value / 1j
            worst = max(worst, abs(direct - series))
    ok = len(configs) >= BRIDGE_MIN_CONFIGS and case_b >= BRIDGE_MIN_CASE_B and worst < BRIDGE_TOL
    report(4, ok, f"{len(configs)} configurations ({case_b} case B), max gap {mp.nstr(worst, 3)} "
                  f"< 2^-320")


def test_criterion_5_lang_route(report):
    configs = [(N, k, case, tau) for N, k, case, tau, _ in _family_configs()]
    # synthetic points off the real-q lines as well
    configs += [(7, 3, Case.A, mp.mpc("0.21", "0.6")), (12, 5, Case.B, mp.mpc("0.37", "0.8")),
                (8, 1, Case.B, mp.mpc(0, "0.45")), (10, 0, Case.B, mp.mpc("-0.1", "0.7"))]
    worst = mp.mpf(0)
    counts = {Case.A: 0, Case.B: 0}
    with mp.workprec(P):
        for N, k, case, tau in configs:
            counts[case] += 1
            if case is Case.A:
                gap = abs(lang_gk(N, k, tau, P) - evaluate_gk(N, k, tau, P))
            else:
                gap = abs(lang_hk(N, k, tau, P) - evaluate_hk(N, k, tau, P))
            worst = max(worst, gap)
    ok = worst < LANG_TOL and counts[Case.A] > 0 and counts[Case.B] > 0
    report(5, ok, f"{counts[Case.A]} g_k and {counts[Case.B]} h_k configurations, "
                  f"max gap {mp.nstr(worst, 3)} < 2^-320")


def test_criterion_6_periods(report):
    worst_period = mp.mpf(0)
    worst_match = mp.mpf(0)
    min_sep = mp.inf
    curves = 0
    for N in SUPPORTED_N:
        params = set(admissible_samples(N, 3))
        for row in TABLE:
            if row.N == N:
                params |= set(select_samples(N, row.k, 3).params)
        for t in sorted(params):
            E, Pt = family_curve(N, t)
            curves += 1
            with mp.workprec(P):
                a, q = real_period_agm(E, P), real_period_quad(E, P)
                worst_period = max(worst_period, abs(a - q) / a)
            pd = period_lattice(E, P)
            for k in range(1, N):
                tp = torsion_parameters(E, scalar_mul(E, k, Pt), pd, P, N=N)
                worst_match = max(worst_match, tp.residual)
                min_sep = min(min_sep, tp.separation)
    ok = (
        worst_period < mp.ldexp(1, -PERIOD_BITS)
        and worst_match < mp.ldexp(1, -MATCH_BITS)
        and min_sep >= mp.ldexp(1, -SEPARATION_BITS)
    )
    report(6, ok, f"{curves} curves: AGM/quad gap {mp.nstr(worst_period, 3)}, "
                  f"p/p' residual {mp.nstr(worst_match, 3)}, min separation {mp.nstr(min_sep, 3)}")


def test_criterion_7_property_suites(report):
    rng = random.Random(7)
    failures = []
    # D_0 symmetries
    with mp.workprec(P):
        for _ in range(300):
            z = mp.mpc(rng.uniform(-4, 4), rng.uniform(-4, 4))
            if abs(z) < 1e-6 or abs(z - 1) < 1e-6:
                continue
            scale = mp.ldexp(1, -(P - 40)) * (1 + abs(d0(z)))
            if abs(d0(z.conjugate()) + d0(z)) > scale or abs(d0(1 / z) + d0(z)) > scale:
                failures.append(("d0", z))
    # g_{N-k} = -g_k
    for N in SUPPORTED_N:
        for k in range(1, N):
            for n in range(0, 50 * N + 1):
                if gk_coeff(N, N - k, n) != -gk_coeff(N, k, n):
                    failures.append(("antisym", N, k, n))
    # ring axioms on random cyclotomic elements
    for _ in range(200):
        N = rng.choice(SUPPORTED_N)

        def elem():
            return CycloElem(N, [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(N)])

        a, b, c = elem(), elem(), elem()
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a * b != b * a:
            failures.append(("ring", N))
        if not a.is_zero() and a * a.inverse() != CycloElem.from_rational(N, 1):
            failures.append(("inverse", N))
        with mp.workprec(P):
            lhs, rhs = cyclo_embed(a * b, P), cyclo_embed(a, P) * cyclo_embed(b, P)
            if abs(lhs - rhs) > mp.ldexp(1, -(P - 24)) * max(1, abs(lhs)):
                failures.append(("embed", N))
    # recognition round trip
    H = 10**6
    misses = 0
    with mp.workprec(P):
        for _ in range(ROUND_TRIPS):
            r = Fraction(rng.randint(-H, H), rng.randint(1, H))
            x = mp.mpf(r.numerator) / r.denominator + mp.mpf(rng.uniform(-1, 1)) * mp.mpf(10) ** -20
            rec = recognize_rational(x, H, Fraction(1, 10**19), prec=P)
            misses += rec is None or rec.value != r
    if misses:
        failures.append(("recognize", misses))
    report(7, not failures, f"D0 symmetries, antisymmetry, ring axioms, {ROUND_TRIPS} recognition "
                            f"round trips: {len(failures)} failures")
