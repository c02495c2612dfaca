"""R = 2 pi D_{0,q}(kP) / Omega^+ on the Kubert families, checked against the table of rational functions."""
from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .arith import DEFAULT_PREC, decimal_digits, q_frac_pow, to_mpf
from .curve import CurveModel, CurvePoint, invariants, on_identity_component, scalar_mul
from .eisenstein import eval_series, gk_expansion, hk_expansion, terms_needed
from .errors import CrossCheckError, DomainError, InadmissibleParameter, QAverageError
from .families import FAMILIES, admissible_samples, family_curve, rationals_by_height
from .periods import Case, PeriodData, TorsionParameters, period_lattice, torsion_parameters
from .recognize import recognize_rational
from .zerolog import QAverageResult, d0_q_average

log = logging.getLogger(__name__)

MAX_HEIGHT = 10**12
CASE_B_SCAN_LIMIT = 2000


# ---------------------------------------------------------------------------
# Table of 2NR as rational functions of the family parameter
# ---------------------------------------------------------------------------


def _poly_eval(coeffs: Sequence[int], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class TableRow:
    """2NR = num(t)/den(t); coefficient tuples are lowest degree first."""

    N: int
    k: int
    num: tuple[int, ...]
    den: tuple[int, ...] = (1,)

    @property
    def param_name(self) -> str:
        return FAMILIES[self.N].param_name

    def two_n_r(self, t) -> Fraction:
        t = Fraction(t)
        d = _poly_eval(self.den, t)
        if d == 0:
            raise InadmissibleParameter(self.N, t, "denominator of the table entry vanishes")
        return _poly_eval(self.num, t) / d

    def expected(self, t) -> Fraction:
        return self.two_n_r(t) / (2 * self.N)

    def expr(self) -> str:
        def fmt(coeffs):
            v = self.param_name
            terms = []
            for i in range(len(coeffs) - 1, -1, -1):
                c = coeffs[i]
                if c == 0:
                    continue
                mono = "" if i == 0 else (v if i == 1 else f"{v}^{i}")
                mag = abs(c)
                body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
                terms.append(("-" if c < 0 else "+", body))
            if not terms:
                return "0"
            s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                s += f" {sign} {body}"
            return s

        if self.den == (1,):
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


TABLE: tuple[TableRow, ...] = (
    TableRow(3, 1, (0, -1)),
    TableRow(4, 1, (-2,)),
    TableRow(5, 1, (-3, 1)),
    TableRow(5, 2, (-1, -3)),
    TableRow(6, 1, (-4,)),
    TableRow(7, 1, (-3, -3, 1)),
    TableRow(7, 2, (1, 1, -5)),
    TableRow(7, 3, (5, -9, 3)),
    TableRow(8, 1, (2, -8), (0, 1)),
    TableRow(8, 3, (6, -8), (0, 1)),
    TableRow(9, 1, (-5, 0, -3, 1)),
    TableRow(9, 2, (-1, 0, 3, -7)),
    TableRow(9, 4, (7, -18, 15, -5)),
    TableRow(10, 1, (-4, -4)),
    TableRow(10, 3, (8, -12)),
    TableRow(12, 1, (-10, 36, -48, 24), (1, -3, 3, -1)),
    TableRow(12, 5, (-2, 12, -24, 24), (1, -3, 3, -1)),
)


def table_row(N: int, k: int) -> TableRow:
    for row in TABLE:
        if row.N == N and row.k == k:
            return row
    raise DomainError(f"no table entry for N={N}, k={k}")


def table_checksum() -> str:
    payload = json.dumps([[r.N, r.k, list(r.num), list(r.den)] for r in TABLE], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------


def path_tolerance(prec: int):
    return mp.ldexp(1, -(prec - 64))


def match_tolerance(prec: int):
    return mp.ldexp(1, -(prec // 2))


def precision_sufficient(prec: int, max_height: int = MAX_HEIGHT) -> bool:
    """Whether 2^(-P/2) is tight enough for unique recognition at this height."""
    return Fraction(1, 2 ** (prec // 2)) < Fraction(1, 4 * max_height * max_height)


# ---------------------------------------------------------------------------
# R by two routes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RResult:
    value: mpmath.mpf  # direct q-average route
    series_value: mpmath.mpf  # q-expansion route
    case: Case
    k0: int
    period: PeriodData
    torsion: TorsionParameters
    average: QAverageResult
    path_gap: mpmath.mpf


def coset_representative(N: int, k0: int, case: Case, tau, prec: int):
    with mp.workprec(prec + 16):
        z = mp.expjpi(mp.mpf(2 * k0) / N)
        if case is Case.B:
            z *= q_frac_pow(tau, Fraction(1, 2), prec + 16)
    with mp.workprec(prec):
        return +z


def compute_R(
    N: int, k: int, E: CurveModel, Pt: CurvePoint, prec: int = DEFAULT_PREC, *, check_periods: bool = True
) -> RResult:
    """2 pi D_{0,q}(k Pt) / Omega^+, by the direct average and by the g_k / h_k series."""
    Q = scalar_mul(E, k, Pt)
    if Q.is_infinity:
        raise DomainError(f"{k} * {Pt} is the identity")
    pd = period_lattice(E, prec, check=check_periods)
    tp = torsion_parameters(E, Q, pd, prec, N=N)
    pd = pd.with_torsion(tp.k, tp.case)
    z0 = coset_representative(N, tp.k, tp.case, pd.tau, prec)
    avg = d0_q_average(z0, pd.q, prec)
    if tp.case is Case.A:
        expansion = gk_expansion(N, tp.k, terms_needed(pd.tau, 1, prec))
    else:
        expansion = hk_expansion(N, tp.k, terms_needed(pd.tau, 2, prec))
    series = eval_series(expansion, pd.tau, prec)
    with mp.workprec(prec + 16):
        factor = 2 * mp.pi / pd.omega_plus
        r_direct = factor * avg.value
        # g_k, h_k equal (1/i) D_{0,q} for real q
        d_series = 1j * series
        r_series = factor * d_series.real
        gap = max(abs(r_direct - r_series), factor * abs(d_series.imag))
        if gap > path_tolerance(prec) * max(1, abs(r_direct)):
            raise CrossCheckError(
                f"q-average and series routes differ by {mpmath.nstr(gap, 5)} "
                f"(N={N}, k={k}, curve {E})"
            )
    with mp.workprec(prec):
        return RResult(+r_direct, +r_series, tp.case, tp.k, pd, tp, avg, +gap)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    N: int
    k: int
    t: Fraction
    case: Optional[str]
    R: Optional[mpmath.mpf]
    recognized: Optional[Fraction]
    expected: Fraction
    match: bool
    residual: Optional[mpmath.mpf]
    precision: int
    wall_time: float
    status: str  # match | mismatch | insufficient-precision | error
    detail: str = ""

    def to_dict(self) -> dict:
        digits = decimal_digits(self.precision)

        def real(x):
            return None if x is None else mpmath.nstr(x, digits, strip_zeros=False)

        def rat(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"

        with mp.workprec(self.precision):
            return {
                "N": self.N,
                "k": self.k,
                "t": rat(self.t),
                "case": self.case,
                "R": real(self.R),
                "recognized": rat(self.recognized),
                "expected": rat(self.expected),
                "match": self.match,
                "residual": None if self.residual is None else mpmath.nstr(self.residual, 6),
                "precision": self.precision,
                "wall_time": round(self.wall_time, 4),
                "status": self.status,
                "detail": self.detail,
            }


def verify_instance(N: int, k: int, t, prec: int = DEFAULT_PREC) -> VerificationReport:
    """One (row, parameter) check; failures become reports, not exceptions."""
    row = table_row(N, k)
    t = Fraction(t)
    start = time.perf_counter()
    expected = row.expected(t)
    try:
        E, P = family_curve(N, t)
        res = compute_R(N, k, E, P, prec)
    except QAverageError as exc:
        return VerificationReport(
            N, k, t, None, None, None, expected, False, None, prec,
            time.perf_counter() - start, "error", str(exc),
        )
    with mp.workprec(prec):
        residual = abs(res.value - to_mpf(expected))
        close = residual <= match_tolerance(prec)
        if precision_sufficient(prec):
            rec = recognize_rational(res.value, MAX_HEIGHT, match_tolerance(prec), prec=prec)
            recognized = rec.value if rec else None
            match = bool(close and recognized == expected)
            status = "match" if match else "mismatch"
        else:
            recognized, match, status = None, False, "insufficient-precision"
    return VerificationReport(
        N, k, t, res.case.value, res.value, recognized, expected, match, residual, prec,
        time.perf_counter() - start, status,
    )


@dataclass
class SampleSelection:
    N: int
    k: int
    params: list[Fraction]
    case_b_param: Optional[Fraction] = None
    scanned: int = 0


def _is_case_b(N: int, k: int, t: Fraction) -> bool:
    E, P = family_curve(N, t)
    Q = scalar_mul(E, k, P)
    return invariants(E).discriminant > 0 and not on_identity_component(E, Q)


def select_samples(N: int, k: int, count: int) -> SampleSelection:
    """``count`` admissible parameters; for even N at least one puts kP off the identity component."""
    params = admissible_samples(N, count)
    sel = SampleSelection(N, k, params)
    if count <= 0 or N % 2:
        return sel
    for t in params:
        if _is_case_b(N, k, t):
            sel.case_b_param = t
            return sel
    row = table_row(N, k)
    for i, t in enumerate(rationals_by_height()):
        if i >= CASE_B_SCAN_LIMIT:
            log.warning("no case-B parameter for N=%d, k=%d in %d candidates", N, k, i)
            break
        sel.scanned = i + 1
        if t in params:
            continue
        try:
            row.two_n_r(t)
            if _is_case_b(N, k, t):
                sel.params.append(t)
                sel.case_b_param = t
                log.info("N=%d k=%d: added case-B parameter %s after scanning %d", N, k, t, i + 1)
                break
        except InadmissibleParameter:
            continue
    return sel


def verify_row(
    N: int, k: int, samples: int, prec: int = DEFAULT_PREC, *, params: Optional[Sequence] = None
) -> list[VerificationReport]:
    if params is None:
        params = select_samples(N, k, samples).params
    return [verify_instance(N, k, t, prec) for t in params]


@dataclass
class Summary:
    reports: list[VerificationReport]
    selections: list[SampleSelection]
    precision: int
    checksum: str = field(default_factory=table_checksum)

    @property
    def all_match(self) -> bool:
        return all(r.match for r in self.reports)

    @property
    def exit_code(self) -> int:
        if any(r.status in ("mismatch", "error") for r in self.reports):
            return 1
        if any(r.status == "insufficient-precision" for r in self.reports):
            return 2
        return 0

    def rows_passed(self) -> dict[tuple[int, int], bool]:
        out: dict[tuple[int, int], bool] = {}
        for r in self.reports:
            out[(r.N, r.k)] = out.get((r.N, r.k), True) and r.match
        return out


def _verify_task(args):
    N, k, t, prec = args
    return verify_instance(N, k, t, prec)


def run_all(prec: int = DEFAULT_PREC, samples_per_row: int = 3, *, jobs: int = 1) -> Summary:
    """Verify every table row on ``samples_per_row`` parameters (plus case-B additions)."""
    selections = [select_samples(row.N, row.k, samples_per_row) for row in TABLE]
    tasks = [(s.N, s.k, t, prec) for s in selections for t in s.params]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_task, tasks))
    else:
        reports = [_verify_task(t) for t in tasks]
    reports.sort(key=lambda r: (r.N, r.k, r.t))
    return Summary(reports, selections, prec)
