"""Real period, normalized period lattice and torsion coset parameters.

The curve is moved to the completed-square model y'^2 = f(x) with
y' = y + (a1 x + a3)/2, so the differential dx/(2y + a1 x + a3) becomes
dx/(2y').  Its lattice is L = omega_plus * (Z + Z tau) with Re tau = 0
(two real components) or Re tau = 1/2 (one component).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Optional

import mpmath
from mpmath import mp

from .arith import GUARD_BITS, agm, to_mpf
from .curve import CurveModel, CurvePoint, invariants, point_order
from .eisenstein import wp_pair
from .errors import CrossCheckError, DomainError, NoTorsionMatch


class Case(str, Enum):
    A = "A"  # z0 = zeta_N^k
    B = "B"  # z0 = zeta_N^k q^{1/2}


@dataclass(frozen=True)
class PeriodData:
    omega_plus: mpmath.mpf
    omega_minus: mpmath.mpf  # L meets iR in i * omega_minus * Z
    tau: mpmath.mpc
    q: mpmath.mpf
    components: int
    prec: int
    k: Optional[int] = None
    case: Optional[Case] = None

    def with_torsion(self, k: int, case: Case) -> "PeriodData":
        return replace(self, k=k, case=case)


@dataclass(frozen=True)
class CubicRoots:
    real: tuple  # descending
    complex_root: Optional[mpmath.mpc]  # the root with positive imaginary part, if any


@lru_cache(maxsize=256)
def cubic_roots(E: CurveModel, prec: int) -> CubicRoots:
    """Roots of the completed-square cubic f(x) = x^3 + B x^2 + C x + D."""
    B, C, D = E.completed_square_cubic()
    disc = invariants(E).discriminant
    with mp.workprec(prec + 64):
        roots = mp.polyroots(
            [1, to_mpf(B), to_mpf(C), to_mpf(D)], maxsteps=400, extraprec=prec + 64
        )
        if disc > 0:
            real = tuple(sorted((mp.re(r) for r in roots), reverse=True))
            return CubicRoots(real, None)
        roots = sorted(roots, key=lambda r: abs(mp.im(r)))
        e1 = mp.re(roots[0])
        cplx = roots[1] if mp.im(roots[1]) > 0 else roots[2]
        return CubicRoots((e1,), mp.mpc(cplx))


def real_period_agm(E: CurveModel, prec: int) -> mpmath.mpf:
    """omega_plus by the AGM; for conjugate roots the first AGM step is exact and real."""
    roots = cubic_roots(E, prec)
    with mp.workprec(prec + 32):
        if roots.complex_root is None:
            e1, e2, e3 = roots.real
            val = mp.pi / agm(mp.sqrt(e1 - e3), mp.sqrt(e1 - e2), prec + 32)
        else:
            w = mp.sqrt(roots.real[0] - roots.complex_root)
            val = mp.pi / agm(mp.re(w), abs(w), prec + 32)
    with mp.workprec(prec):
        return +val


def real_period_quad(E: CurveModel, prec: int) -> mpmath.mpf:
    """omega_plus = int_gamma^oo dx / sqrt(f(x)) by tanh-sinh quadrature.

    x = gamma + t^2 removes the square-root singularity at the largest root
    gamma; on t >= 1 the further substitution t = 1/s leaves a smooth
    integrand on [0, 1].
    """
    B, C, _ = E.completed_square_cubic()
    roots = cubic_roots(E, prec)
    wp = prec + 32
    with mp.workprec(wp):
        g = roots.real[0]
        B, C = to_mpf(B), to_mpf(C)
        # f(x) = (x - g) * (x^2 + p x + r)
        p = g + B
        r = g * g + B * g + C

        def near(t):
            x = g + t * t
            return 2 / mp.sqrt(x * x + p * x + r)

        def far(s):
            s2 = s * s
            val = (g * s2 + 1) ** 2 + p * (g * s2 * s2 + s2) + r * s2 * s2
            return 2 / mp.sqrt(val)

        # split where the complex roots of f come close to the contour
        near_pts, far_pts = [mp.mpf(0), mp.mpf(1)], [mp.mpf(0), mp.mpf(1)]
        if roots.complex_root is not None:
            tc = abs(mp.re(mp.sqrt(roots.complex_root - g)))
            if 0 < tc < 1:
                near_pts.insert(1, tc)
            elif tc > 1:
                far_pts.insert(1, 1 / tc)
        val = mp.quad(near, near_pts, maxdegree=12) + mp.quad(far, far_pts, maxdegree=12)
    with mp.workprec(prec):
        return +val


def real_period(E: CurveModel, prec: int, *, check: bool = True) -> mpmath.mpf:
    """Omega^+ for dx/(2y + a1 x + a3); with ``check`` the AGM and quadrature routes must agree."""
    val = real_period_agm(E, prec)
    if check:
        other = real_period_quad(E, prec)
        gap = abs(val - other) / val
        if gap > mp.ldexp(1, -(prec - GUARD_BITS)):
            raise CrossCheckError(
                f"AGM and quadrature periods differ by {mpmath.nstr(gap, 5)} (relative) on {E}"
            )
    return val


@lru_cache(maxsize=256)
def period_lattice(E: CurveModel, prec: int, *, check: bool = True) -> PeriodData:
    omega_plus = real_period(E, prec, check=check)
    roots = cubic_roots(E, prec)
    with mp.workprec(prec + 32):
        if roots.complex_root is None:
            e1, e2, e3 = roots.real
            omega_minus = mp.pi / agm(mp.sqrt(e1 - e3), mp.sqrt(e2 - e3), prec + 32)
            tau = mp.mpc(0, omega_minus / omega_plus)
            components = 2
        else:
            # the twisted curve y^2 = -f(x) carries the imaginary period
            w = mp.sqrt(roots.complex_root - roots.real[0])
            omega_minus = mp.pi / agm(mp.re(w), abs(w), prec + 32)
            tau = mp.mpc(mp.mpf(1) / 2, omega_minus / (2 * omega_plus))
            components = 1
        q = mp.exp(-2 * mp.pi * tau.imag)
        if components == 1:
            q = -q
    with mp.workprec(prec):
        return PeriodData(+omega_plus, +omega_minus, +tau, +q, components, prec)


@dataclass(frozen=True)
class TorsionParameters:
    k: int
    case: Case
    residual: mpmath.mpf
    separation: mpmath.mpf  # smallest residual among rejected candidates


def _candidates(N: int, pd: PeriodData):
    for k in range(1, N):
        yield k, Case.A
    if N % 2 == 0 and pd.components == 2:
        for k in range(N):
            yield k, Case.B


def torsion_parameters(
    E: CurveModel, Pt: CurvePoint, pd: PeriodData, prec: int, N: Optional[int] = None
) -> TorsionParameters:
    """Find (k, case) with u0 = omega_plus (k/N [+ tau/2]) mapping to Pt.

    Matches p(u0) = x + b2/12 and p'(u0) = 2y + a1 x + a3, where p is the
    Weierstrass function of L; ``N`` defaults to the exact order of Pt, and
    may be any multiple of it.
    """
    if Pt.is_infinity:
        raise DomainError("the identity has no coset parameter")
    if N is None:
        N = point_order(E, Pt, 100)
        if N is None:
            raise DomainError(f"{Pt} is not a torsion point of order <= 100")
    inv = invariants(E)
    with mp.workprec(prec + 16):
        X = to_mpf(Pt.x + inv.b2 / 12)
        Y = to_mpf(2 * Pt.y + E.a1 * Pt.x + E.a3)
        op = pd.omega_plus
        scale_x, scale_y = max(1, abs(X)), max(1, abs(Y))
        results = []
        for k, case in _candidates(N, pd):
            r = 0 if case is Case.A else N // 2
            p, dp = wp_pair(pd.tau, r, k, N, prec + 16)
            res = max(abs(p / op**2 - X) / scale_x, abs(dp / op**3 - Y) / scale_y)
            results.append((res, k, case))
    results.sort(key=lambda t: t[0])
    best_res, k, case = results[0]
    separation = results[1][0] if len(results) > 1 else mp.inf
    if best_res > mp.ldexp(1, -(prec - 48)):
        raise NoTorsionMatch(
            f"no coset candidate reproduces {Pt} on {E}: best residual {mpmath.nstr(best_res, 5)}"
        )
    with mp.workprec(prec):
        return TorsionParameters(k, case, +best_res, +separation)
