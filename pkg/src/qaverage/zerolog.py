"""The 0-logarithm D_0(z) = Im(z/(1-z)) and its q-average over z q^Z."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import DomainError


@dataclass(frozen=True)
class QAverageResult:
    value: mpmath.mpf
    terms_used: int
    tail_bound: mpmath.mpf
    mode: str


def d0(z):
    """Im(z/(1-z)), with D_0(1) = 0."""
    z = mp.mpc(z)
    if z == 1:
        return mp.mpf(0)
    # Im(z/(1-z)) = Im(z) / |1-z|^2
    return z.imag / abs(1 - z) ** 2


def _terms_for(ratio, scale, target) -> int:
    """Smallest M with scale * ratio^M < target."""
    if ratio == 0:
        return 0
    m = int(mp.ceil(mp.log(target / scale) / mp.log(ratio)))
    return max(m, 0)


def d0_q_average(z, q, prec: int, *, terms: int | None = None, mode: str | None = None) -> QAverageResult:
    """sum_{n in Z} D_0(z q^n) for real q with 0 < |q| < 1.

    ``mode`` is chosen automatically: ``"unit"`` folds n <-> -n for |z| = 1,
    ``"half"`` folds the coset of q^{1/2} zeta (q > 0), ``"direct"`` sums
    both sides.  ``terms`` overrides the truncation index.
    """
    wp = prec + 24
    with mp.workprec(wp):
        z = mp.mpc(z)
        q = mp.mpf(q) if not isinstance(q, mpmath.mpc) else q
        if isinstance(q, mpmath.mpc):
            if abs(q.imag) > mp.ldexp(abs(q.real), -(prec - 8)):
                raise DomainError("q must be real")
            q = q.real
        aq = abs(q)
        if not 0 < aq < 1:
            raise DomainError(f"need 0 < |q| < 1, got |q| = {mpmath.nstr(aq, 8)}")
        if z == 0:
            raise DomainError("z must be nonzero")
        target = mp.ldexp(1, -(prec + 16))
        tol = mp.ldexp(1, -(prec - 8))
        if mode is None:
            if abs(abs(z) - 1) < tol:
                mode = "unit"
            elif q > 0 and abs(abs(z) ** 2 - q) < tol * q:
                mode = "half"
            else:
                mode = "direct"

        if mode == "unit":
            # D_0(z q^-j) = D_0(z q^j) when |z| = 1 and q is real
            scale = 2 * aq / (1 - aq) ** 2
            M = terms if terms is not None else _terms_for(aq, scale, target)
            total = d0(z)
            w = z
            for _ in range(M):
                w *= q
                total += 2 * d0(w)
            tail = scale * aq**M
        elif mode == "half":
            # z = zeta q^{1/2}: the n and -1-n terms agree
            sq = mp.sqrt(q)
            scale = 2 * sq / ((1 - aq) * (1 - sq))
            M = terms if terms is not None else _terms_for(aq, scale, target)
            total = mp.mpf(0)
            w = z
            for _ in range(M):
                total += 2 * d0(w)
                w *= q
            tail = scale * aq**M
        elif mode == "direct":
            # move z into |q|^{1/2} <= |z| < |q|^{-1/2}; the sum is coset invariant
            shift = mp.nint(mp.log(abs(z)) / mp.log(aq))
            z = z * q ** (-int(shift))
            sq = mp.sqrt(aq)
            scale = 2 * sq / ((1 - aq) * (1 - sq))
            M = terms if terms is not None else _terms_for(aq, scale, target)
            total = d0(z)
            up, down = z, z
            for _ in range(M):
                up *= q
                down /= q
                total += d0(up) + d0(down)
            tail = scale * aq**M
        else:
            raise ValueError(f"unknown mode {mode!r}")
    with mp.workprec(prec):
        return QAverageResult(+total, M, +tail, mode)
