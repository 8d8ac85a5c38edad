"""Dominant singularities of the moment generating function and the leading
law Z_n ~ (beta / n) alpha^n.

The generating function carries K(16 z^(2q) / b(z)^2), whose logarithmic
singularity sits where b(z) = +-4 z^q.  With K(x) = -1/2 log(1 - x) + O(1)
and a prefactor P(z) = 1 - z b'(z) / (q b(z)), each of the two real
singularities +-rho contributes P(rho)/(pi n) rho^-n on even n, which gives
beta = 2 P(rho) / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cyclo import FluxContext
from .moments import MomentTable
from .numerics import aberth_roots
from .spectrum import band_poly_via_determinant

TIE_TOLERANCE = 1e-9


class UnsupportedSingularityError(ValueError):
    """Raised when the dominant singularities are not a single real pair +-rho."""

    def __init__(self, ctx: FluxContext, singularities: list[complex]):
        self.ctx = ctx
        self.singularities = singularities
        listing = ", ".join(f"{z.real:+.12g}{z.imag:+.12g}j" for z in singularities)
        super().__init__(f"flux {ctx.p}/{ctx.q}: dominant singularities are not a real pair: [{listing}]")


@dataclass(frozen=True)
class GrowthConstants:
    ctx: FluxContext
    rho: float
    alpha: float
    beta: float | None
    singularities: list[complex] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "rho": self.rho,
            "singularities": [[z.real, z.imag] for z in self.singularities],
        }


def _branch_coeffs(ctx: FluxContext, sign: int) -> np.ndarray:
    """Float coefficients of b(z) - sign * 4 z^q, lowest degree first."""
    b = band_poly_via_determinant(ctx).float_coeffs()
    c = np.zeros(max(len(b), ctx.q + 1))
    c[: len(b)] = b
    c[ctx.q] -= 4.0 * sign
    return c


def _polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    """A few Newton steps on an already converged root."""
    p = coeffs[::-1]
    dp = np.polyder(p)
    for _ in range(steps):
        d = np.polyval(dp, z)
        if d == 0:
            break
        z = z - np.polyval(p, z) / d
    return complex(z)


def singularity_candidates(ctx: FluxContext) -> list[tuple[complex, int]]:
    """Every root of b - 4z^q and b + 4z^q, tagged with its branch sign."""
    out: list[tuple[complex, int]] = []
    for sign in (1, -1):
        coeffs = _branch_coeffs(ctx, sign)
        for z in aberth_roots(coeffs):
            out.append((_polish(coeffs, complex(z)), sign))
    return out


def dominant_singularities(ctx: FluxContext) -> GrowthConstants:
    """Minimal-modulus roots of b(z) = +-4 z^q; beta is left unset."""
    candidates = singularity_candidates(ctx)
    if not candidates:
        raise ArithmeticError(f"no singularities found for {ctx.p}/{ctx.q}")
    rmin = min(abs(z) for z, _ in candidates)
    dominant = sorted(
        (z for z, _ in candidates if abs(z) <= rmin * (1 + TIE_TOLERANCE)),
        key=lambda z: (z.real, z.imag),
    )
    return GrowthConstants(ctx, rho=rmin, alpha=1.0 / rmin, beta=None, singularities=dominant)


def radius_of_convergence(ctx: FluxContext) -> float:
    return dominant_singularities(ctx).rho


def _is_real_pair(sing: list[complex], rho: float) -> bool:
    if len(sing) != 2:
        return False
    tol = TIE_TOLERANCE * rho
    lo, hi = sing
    return abs(lo.imag) <= tol and abs(hi.imag) <= tol and abs(lo.real + rho) <= tol and abs(hi.real - rho) <= tol


def prefactor_float(ctx: FluxContext, z: float) -> float:
    b = np.asarray(band_poly_via_determinant(ctx).float_coeffs())
    bz = np.polynomial.polynomial.polyval(z, b)
    dbz = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(b)) if len(b) > 1 else 0.0
    return float(1.0 - z * dbz / (ctx.q * bz))


def growth_constants(ctx: FluxContext) -> GrowthConstants:
    dom = dominant_singularities(ctx)
    if not _is_real_pair(dom.singularities, dom.rho):
        raise UnsupportedSingularityError(ctx, dom.singularities)
    rho = dom.singularities[1].real
    beta = 2.0 * prefactor_float(ctx, rho) / math.pi
    return GrowthConstants(ctx, rho=rho, alpha=1.0 / rho, beta=beta, singularities=dom.singularities)


def asymptotic_fit_check(ctx: FluxContext, table: MomentTable) -> list[tuple[int, float]]:
    """(n, |n Z_n alpha^-n - beta| / beta) for every even n >= 2 in the table."""
    gc = growth_constants(ctx)
    out = []
    for n in range(2, table.N + 1, 2):
        zn = table[n].to_complex().real
        scaled = n * zn * gc.rho**n
        out.append((n, abs(scaled - gc.beta) / gc.beta))
    return out
