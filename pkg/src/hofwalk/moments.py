"""Exact moments Z_n(w) = Tr H^n at rational flux.

Three exact routes: the generating-function series, the explicit sum over
partitions weighted by Kreft coefficients, and the walk DP (in ``walks``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .cyclo import CyclotomicNumber, FluxContext
from .series import TruncatedSeries
from .spectrum import BandPolynomial, band_poly_via_determinant, kreft_via_nested_sums
from .walks import closed_Zn_dp

ROUTES = ("series", "sum", "dp")


@dataclass
class MomentTable:
    ctx: FluxContext
    values: list[CyclotomicNumber]
    routes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.routes:
            self.routes = ["series"] * len(self.values)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> CyclotomicNumber:
        if n < 0 or n % 2:
            return self.ctx.zero()
        return self.values[n]

    def floats(self) -> list[float]:
        return [v.to_complex().real for v in self.values]


def generating_series(ctx: FluxContext, N: int, band: BandPolynomial | None = None) -> TruncatedSeries:
    """(1 - z b'/(q b)) * sum_k C(2k,k)^2 (z^q/b)^(2k), truncated at z^N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    band = band or band_poly_via_determinant(ctx)
    q = ctx.q
    one = ctx.one()
    b = band.b.to_series(N)
    prefactor = one - (band.b.derivative().shift(1).to_series(N) / b) * Fraction(1, q)
    acc = TruncatedSeries([one], N)
    kmax = N // (2 * q)  # higher k start beyond z^N
    if kmax:
        u = TruncatedSeries([0] * q + [one], N) / b
        u2 = u * u
        power = acc
        for k in range(1, kmax + 1):
            power = power * u2
            acc = acc + power * math.comb(2 * k, k) ** 2
    return prefactor * acc


def moments_by_series(ctx: FluxContext, N: int) -> MomentTable:
    s = generating_series(ctx, N)
    values = [one_if_int(ctx, c) for c in s.coeffs]
    return MomentTable(ctx, values, ["series"] * len(values))


def one_if_int(ctx: FluxContext, c: object) -> CyclotomicNumber:
    return c if isinstance(c, CyclotomicNumber) else ctx.one() * c


def bounded_compositions(target: int, weights: list[int]) -> Iterator[tuple[int, ...]]:
    """All (l_1..l_m) >= 0 with sum_j weights[j] * l_j == target."""
    m = len(weights)
    if m == 0:
        if target == 0:
            yield ()
        return
    counts = [0] * m

    def rec(j: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if j == m - 1:
            if remaining % weights[j] == 0:
                counts[j] = remaining // weights[j]
                yield tuple(counts)
            return
        for c in range(remaining // weights[j] + 1):
            counts[j] = c
            yield from rec(j + 1, remaining - c * weights[j])

    yield from rec(0, target)


def multinomial(parts: tuple[int, ...] | list[int]) -> int:
    total = 0
    result = 1
    for k in parts:
        total += k
        result *= math.comb(total, k)
    return result


def moments_by_sum_formula(ctx: FluxContext, n: int) -> CyclotomicNumber:
    """(n/q) sum_k sum_l C(2k,k)^2 multinomial(l, 2k) / (|l| + 2k) prod a(2j)^l_j."""
    if n <= 0 or n % 2:
        raise ValueError(f"sum formula needs even n > 0, got {n}")
    q = ctx.q
    half = q // 2
    a = kreft_via_nested_sums(ctx)
    weights = list(range(1, half + 1))
    total = ctx.zero()
    powers: dict[tuple[int, int], CyclotomicNumber] = {}

    def apow(j: int, e: int) -> CyclotomicNumber:
        key = (j, e)
        if key not in powers:
            powers[key] = a[j] ** e
        return powers[key]

    for k in range(n // (2 * q) + 1):
        target = n // 2 - k * q
        if target < 0:
            break
        cbin = math.comb(2 * k, k) ** 2
        for ls in bounded_compositions(target, weights):
            size = sum(ls) + 2 * k
            if size == 0:
                continue
            coef = Fraction(cbin * multinomial(list(ls) + [2 * k]), size)
            term = ctx.one() * coef
            for j, lj in enumerate(ls, start=1):
                if lj:
                    term = term * apow(j, lj)
            total = total + term
    return total * Fraction(n, q)


def moments_by_sum(ctx: FluxContext, N: int) -> MomentTable:
    values = [ctx.one()] + [
        moments_by_sum_formula(ctx, n) if n % 2 == 0 else ctx.zero() for n in range(1, N + 1)
    ]
    return MomentTable(ctx, values, ["sum"] * len(values))


def moments_by_dp(ctx: FluxContext, N: int) -> MomentTable:
    values = [closed_Zn_dp(n, ctx) if n % 2 == 0 else ctx.zero() for n in range(N + 1)]
    return MomentTable(ctx, values, ["dp"] * len(values))


def moment_table(ctx: FluxContext, N: int, route: str = "series") -> MomentTable:
    if route == "series":
        return moments_by_series(ctx, N)
    if route == "sum":
        return moments_by_sum(ctx, N)
    if route == "dp":
        return moments_by_dp(ctx, N)
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


# q = 4 recurrence: n^2 Z_n = sum_k P_k(n) Z_{n-k}, P_k given as (c2, c1, c0)
Q4_RECURRENCE: dict[int, tuple[int, int, int]] = {
    14: (4096, -98304, 589824),
    12: (-14848, 316416, -1691648),
    10: (17920, -323840, 1469440),
    8: (-9696, 138368, -493568),
    6: (2720, -28320, 74112),
    4: (-412, 2768, -4800),
    2: (32, -104, 96),
}


@dataclass(frozen=True)
class RecurrenceReport:
    holds: bool
    checked: list[int]
    first_failure: int | None = None


def recurrence_check_q4(table: MomentTable) -> RecurrenceReport:
    """Verify the degree-2, order-14 recurrence for Z_n(i) on every even n in the table."""
    if table.ctx.q != 4:
        raise ValueError("the q = 4 recurrence needs p/q = 1/4 or 3/4")
    checked = []
    for n in range(2, table.N + 1, 2):
        rhs = table.ctx.zero()
        for shift, (c2, c1, c0) in Q4_RECURRENCE.items():
            if n - shift >= 0:
                rhs = rhs + table[n - shift] * (c2 * n * n + c1 * n + c0)
        checked.append(n)
        if table[n] * (n * n) != rhs:
            return RecurrenceReport(False, checked, n)
    return RecurrenceReport(True, checked)


def prefactor_series(ctx: FluxContext, N: int) -> TruncatedSeries:
    """1 - z b'/(q b) as a series."""
    band = band_poly_via_determinant(ctx)
    b = band.b.to_series(N)
    return ctx.one() - (band.b.derivative().shift(1).to_series(N) / b) * Fraction(1, ctx.q)


def dos_generating_identity_check(ctx: FluxContext, z0: float, tolerance: float = 1e-10) -> float:
    """|int rho(E)/(1 - z0 E) dE - (1 - z0 b'/(q b)) (2/pi) K(16 z0^(2q)/b^2)| at z0."""
    from .asympt import radius_of_convergence
    from .hofstadter import DensityOfStates

    rho = radius_of_convergence(ctx)
    if abs(z0) >= rho:
        raise ValueError(f"z0 = {z0} lies outside the radius of convergence {rho:.12g}")
    dos = DensityOfStates(ctx)
    lhs = dos.integrate(lambda e: 1.0 / (1.0 - z0 * e), tol=tolerance)
    rhs = generating_function_float(ctx, z0)
    return abs(lhs - rhs)


def generating_function_float(ctx: FluxContext, z: float) -> float:
    """Closed form of sum_n Z_n z^n via the complete elliptic integral, in floats."""
    import numpy as np

    from .numerics import ellipk

    coeffs = band_poly_via_determinant(ctx).float_coeffs()
    b = np.polynomial.polynomial.polyval(z, coeffs)
    db = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(coeffs)) if len(coeffs) > 1 else 0.0
    m = 16.0 * z ** (2 * ctx.q) / b**2
    return float((1.0 - z * db / (ctx.q * b)) * 2.0 / math.pi * ellipk(m))
