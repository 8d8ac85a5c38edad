"""Band polynomial b_{p/q}(z), its Kreft coefficients, and the bridge to the
secular determinant of the Harper matrix."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclo import CyclotomicNumber, FluxContext
from .series import LaurentPoly, Poly, bareiss_determinant, cofactor_determinant


@dataclass(frozen=True)
class BandPolynomial:
    """b(z) = -sum_i a(2i) z^(2i), with a(0) = -1."""

    ctx: FluxContext
    b: Poly

    def __post_init__(self) -> None:
        one = self.ctx.one()
        object.__setattr__(self, "b", self.b.map(lambda c: one * c))

    @property
    def a(self) -> list[CyclotomicNumber]:
        """Kreft coefficients a(0), a(2), ..., a(2*floor(q/2))."""
        return [-self.b[2 * i] for i in range(self.ctx.q // 2 + 1)]

    @property
    def s(self) -> Poly:
        """1 - b(z) = sum_{i>=1} a(2i) z^(2i)."""
        return 1 - self.b

    def float_coeffs(self) -> list[float]:
        return [c.to_complex().real for c in self.b]

    @classmethod
    def from_kreft(cls, ctx: FluxContext, a: list[CyclotomicNumber]) -> BandPolynomial:
        coeffs: list = []
        for i, ai in enumerate(a):
            coeffs += [-ai, 0] if i < len(a) - 1 else [-ai]
        return cls(ctx, Poly(coeffs))

    def check_invariants(self) -> None:
        q = self.ctx.q
        if self.b[0] != 1:
            raise AssertionError("constant term of b must be 1")
        if self.b.degree > 2 * (q // 2):
            raise AssertionError("degree of b exceeds 2*floor(q/2)")
        if any(self.b[i] != 0 for i in range(1, len(self.b), 2)):
            raise AssertionError("b has an odd-degree term")
        if not all(c.is_real() for c in self.b):
            raise AssertionError("b has a non-real coefficient")


def walk_matrix(ctx: FluxContext, x1, x2, y1, y2) -> list[list]:
    """The cyclic q x q system matrix: row k holds -x1 at k-1, c_k at k, -x2 at k+1.

    c_k = 1 - w^k y1 - w^-k y2.  Entries landing on the same cell (q <= 2) add.
    """
    q = ctx.q
    m: list[list] = [[0] * q for _ in range(q)]
    for k in range(q):
        m[k][k] = m[k][k] + (1 - ctx.zeta(k) * y1 - ctx.zeta(-k) * y2)
        m[k][(k - 1) % q] = m[k][(k - 1) % q] - x1
        m[k][(k + 1) % q] = m[k][(k + 1) % q] - x2
    return m


def _z(ctx: FluxContext) -> Poly:
    return Poly([0, ctx.one()])


@lru_cache(maxsize=None)
def band_poly_via_determinant(ctx: FluxContext) -> BandPolynomial:
    """b(z) = det(walk matrix at x1=x2=y1=y2=z) + 4 z^q, by Bareiss elimination."""
    z = _z(ctx)
    delta = bareiss_determinant(walk_matrix(ctx, z, z, z, z))
    q = ctx.q
    # for even q the z^q term also receives a contribution from V(z^2, z^2)
    if q % 2 and delta[q] != -4:
        raise ArithmeticError(f"z^{q} coefficient of the walk determinant is {delta[q]}, expected -4")
    b = delta + Poly.monomial(ctx.one() * 4, q)
    result = BandPolynomial(ctx, b)
    result.check_invariants()
    return result


def kreft_coefficient(ctx: FluxContext, i: int) -> CyclotomicNumber:
    """a(2i) as the i-fold nested sum of 4 sin^2 factors.

    The sum over k_1 >= k_2 >= ... >= k_i >= 0 with k_1 <= q - 2i is folded
    from the innermost index outward with running prefix sums.
    """
    q = ctx.q
    if i == 0:
        return -ctx.one()
    if 2 * i > q:
        raise ValueError(f"a(2i) needs q >= 2i, got q={q}, i={i}")
    top = q - 2 * i
    # cum[t] = sum over k_j <= t of the innermost j..i factors, built from j = i outward
    cum = [ctx.one()] * (top + 1)
    for j in range(i, 0, -1):
        offset = 2 * i - 2 * j + 1
        running = ctx.zero()
        nxt = []
        for k in range(top + 1):
            running = running + ctx.four_sin2(k + offset) * cum[k]
            nxt.append(running)
        cum = nxt
    total = cum[top]
    return total if i % 2 == 1 else -total


@lru_cache(maxsize=None)
def kreft_via_nested_sums(ctx: FluxContext) -> tuple[CyclotomicNumber, ...]:
    return tuple(kreft_coefficient(ctx, i) for i in range(ctx.q // 2 + 1))


def band_poly_via_kreft(ctx: FluxContext) -> BandPolynomial:
    return BandPolynomial.from_kreft(ctx, list(kreft_via_nested_sums(ctx)))


def harper_matrix_at_zero(ctx: FluxContext) -> list[list]:
    """m(E, 0, 0) with entries in Q(w)[E]."""
    q = ctx.q
    e = Poly([0, ctx.one()])
    m: list[list] = [[Poly() for _ in range(q)] for _ in range(q)]
    for k in range(q):
        m[k][k] = m[k][k] + (ctx.zeta(k) + ctx.zeta(-k)) - e
        m[k][(k + 1) % q] = m[k][(k + 1) % q] + 1
        m[(k + 1) % q][k] = m[(k + 1) % q][k] + 1
    return m


@lru_cache(maxsize=None)
def secular_polynomial(ctx: FluxContext) -> Poly:
    """det m(E, 0, 0) as a polynomial in E."""
    return bareiss_determinant(harper_matrix_at_zero(ctx))


def band_poly_from_secular(ctx: FluxContext, secular: Poly) -> BandPolynomial:
    """Invert (-1)^q E^q b(1/E) = det m(E,0,0) + 4(-1)^q."""
    q = ctx.q
    sign = -1 if q % 2 else 1
    shifted = (secular + 4 * sign) * sign
    return BandPolynomial(ctx, shifted.reverse(q))


def numerator_determinant(ctx: FluxContext) -> LaurentPoly:
    """Cramer numerator at x1=zx, x2=z/x, y1=zy, y2=z/y.

    Nested representation: Laurent in x, coefficients Laurent in y,
    coefficients Poly in z over Q(w).
    """
    one = ctx.one()
    z = Poly([0, one])

    def xy(coeff: Poly, ex: int, ey: int) -> LaurentPoly:
        return LaurentPoly.monomial(LaurentPoly.monomial(coeff, ey), ex)

    x1, x2, y1, y2 = xy(z, 1, 0), xy(z, -1, 0), xy(z, 0, 1), xy(z, 0, -1)
    m = walk_matrix(ctx, x1, x2, y1, y2)
    for row in m:
        row[0] = xy(Poly([one]), 0, 0)
    return cofactor_determinant(m)


def denominator_determinant(ctx: FluxContext) -> LaurentPoly:
    one = ctx.one()
    z = Poly([0, one])

    def xy(coeff: Poly, ex: int, ey: int) -> LaurentPoly:
        return LaurentPoly.monomial(LaurentPoly.monomial(coeff, ey), ex)

    return cofactor_determinant(walk_matrix(ctx, xy(z, 1, 0), xy(z, -1, 0), xy(z, 0, 1), xy(z, 0, -1)))


def extract_x0y0(det: LaurentPoly) -> Poly:
    inner = det.coeff(0)
    if isinstance(inner, LaurentPoly):
        inner = inner.coeff(0)
    return inner if isinstance(inner, Poly) else Poly([inner])


@dataclass(frozen=True)
class IdentityReport:
    ctx: FluxContext
    holds: bool
    lhs: Poly
    rhs: Poly


def numerator_identity_check(ctx: FluxContext) -> IdentityReport:
    """Compare [x^0 y^0] of the Cramer numerator with b(z) - (z/q) b'(z)."""
    lhs = extract_x0y0(numerator_determinant(ctx))
    b = band_poly_via_determinant(ctx).b
    rhs = b - b.derivative().shift(1) * Fraction(1, ctx.q)
    return IdentityReport(ctx, lhs == rhs, lhs, rhs)
