import random
from fractions import Fraction

import pytest

from hofwalk.cyclo import FluxContext
from hofwalk.series import (
    LaurentPoly,
    Poly,
    TruncatedSeries,
    bareiss_determinant,
    cofactor_determinant,
    exact_determinant,
    series_div,
    tridiagonal_determinant,
)
from hofwalk.spectrum import band_poly_via_determinant, walk_matrix

z = Poly([0, 1])


def test_zero_poly_degree_sentinel():
    assert Poly().degree == Poly([0, 0]).degree
    assert Poly().degree < 0
    assert Poly([3, 0, 0]).degree == 0


def test_derivative_and_evaluation():
    b = 1 - 4 * z * z
    assert b.derivative() == Poly([0, -8])
    assert b(Fraction(1, 2)) == 0
    assert b(Fraction(1, 3)) == Fraction(5, 9)


def test_derivative_of_eighth_band_polynomial():
    ctx = FluxContext(1, 8)
    b = band_poly_via_determinant(ctx).b
    sqrt2 = ctx.zeta(1) + ctx.zeta(-1)
    assert b.derivative()[3] == 4 * (72 - 8 * sqrt2)


def test_compose_power_and_shift():
    p = Poly([1, 2, 3])
    assert p.compose_power(2) == Poly([1, 0, 2, 0, 3])
    assert p.shift(2) == Poly([0, 0, 1, 2, 3])
    assert p.reverse(3) == Poly([0, 3, 2, 1])


def test_poly_division():
    a = (z + 1) * (z - 2) * (z * z + 3)
    assert a.exact_div(z - 2) == (z + 1) * (z * z + 3)
    q, r = (a + 5).divmod(z + 1)
    assert q * (z + 1) + r == a + 5
    assert r.degree < 1
    with pytest.raises(ArithmeticError):
        (a + 1).exact_div(z - 2)


def test_integer_coefficients_divide_exactly():
    p = Poly([1, 3])
    assert (p / 2)[1] == Fraction(3, 2)


def test_series_div_geometric():
    one = TruncatedSeries([1], 3)
    assert series_div(one, TruncatedSeries([1, -1], 3)).coeffs == (1, 1, 1, 1)
    s = TruncatedSeries([0, 0, 1], 6) / TruncatedSeries([1, 0, -4], 6)
    assert s.coeffs == (0, 0, 1, 0, 4, 0, 16)


def test_series_div_zero_constant_raises():
    with pytest.raises(ZeroDivisionError):
        series_div(TruncatedSeries([1], 3), TruncatedSeries([0, 1], 3))


def test_prefactor_for_half_flux():
    bpoly = 1 - 4 * z * z
    b = bpoly.to_series(4)
    zb = bpoly.derivative().shift(1)
    prefactor = 1 - zb.to_series(4) / b / 2
    assert prefactor.coeffs == (1, 0, 4, 0, 16)
    # multiply back: prefactor * b == b - z b' / 2
    assert prefactor * b == (bpoly - zb / 2).to_series(4)


def test_truncation_is_monotone():
    num = TruncatedSeries([1, 2, 3, 4, 5, 6, 7, 8], 7)
    den = TruncatedSeries([1, -1, 2, 0, 1, 3, 0, 1], 7)
    full = num / den
    short = num.truncate(4) / den.truncate(4)
    assert full.truncate(4) == short
    assert (num * den).truncate(3) == num.truncate(3) * den.truncate(3)
    with pytest.raises(ValueError):
        short.truncate(5)


def test_series_power():
    s = TruncatedSeries([1, 1], 5)
    assert (s**3).coeffs == (1, 3, 3, 1, 0, 0)


def test_laurent_arithmetic():
    x = LaurentPoly.monomial(1, 1)
    xinv = LaurentPoly.monomial(1, -1)
    prod = (x + xinv) * (x - xinv)
    assert prod.coeff(2) == 1 and prod.coeff(-2) == -1 and prod.coeff(0) == 0
    assert x * xinv == 1
    assert (x + xinv).lo == -1 and (x + xinv).hi == 1


def test_identity_determinant():
    assert bareiss_determinant([[1, 0], [0, 1]]) == 1
    assert cofactor_determinant([[1, 0], [0, 1]]) == 1


def test_half_flux_walk_matrix_determinant():
    ctx = FluxContext(1, 2)
    zc = Poly([0, ctx.one()])
    m = walk_matrix(ctx, zc, zc, zc, zc)
    # diagonal 1 - 2z cos(pi k); the two off-diagonal contributions add up to -2z
    assert m[0][1] == -2 * zc and m[1][0] == -2 * zc
    assert m[0][0] == 1 - 2 * zc and m[1][1] == 1 + 2 * zc
    delta = bareiss_determinant(m)
    brute = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert delta == brute
    assert delta + Poly.monomial(ctx.one() * 4, 2) == 1 - 4 * zc * zc


def _random_poly_matrix(rng, n, deg=2, lo=-3, hi=3):
    return [[Poly([Fraction(rng.randint(lo, hi)) for _ in range(deg + 1)]) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("seed", range(12))
def test_bareiss_equals_cofactor_on_random_polynomial_matrices(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    m = _random_poly_matrix(rng, n)
    assert exact_determinant(m, "bareiss") == exact_determinant(m, "cofactor")


@pytest.mark.parametrize("seed", range(6))
def test_bareiss_with_zero_pivots(seed):
    rng = random.Random(100 + seed)
    n = 4
    m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
    m[0][0] = Fraction(0)
    m[1][1] = Fraction(0)
    assert bareiss_determinant(m) == cofactor_determinant(m)


def test_singular_matrix():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert bareiss_determinant(m) == 0
    assert bareiss_determinant([[0, 0], [0, 1]]) == 0


@pytest.mark.parametrize("seed", range(5))
def test_transpose_and_cyclic_permutation_preserve_determinant(seed):
    rng = random.Random(7 * seed + 1)
    n = 4
    m = _random_poly_matrix(rng, n, deg=1)
    det = bareiss_determinant(m)
    transposed = [[m[j][i] for j in range(n)] for i in range(n)]
    assert bareiss_determinant(transposed) == det
    shifted = [[m[(i + 1) % n][(j + 1) % n] for j in range(n)] for i in range(n)]
    assert bareiss_determinant(shifted) == det


def test_cyclotomic_matrix_determinant():
    ctx = FluxContext(2, 7)
    w = ctx.zeta(1)
    m = [[w, 1, w * w], [1 - w, 2, 0], [3, w**3, 1]]
    assert bareiss_determinant(m) == cofactor_determinant(m)


def test_tridiagonal_recursion():
    x1, x2 = Poly([0, 2]), Poly([0, -1])
    diag = [Poly([1, k]) for k in range(6)]
    for n in range(1, 7):
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = diag[i]
            if i:
                m[i][i - 1] = -x1
                m[i - 1][i] = -x2
        assert tridiagonal_determinant(diag[:n], -x1, -x2) == bareiss_determinant(m)
    # D_k = u_k D_{k-1} - x1 x2 D_{k-2}
    d = [1, diag[0]]
    for k in range(1, 6):
        d.append(diag[k] * d[-1] - x1 * x2 * d[-2])
    assert tridiagonal_determinant(diag, -x1, -x2) == d[-1]


def test_nested_laurent_determinant():
    x = LaurentPoly.monomial(LaurentPoly.monomial(Poly([1]), 0), 1)
    xinv = LaurentPoly.monomial(LaurentPoly.monomial(Poly([1]), 0), -1)
    m = [[x, 1], [1, xinv]]
    assert cofactor_determinant(m) == 0
