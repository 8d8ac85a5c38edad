import math
from fractions import Fraction

import pytest
from _formulas import z_half_flux_moment, z_third_flux_moment

from hofwalk.cyclo import FluxContext, coprime_fluxes
from hofwalk.moments import (
    MomentTable,
    dos_generating_identity_check,
    generating_function_float,
    moment_table,
    moments_by_dp,
    moments_by_series,
    moments_by_sum,
    moments_by_sum_formula,
    prefactor_series,
    recurrence_check_q4,
)
from hofwalk.series import TruncatedSeries
from hofwalk.spectrum import band_poly_via_determinant
from hofwalk.walks import closed_Zn_dp

HALF = FluxContext(1, 2)
THIRD = FluxContext(1, 3)
QUARTER = FluxContext(1, 4)


def test_eighth_flux_series():
    ctx = FluxContext(1, 8)
    r2 = ctx.zeta(1) + ctx.zeta(-1)
    t = moments_by_series(ctx, 8)
    assert t.values == [1, 0, 4, 0, 28 + 4 * r2, 0, 232 + 72 * r2, 0, 2140 + 960 * r2]
    assert moments_by_sum_formula(ctx, 8) == 2140 + 960 * r2


def test_small_examples():
    assert moments_by_series(HALF, 4)[4] == 20
    assert moments_by_sum_formula(HALF, 4) == 20
    assert moments_by_sum_formula(THIRD, 6) == 148


def test_trivial_flux_gives_squared_central_binomials():
    t = moments_by_series(FluxContext(0, 1), 12)
    for n in range(0, 13, 2):
        assert t[n] == math.comb(n, n // 2) ** 2
    for n in range(2, 11, 2):
        assert closed_Zn_dp(n, FluxContext(0, 1)) == math.comb(n, n // 2) ** 2


def test_half_and_third_flux_closed_forms():
    half = moments_by_series(HALF, 40)
    third = moments_by_series(THIRD, 40)
    for n in range(2, 41, 2):
        assert half[n] == z_half_flux_moment(n)
        assert third[n] == z_third_flux_moment(n)
        assert third[n].is_rational()
    assert z_third_flux_moment(6) == 148


def test_odd_indices_vanish():
    t = moments_by_series(FluxContext(2, 7), 13)
    assert all(t.values[n] == 0 for n in range(1, 14, 2))
    assert t[-2] == 0 and t[3] == 0


@pytest.mark.parametrize("ctx", coprime_fluxes(8), ids=str)
def test_route_agreement(ctx):
    series = moments_by_series(ctx, 14)
    assert moments_by_sum(ctx, 14).values == series.values
    assert moments_by_dp(ctx, 14).values == series.values


def test_moment_table_routes_and_provenance():
    t = moment_table(THIRD, 6, route="sum")
    assert t.routes[6] == "sum"
    assert moment_table(THIRD, 6).routes[0] == "series"
    with pytest.raises(ValueError, match="route"):
        moment_table(THIRD, 6, route="guess")


def test_sum_formula_domain():
    for n in (0, -2, 3):
        with pytest.raises(ValueError):
            moments_by_sum_formula(THIRD, n)


def test_quarter_flux_recurrence():
    t = moments_by_series(QUARTER, 40)
    report = recurrence_check_q4(t)
    assert report.holds and report.first_failure is None
    assert {2, 16, 28, 40} <= set(report.checked)
    assert recurrence_check_q4(moments_by_series(FluxContext(3, 4), 30)).holds


def test_recurrence_detects_corruption():
    t = moments_by_series(QUARTER, 30)
    values = list(t.values)
    values[16] = values[16] + 1
    report = recurrence_check_q4(MomentTable(QUARTER, values))
    assert not report.holds and report.first_failure == 16
    with pytest.raises(ValueError):
        recurrence_check_q4(moments_by_series(THIRD, 30))


def test_mirror_fluxes_have_equal_moments():
    for ctx in coprime_fluxes(9, include_trivial=False):
        a, b = moments_by_series(ctx, 16), moments_by_series(ctx.mirror, 16)
        assert [v.nums for v in a.values] == [v.nums for v in b.values]
        for v in a.values:
            assert v.is_real()
            assert v.galois(ctx.q - 1) == v


def test_prefactor_is_a_logarithmic_derivative():
    # 1 - z b'/(q b) = (z/q) d/dz log(z^q / b) = (z/q)(q/z - b'/b)
    for ctx in (THIRD, FluxContext(2, 5), FluxContext(1, 6)):
        N = 12
        b = band_poly_via_determinant(ctx).b
        log_derivative = b.derivative().to_series(N) / b.to_series(N)
        rhs = ctx.one() - TruncatedSeries([0] + list(log_derivative.coeffs[:N]), N) * Fraction(1, ctx.q)
        assert prefactor_series(ctx, N) == rhs


def test_growth_is_monotone():
    for ctx in coprime_fluxes(8, include_trivial=False):
        f = moments_by_series(ctx, 24).floats()
        for n in range(2, 23, 2):
            assert f[n + 2] > f[n] > 0


def test_generating_function_matches_series_sum():
    for ctx, z in ((HALF, 0.1), (THIRD, 0.2), (FluxContext(2, 5), 0.15)):
        f = moments_by_series(ctx, 120).floats()
        partial = sum(c * z**n for n, c in enumerate(f))
        assert generating_function_float(ctx, z) == pytest.approx(partial, rel=1e-12)


def test_dos_identity_examples():
    assert dos_generating_identity_check(HALF, 0.1) < 1e-6
    assert dos_generating_identity_check(THIRD, 0.2) < 1e-6
    assert dos_generating_identity_check(THIRD, 0.0) < 1e-9
    assert generating_function_float(THIRD, 0.0) == 1.0


def test_dos_identity_rejects_points_outside_the_disc():
    with pytest.raises(ValueError, match="radius"):
        dos_generating_identity_check(HALF, 0.5)
