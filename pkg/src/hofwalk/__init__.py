"""Algebraic-area walk counts at roots of unity and Hofstadter moments at rational flux."""

from .asympt import (
    GrowthConstants,
    UnsupportedSingularityError,
    asymptotic_fit_check,
    dominant_singularities,
    growth_constants,
    radius_of_convergence,
)
from .cyclo import CyclotomicNumber, FluxContext, coprime_fluxes, cyclotomic_polynomial
from .hofstadter import (
    DensityOfStates,
    HarperMatrix,
    band_intervals,
    butterfly_export,
    chambers_check,
    density_of_states,
    eigenvalues,
    trace_moment_numeric,
)
from .moments import (
    MomentTable,
    moment_table,
    moments_by_dp,
    moments_by_series,
    moments_by_sum,
    moments_by_sum_formula,
    recurrence_check_q4,
)
from .series import LaurentPoly, Poly, TruncatedSeries, bareiss_determinant, cofactor_determinant
from .spectrum import (
    BandPolynomial,
    band_poly_via_determinant,
    band_poly_via_kreft,
    kreft_via_nested_sums,
    numerator_identity_check,
    secular_polynomial,
)
from .walks import algebraic_area, closed_Zn_dp, enumerate_Z, recursion_Z

__version__ = "0.1.0"

__all__ = [
    "BandPolynomial",
    "CyclotomicNumber",
    "DensityOfStates",
    "FluxContext",
    "GrowthConstants",
    "HarperMatrix",
    "LaurentPoly",
    "MomentTable",
    "Poly",
    "TruncatedSeries",
    "UnsupportedSingularityError",
    "algebraic_area",
    "asymptotic_fit_check",
    "band_intervals",
    "band_poly_via_determinant",
    "band_poly_via_kreft",
    "bareiss_determinant",
    "butterfly_export",
    "chambers_check",
    "closed_Zn_dp",
    "cofactor_determinant",
    "coprime_fluxes",
    "cyclotomic_polynomial",
    "density_of_states",
    "dominant_singularities",
    "eigenvalues",
    "enumerate_Z",
    "growth_constants",
    "kreft_via_nested_sums",
    "moment_table",
    "moments_by_dp",
    "moments_by_series",
    "moments_by_sum",
    "moments_by_sum_formula",
    "numerator_identity_check",
    "radius_of_convergence",
    "recursion_Z",
    "recurrence_check_q4",
    "secular_polynomial",
    "trace_moment_numeric",
]
