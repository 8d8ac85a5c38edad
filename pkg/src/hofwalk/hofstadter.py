"""The spectral route: Harper matrix, eigenvalues, Brillouin-zone traces,
the Chambers relation, density of states and band edges."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .cyclo import FluxContext, coprime_fluxes, format_float
from .numerics import bisect, ellipk_complementary, tanh_sinh
from .spectrum import band_poly_via_determinant

MERGE_TOLERANCE = 1e-8
EDGE_TOLERANCE = 1e-10
SCAN_POINTS = 10_000


def _harper_batch(ctx: FluxContext, kx: np.ndarray, ky: np.ndarray) -> np.ndarray:
    """Stack of q x q Harper matrices, one per (kx, ky) pair."""
    q, p = ctx.q, ctx.p
    kx = np.atleast_1d(np.asarray(kx, dtype=float))
    ky = np.atleast_1d(np.asarray(ky, dtype=float))
    m = np.zeros((kx.size, q, q), dtype=complex)
    for k in range(q):
        m[:, k, k] += 2.0 * np.cos(ky + 2.0 * np.pi * p * k / q)
    for k in range(q - 1):
        m[:, k, k + 1] += 1.0
        m[:, k + 1, k] += 1.0
    # corners close the chain with the Bloch phase; for q = 1 they land on the diagonal
    m[:, 0, q - 1] += np.exp(-1j * q * kx)
    m[:, q - 1, 0] += np.exp(1j * q * kx)
    return m


@dataclass(frozen=True)
class HarperMatrix:
    ctx: FluxContext
    kx: float
    ky: float

    @cached_property
    def entries(self) -> np.ndarray:
        return _harper_batch(self.ctx, np.array([self.kx]), np.array([self.ky]))[0]

    def shifted(self, energy: float) -> np.ndarray:
        """m(E, kx, ky) = H - E."""
        return self.entries - energy * np.eye(self.ctx.q)


def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a stack of real symmetric matrices by cyclic Jacobi rotations.

    Each rotation is applied to the whole stack at once; matrices that are
    already diagonal in the (i, j) slot get the identity rotation.
    """
    a = np.array(a, dtype=float, copy=True)
    if a.ndim == 2:
        return jacobi_eigvalsh(a[None], tol, max_sweeps)[0]
    n = a.shape[-1]
    eye = np.eye(n, dtype=bool)
    scale = np.maximum(np.sqrt(np.sum(a * a, axis=(1, 2))), np.finfo(float).tiny)
    floor = 1e-3 * tol * scale  # rotations below this size cannot change any eigenvalue
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.where(eye, 0.0, a) ** 2, axis=(1, 2)))
        if np.all(off <= tol * scale):
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                aij = a[:, i, j]
                active = np.abs(aij) > floor
                if not np.any(active):
                    continue
                safe = np.where(active, aij, 1.0)
                theta = (a[:, j, j] - a[:, i, i]) / (2.0 * safe)
                big = np.abs(theta) > 1e150
                th = np.where(big, 1.0, theta)
                t = np.where(big, 0.5 / np.where(big, theta, 1.0), np.sign(th) / (np.abs(th) + np.sqrt(1.0 + th * th)))
                t = np.where(theta == 0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ci, cj = a[:, :, i].copy(), a[:, :, j].copy()
                a[:, :, i] = c[:, None] * ci - s[:, None] * cj
                a[:, :, j] = s[:, None] * ci + c[:, None] * cj
                ri, rj = a[:, i, :].copy(), a[:, j, :].copy()
                a[:, i, :] = c[:, None] * ri - s[:, None] * rj
                a[:, j, :] = s[:, None] * ri + c[:, None] * rj
    else:
        raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)


def hermitian_eigvalsh(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of (a stack of) complex Hermitian matrices.

    The q x q matrix A + iB is embedded as the real symmetric [[A, -B], [B, A]],
    whose spectrum is that of A + iB with every value doubled.
    """
    m = np.asarray(m, dtype=complex)
    single = m.ndim == 2
    if single:
        m = m[None]
    a, b = m.real, m.imag
    top = np.concatenate([a, -b], axis=2)
    bottom = np.concatenate([b, a], axis=2)
    doubled = jacobi_eigvalsh(np.concatenate([top, bottom], axis=1))
    vals = doubled[:, ::2]
    return vals[0] if single else vals


def eigenvalues(matrix: HarperMatrix, solver: str = "jacobi") -> np.ndarray:
    """Sorted real eigenvalues of the Harper matrix."""
    if solver == "jacobi":
        return hermitian_eigvalsh(matrix.entries)
    if solver == "lapack":
        return np.linalg.eigvalsh(matrix.entries)
    raise ValueError(f"unknown solver {solver!r}")


def band_energies(ctx: FluxContext, kx, ky, solver: str = "jacobi") -> np.ndarray:
    """Eigenvalues for many (kx, ky) at once; shape (len, q)."""
    m = _harper_batch(ctx, kx, ky)
    return hermitian_eigvalsh(m) if solver == "jacobi" else np.linalg.eigvalsh(m)


def brillouin_grid(grid: int) -> tuple[np.ndarray, np.ndarray]:
    k = -np.pi + 2.0 * np.pi * np.arange(grid) / grid
    kx, ky = np.meshgrid(k, k, indexing="ij")
    return kx.ravel(), ky.ravel()


def trace_moment_numeric(ctx: FluxContext, n: int, grid: int = 64, solver: str = "jacobi") -> float:
    """(1/q) times the Brillouin-zone average of sum_r E_r^n on a uniform grid."""
    if n < 0 or n % 2:
        raise ValueError(f"n must be even and non-negative, got {n}")
    if grid < 16:
        raise ValueError("grid must be at least 16")
    if n == 0:
        return 1.0
    energies = band_energies(ctx, *brillouin_grid(grid), solver=solver)
    return float(np.mean(np.sum(energies**n, axis=1)) / ctx.q)


def trace_moments_numeric(ctx: FluxContext, ns: Iterable[int], grid: int = 64) -> dict[int, float]:
    """Several moments from a single diagonalization pass."""
    energies = band_energies(ctx, *brillouin_grid(grid))
    return {n: (1.0 if n == 0 else float(np.mean(np.sum(energies**n, axis=1)) / ctx.q)) for n in ns}


def chambers_check(ctx: FluxContext, energy: float, kx: float, ky: float) -> float:
    """|det m(E,kx,ky) - det m(E,0,0) + 2(-1)^q (cos q kx - 1 + cos q ky - 1)|."""
    q = ctx.q
    lhs = np.linalg.det(HarperMatrix(ctx, kx, ky).shifted(energy))
    at_zero = np.linalg.det(HarperMatrix(ctx, 0.0, 0.0).shifted(energy))
    sign = -1.0 if q % 2 else 1.0
    rhs = at_zero - 2.0 * sign * (math.cos(q * kx) - 1.0 + math.cos(q * ky) - 1.0)
    return float(abs(lhs - rhs))


class SpectralPolynomial:
    """P(E) = E^q b(1/E) in floats, evaluated two ways.

    ``__call__`` uses the exact coefficients of b; ``transfer`` uses the
    product of 2 x 2 transfer matrices, P(E) = Tr prod_k T_k(E) + 2, which
    stays accurate for large q where the monomial form loses digits.
    """

    def __init__(self, ctx: FluxContext):
        self.ctx = ctx
        self._cos = 2.0 * np.cos(2.0 * np.pi * ctx.p * np.arange(ctx.q) / ctx.q)

    @cached_property
    def coeffs(self) -> np.ndarray:
        """Monomial coefficients of P, lowest degree first (exact b, rounded once)."""
        b = band_poly_via_determinant(self.ctx).float_coeffs()
        coeffs = np.zeros(self.ctx.q + 1)
        coeffs[: len(b)] = b
        # reversal: coefficient of E^(q-i) is b_i
        return coeffs[::-1].copy()

    @cached_property
    def deriv(self) -> np.ndarray:
        return np.polynomial.polynomial.polyder(self.coeffs)

    def __call__(self, energy):
        return np.polynomial.polynomial.polyval(energy, self.coeffs)

    def derivative(self, energy):
        return np.polynomial.polynomial.polyval(energy, self.deriv)

    def transfer(self, energy: float) -> float:
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
        for v in self._cos:
            e = energy - v
            a, b, c, d = e * a - c, e * b - d, a, b
        return a + d + 2.0


def density_of_states(ctx: FluxContext, energy, poly: SpectralPolynomial | None = None):
    """rho(E) = |P'(E)| K(1 - (P(E)/4)^2) / (2 pi^2 q), zero where |P(E)| >= 4."""
    poly = poly or SpectralPolynomial(ctx)
    e = np.asarray(energy, dtype=float)
    pe = poly(e) / 4.0
    inside = np.abs(pe) < 1.0
    # K(1 - x^2) has complementary modulus |x|
    kp = np.where(inside, np.abs(pe), 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = ellipk_complementary(kp)
        rho = np.abs(poly.derivative(e)) * k / (2.0 * np.pi**2 * ctx.q)
    rho = np.where(inside & np.isfinite(rho), rho, 0.0)
    return float(rho) if rho.ndim == 0 else rho


def _refine_edge(f: Callable[[float], float], guess: float, width: float = 1e-7) -> float:
    """Bisect f around an eigenvalue-seeded edge when a sign change is bracketed."""
    for w in (width, 10 * width, 100 * width):
        lo, hi = guess - w, guess + w
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            return lo
        if fhi == 0:
            return hi
        if (flo > 0) != (fhi > 0):
            return bisect(f, lo, hi, tol=1e-15)
    return guess


def raw_band_edges(ctx: FluxContext, solver: str = "jacobi") -> list[tuple[float, float]]:
    """The q bands before merging, from the Chambers extremes.

    P(E) = 2(cos q kx + cos q ky) reaches +4 at k = 0 and -4 at q kx = q ky = pi,
    so the band edges are the eigenvalues of H at those two points.
    """
    q = ctx.q
    edges = np.concatenate(
        [
            band_energies(ctx, np.array([0.0]), np.array([0.0]), solver)[0],
            band_energies(ctx, np.array([np.pi / q]), np.array([np.pi / q]), solver)[0],
        ]
    )
    edges.sort()
    poly = SpectralPolynomial(ctx)
    refined = []
    for e in edges:
        target = 4.0 if abs(poly.transfer(e) - 4.0) < abs(poly.transfer(e) + 4.0) else -4.0
        refined.append(_refine_edge(lambda x, t=target: poly.transfer(x) - t, float(e)))
    refined.sort()
    return [(refined[2 * i], refined[2 * i + 1]) for i in range(q)]


def merge_bands(bands: list[tuple[float, float]], tol: float = MERGE_TOLERANCE) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for lo, hi in sorted(bands):
        if out and lo - out[-1][1] <= tol:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def band_intervals(
    ctx: FluxContext, method: str = "edges", solver: str = "jacobi", samples: int = SCAN_POINTS
) -> list[tuple[float, float]]:
    """Merged bands {E : |P(E)| <= 4}.

    ``edges`` seeds the edges with eigenvalues and polishes them by bisection.
    ``scan`` samples P on ``samples`` grid steps over [-4.5, 4.5] and bisects
    each sign change of P -+ 4; it can miss bands narrower than the grid step.
    """
    if method == "edges":
        return merge_bands(raw_band_edges(ctx, solver))
    if method == "scan":
        return merge_bands(_scan_bands(ctx, samples))
    raise ValueError(f"unknown band method {method!r}")


def _scan_bands(ctx: FluxContext, points: int = SCAN_POINTS) -> list[tuple[float, float]]:
    poly = SpectralPolynomial(ctx)
    grid = np.linspace(-4.5, 4.5, points + 1)
    vals = np.array([poly.transfer(e) for e in grid])
    crossings: list[float] = []
    for target in (4.0, -4.0):
        g = vals - target
        for i in range(points):
            if g[i] == 0:
                crossings.append(float(grid[i]))
            elif (g[i] > 0) != (g[i + 1] > 0) and g[i + 1] != 0:
                crossings.append(
                    bisect(lambda x, t=target: poly.transfer(x) - t, float(grid[i]), float(grid[i + 1]), tol=1e-15)
                )
    crossings = sorted(set(crossings))
    # every gap between consecutive crossings is entirely inside or outside;
    # the slack keeps rounding noise at a touching point from opening a false gap
    return [
        (lo, hi)
        for lo, hi in zip(crossings, crossings[1:])
        if abs(poly.transfer(0.5 * (lo + hi))) <= 4.0 + 1e-12
    ]


class DensityOfStates:
    """rho_{p/q}(E) on its bands, with band-wise tanh-sinh integration."""

    def __init__(self, ctx: FluxContext):
        self.ctx = ctx
        self.poly = SpectralPolynomial(ctx)
        self.raw_bands = raw_band_edges(ctx)
        self.bands = merge_bands(self.raw_bands)

    def __call__(self, energy):
        return density_of_states(self.ctx, energy, self.poly)

    density = __call__

    def _breakpoints(self) -> list[float]:
        """Interior zeros of P, where K has its logarithmic singularity.

        P = 0 means cos q kx + cos q ky = 0, reached at q kx = q ky = pi/2.
        """
        q = self.ctx.q
        zeros = band_energies(self.ctx, np.array([np.pi / (2 * q)]), np.array([np.pi / (2 * q)]))[0]
        return sorted(float(_refine_edge(self.poly.transfer, float(z))) for z in zeros)

    def pieces(self) -> list[tuple[float, float]]:
        cuts = self._breakpoints()
        out = []
        for lo, hi in self.raw_bands:
            inner = [c for c in cuts if lo < c < hi]
            points = [lo, *inner, hi]
            out.extend((a, b) for a, b in zip(points, points[1:]) if b > a)
        return out

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray] | None = None, tol: float = 1e-12) -> float:
        """int rho(E) fn(E) dE over the spectrum (fn defaults to 1)."""
        def integrand(e: np.ndarray) -> np.ndarray:
            r = self(e)
            return r if fn is None else r * fn(e)

        return float(sum(tanh_sinh(integrand, a, b, tol=tol) for a, b in self.pieces()))

    def moment(self, n: int, tol: float = 1e-12) -> float:
        return self.integrate(lambda e: e**n, tol=tol)


def butterfly_rows(
    q_max: int, method: str = "edges", solver: str = "lapack", samples: int = SCAN_POINTS
) -> list[tuple[int, int, int, float, float]]:
    """(p, q, band_index, E_lo, E_hi) for every coprime p/q with q <= q_max, plus 0/1."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    rows = []
    computed: dict[tuple[int, int], list[tuple[float, float]]] = {}
    for ctx in coprime_fluxes(q_max, include_trivial=True):
        # p and q - p share a spectrum; compute it once so the rows agree exactly
        key = (min(ctx.p, ctx.q - ctx.p), ctx.q)
        if key not in computed:
            computed[key] = band_intervals(ctx, method=method, solver=solver, samples=samples)
        for i, (lo, hi) in enumerate(computed[key]):
            rows.append((ctx.p, ctx.q, i, lo, hi))
    rows.sort(key=lambda r: (r[1], r[0], r[2]))
    return rows


CSV_HEADER = "p,q,band_index,E_lo,E_hi"


def butterfly_export(
    q_max: int, samples: int = SCAN_POINTS, method: str = "edges", solver: str = "lapack"
) -> str:
    """CSV text of the butterfly bands; ``samples`` sets the grid for ``method='scan'``."""
    lines = [CSV_HEADER]
    for p, q, i, lo, hi in butterfly_rows(q_max, method=method, solver=solver, samples=samples):
        lines.append(f"{p},{q},{i},{format_float(lo)},{format_float(hi)}")
    return "\n".join(lines) + "\n"
