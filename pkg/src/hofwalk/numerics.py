"""Float-side helpers: elliptic K by the AGM, tanh-sinh quadrature, and an
Aberth-Ehrlich polynomial root finder."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_AGM_MAX_ITER = 64


def agm(a, b):
    """Arithmetic-geometric mean, elementwise on arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for _ in range(_AGM_MAX_ITER):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(np.abs(a - b) <= 1e-16 * np.abs(a)):
            break
    return a


def ellipk_complementary(kp):
    """K as a function of the complementary modulus k' = sqrt(1 - m).

    Avoids the cancellation in 1 - m near the logarithmic singularity m -> 1.
    """
    kp = np.asarray(kp, dtype=float)
    with np.errstate(divide="ignore"):
        # agm(1, 0) only halves toward 0 and would return a huge finite value
        return np.where(kp > 0, np.pi / (2.0 * agm(1.0, kp)), np.inf)


def ellipk(m):
    """Complete elliptic integral of the first kind, parameter convention:
    K(m) = int_0^1 dt / sqrt((1 - t^2)(1 - m t^2)), m < 1."""
    m = np.asarray(m, dtype=float)
    if np.any(m >= 1):
        raise ValueError("K(m) diverges for m >= 1")
    out = ellipk_complementary(np.sqrt(1.0 - m))
    return float(out) if out.ndim == 0 else out


def tanh_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_level: int = 12,
) -> float:
    """Double-exponential quadrature on [a, b]; tolerates integrable endpoint singularities.

    ``f`` receives an array of abscissas.  Nodes are formed from the distance
    to the nearer endpoint so they never collapse onto a or b.
    """
    if b <= a:
        return 0.0 if a == b else -tanh_sinh(f, b, a, tol, max_level)
    half = 0.5 * (b - a)
    t_max = 3.2  # beyond this the node gap drops under 1e-16 of the half-width
    h = 0.5
    estimate = None
    total = 0.0
    for level in range(max_level + 1):
        if level == 0:
            t = np.arange(-t_max, t_max + h / 2, h)
        else:
            h /= 2
            t = np.arange(-t_max + h, t_max, 2 * h)
        u = 0.5 * np.pi * np.sinh(t)
        # distance of the node to the nearer endpoint, in units of `half`
        gap = 2.0 / (np.exp(2.0 * np.abs(u)) + 1.0)
        x = np.where(t < 0, a + half * gap, b - half * gap)
        w = 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
        keep = (gap > 0) & (x > a) & (x < b)
        vals = np.zeros_like(x)
        if np.any(keep):
            vals[keep] = f(x[keep])
        total += float(np.sum(w * vals))
        new = half * h * total
        if estimate is not None and abs(new - estimate) <= tol * max(1.0, abs(new)):
            return new
        estimate = new
    return estimate


def aberth_roots(coeffs, tol: float = 1e-13, max_iter: int = 500) -> np.ndarray:
    """All complex roots of sum_i coeffs[i] x**i (lowest degree first).

    Deterministic start on a rotated circle; the rotation keeps starting
    points off the real and imaginary symmetry axes.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = len(c) - 1
    if deg < 1:
        return np.array([], dtype=complex)
    monic = c / c[-1]
    p = monic[::-1]  # highest degree first for np.polyval
    dp = np.polyder(p)
    # largest |a_{n-k}|^(1/k): half the Fujiwara root bound
    ks = np.arange(1, deg + 1)
    radius = np.max(np.abs(monic[deg - ks]) ** (1.0 / ks))
    radius = radius if radius > 0 else 1.0
    k = np.arange(deg)
    z = radius * np.exp(1j * (2 * np.pi * k / deg + 0.4))
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        pv = np.polyval(p, z)
        dv = np.polyval(dp, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            rep = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * rep)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        scale = np.polyval(np.abs(p), np.abs(z))
        residual = np.abs(np.polyval(p, z))
        if np.all((residual <= max(tol, 8 * eps) * scale) | (np.abs(step) <= 4 * eps * np.abs(z))):
            return z
    raise RuntimeError(f"Aberth iteration did not converge in {max_iter} steps (degree {deg})")


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Root of f in [lo, hi] given a sign change (or exact zero) at the ends."""
    flo = f(lo)
    if flo == 0:
        return lo
    fhi = f(hi)
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bisection needs a sign change")
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if mid in (lo, hi) and hi - lo <= math.ulp(mid) * 2:
            break
    return 0.5 * (lo + hi)
