"""Dense polynomials, truncated power series and Laurent polynomials.

Coefficients may be any exact ring elements that interoperate with ``int``
(``int``, ``Fraction``, :class:`~hofwalk.cyclo.CyclotomicNumber`, or another
polynomial type for nested multivariate use).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

ZERO_DEGREE = -1  # degree of the zero polynomial


def _is_zero(c: Any) -> bool:
    return c == 0


def _div(a: Any, b: Any) -> Any:
    if isinstance(b, (int, Fraction)) and isinstance(a, (int, Fraction)):
        r = Fraction(a) / b
        return r.numerator if r.denominator == 1 else r
    return a / b


def _trim(coeffs: list) -> list:
    while coeffs and _is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


class Poly:
    """Univariate polynomial, coeffs[i] multiplies z**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()) -> None:
        self.coeffs = tuple(_trim(list(coeffs)))

    @classmethod
    def monomial(cls, coeff: Any, k: int) -> Poly:
        return cls([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lift(self, other: Any) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (TruncatedSeries, LaurentPoly)):
            return None
        return Poly([other])

    def __add__(self, other: Any) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: Any) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> Poly:
        return (-self) + other

    def __mul__(self, other: Any) -> Poly:
        if not isinstance(other, (Poly, TruncatedSeries, LaurentPoly)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out: list = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    def __rmul__(self, other: Any) -> Poly:
        return Poly([other * c for c in self.coeffs])

    def __truediv__(self, other: Any) -> Poly:
        """Division by a scalar; use ``divmod`` or ``exact_div`` for polynomials."""
        if isinstance(other, (Poly, TruncatedSeries, LaurentPoly)):
            return NotImplemented
        return Poly([_div(c, other) for c in self.coeffs])

    def __pow__(self, k: int) -> Poly:
        result = Poly([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: Any) -> bool:
        o = self._lift(other) if not isinstance(other, (TruncatedSeries, LaurentPoly)) else None
        if o is None:
            return NotImplemented
        return len(self.coeffs) == len(o.coeffs) and all(
            _is_zero(x - y) for x, y in zip(self.coeffs, o.coeffs)
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Any) -> Any:
        acc: Any = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, k: int) -> Poly:
        """p(z**k)."""
        if k < 1:
            raise ValueError("k must be positive")
        out: list = [0] * (k * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(out)

    def reverse(self, n: int) -> Poly:
        """z**n * p(1/z); requires n >= degree."""
        if n < self.degree:
            raise ValueError("reversal length below degree")
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return Poly(reversed(padded))

    def shift(self, k: int) -> Poly:
        return Poly([0] * k + list(self.coeffs)) if self.coeffs else Poly()

    def map(self, fn: Callable[[Any], Any]) -> Poly:
        return Poly([fn(c) for c in self.coeffs])

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        """Division with remainder; the divisor's leading coefficient must be invertible."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.coeffs[-1]
        quot: list = [0] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if _is_zero(c):
                continue
            f = _div(c, lead)
            quot[i - db] = f
            for j, bj in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - f * bj
        return Poly(quot), Poly(rem[:db] if db > 0 else [])

    def exact_div(self, other: Poly) -> Poly:
        quot, rem = self.divmod(other)
        if not rem.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return quot

    def to_series(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, order)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class TruncatedSeries:
    """Power series known modulo z**(order+1)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int) -> None:
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.order + 1

    def _lift(self, other: Any) -> TruncatedSeries | None:
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Poly):
            return TruncatedSeries(other.coeffs, self.order)
        if isinstance(other, LaurentPoly):
            return None
        return TruncatedSeries([other], self.order)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        return TruncatedSeries(self.coeffs, order)

    def __add__(self, other: Any) -> TruncatedSeries:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return TruncatedSeries([self.coeffs[i] + o.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other: Any) -> TruncatedSeries:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other: Any) -> TruncatedSeries:
        if not isinstance(other, (TruncatedSeries, Poly, LaurentPoly)):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out: list = [0] * (n + 1)
        for i in range(n + 1):
            x = a[i]
            if _is_zero(x):
                continue
            for j in range(n + 1 - i):
                y = b[j]
                if not _is_zero(y):
                    out[i + j] = out[i + j] + x * y
        return TruncatedSeries(out, n)

    def __rmul__(self, other: Any) -> TruncatedSeries:
        if isinstance(other, Poly):
            return self * other
        return TruncatedSeries([other * c for c in self.coeffs], self.order)

    def __truediv__(self, other: Any) -> TruncatedSeries:
        if not isinstance(other, (TruncatedSeries, Poly)):
            return TruncatedSeries([_div(c, other) for c in self.coeffs], self.order)
        return series_div(self, self._lift(other))

    def __rtruediv__(self, other: Any) -> TruncatedSeries:
        return series_div(TruncatedSeries([other], self.order), self)

    def __pow__(self, k: int) -> TruncatedSeries:
        result = TruncatedSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(_is_zero(self.coeffs[i] - other.coeffs[i]) for i in range(n + 1))

    __hash__ = None  # type: ignore[assignment]

    def derivative(self) -> TruncatedSeries:
        """Derivative; the result is known to order - 1."""
        if self.order == 0:
            return TruncatedSeries([0], 0)
        return TruncatedSeries([i * self.coeffs[i] for i in range(1, self.order + 1)], self.order - 1)

    def shift(self, k: int) -> TruncatedSeries:
        """z**k * self at the same order."""
        return TruncatedSeries([0] * k + list(self.coeffs), self.order)

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r}, order={self.order})"


def series_div(num: TruncatedSeries, den: TruncatedSeries) -> TruncatedSeries:
    """num / den to the common order; den must have an invertible constant term."""
    n = min(num.order, den.order)
    d0 = den.coeffs[0]
    if _is_zero(d0):
        raise ZeroDivisionError("series division by a series with zero constant term")
    inv0 = _div(1, d0)
    out: list = []
    dc = den.coeffs
    for k in range(n + 1):
        acc = num.coeffs[k]
        for j in range(1, k + 1):
            if not _is_zero(dc[j]):
                acc = acc - dc[j] * out[k - j]
        out.append(acc * inv0)
    return TruncatedSeries(out, n)


class LaurentPoly:
    """Laurent polynomial: coeffs[i] multiplies t**(lo + i)."""

    __slots__ = ("lo", "coeffs")

    def __init__(self, coeffs: Iterable = (), lo: int = 0) -> None:
        cs = _trim(list(coeffs))
        start = 0
        while start < len(cs) and _is_zero(cs[start]):
            start += 1
        self.coeffs = tuple(cs[start:])
        self.lo = lo + start if self.coeffs else 0

    @classmethod
    def monomial(cls, coeff: Any, k: int) -> LaurentPoly:
        return cls([coeff], k)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def coeff(self, k: int) -> Any:
        i = k - self.lo
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lift(self, other: Any) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, TruncatedSeries):
            return None
        return LaurentPoly([other], 0)

    def __add__(self, other: Any) -> LaurentPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        lo = min(self.lo, o.lo)
        hi = max(self.hi, o.hi)
        out: list = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.lo - lo + i] = c
        for i, c in enumerate(o.coeffs):
            j = o.lo - lo + i
            out[j] = out[j] + c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly([-c for c in self.coeffs], self.lo)

    def __sub__(self, other: Any) -> LaurentPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: Any) -> LaurentPoly:
        if not isinstance(other, (LaurentPoly, TruncatedSeries)):
            return LaurentPoly([c * other for c in self.coeffs], self.lo)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out: list = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if _is_zero(x):
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return LaurentPoly(out, self.lo + other.lo)

    def __rmul__(self, other: Any) -> LaurentPoly:
        return LaurentPoly([other * c for c in self.coeffs], self.lo)

    def __eq__(self, other: Any) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self - o
        return d.is_zero()

    __hash__ = None  # type: ignore[assignment]

    def map(self, fn: Callable[[Any], Any]) -> LaurentPoly:
        return LaurentPoly([fn(c) for c in self.coeffs], self.lo)

    def __repr__(self) -> str:
        return f"LaurentPoly({list(self.coeffs)!r}, lo={self.lo})"


# -- determinants -------------------------------------------------------------


def _square(matrix: Sequence[Sequence[Any]]) -> list[list[Any]]:
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    return rows


def cofactor_determinant(matrix: Sequence[Sequence[Any]]) -> Any:
    """Division-free Laplace expansion along rows, memoized over column subsets.

    O(n 2^n) ring operations; works over any commutative ring.
    """
    rows = _square(matrix)
    n = len(rows)
    if n == 0:
        return 1

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> Any:
        # determinant of rows[row:] restricted to the column bitmask `cols`
        if row == n:
            return 1
        total: Any = 0
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = rows[row][c]
            if not _is_zero(entry):
                term = entry * minor(row + 1, cols & ~(1 << c))
                total = total + term if sign > 0 else total - term
            sign = -sign
        return total

    return minor(0, (1 << n) - 1)


def bareiss_determinant(matrix: Sequence[Sequence[Any]]) -> Any:
    """Fraction-free Bareiss elimination.

    Needs exact division in the coefficient ring (Poly over a field,
    CyclotomicNumber, Fraction); uses row swaps for zero pivots.
    """
    a = _square(matrix)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev: Any = 1
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(a[r][k]):
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0 * a[0][0]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact_quotient(num, prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def _exact_quotient(num: Any, den: Any) -> Any:
    if isinstance(den, int) and den == 1:
        return num
    if isinstance(num, Poly):
        if not isinstance(den, Poly):
            den = Poly([den])
        return num.exact_div(den)
    return _div(num, den)


def exact_determinant(matrix: Sequence[Sequence[Any]], method: str = "bareiss") -> Any:
    if method == "bareiss":
        return bareiss_determinant(matrix)
    if method == "cofactor":
        return cofactor_determinant(matrix)
    raise ValueError(f"unknown determinant method {method!r}")


def tridiagonal_determinant(diag: Sequence[Any], lower: Any, upper: Any) -> Any:
    """D_k = u_k D_{k-1} - lower*upper*D_{k-2} for constant off-diagonals."""
    d_prev: Any = 1
    d: Any = 1
    for k, u in enumerate(diag):
        if k == 0:
            d_prev, d = d, u
        else:
            d_prev, d = d, u * d - lower * upper * d_prev
    return d
