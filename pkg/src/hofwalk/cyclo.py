"""Exact arithmetic in the cyclotomic field Q(w), w = exp(2*pi*i*p/q).

Elements are stored as integer numerator vectors over a common positive
denominator, reduced modulo the q-th cyclotomic polynomial so that equality
is coefficient-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_q, lowest degree first.

    Computed by dividing x^q - 1 by Phi_d for every proper divisor d of q.

    >>> cyclotomic_polynomial(8)
    (1, 0, 0, 0, 1)
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    num = [-1] + [0] * (q - 1) + [1]
    for d in range(1, q):
        if q % d == 0:
            num = _exact_divide_monic(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide_monic(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("division by cyclotomic factor left a remainder")
    return quot


@lru_cache(maxsize=None)
def _reduction_table(q: int) -> tuple[tuple[int, ...], ...]:
    """Rows j = 0..2d-2: coefficient vector of x^j mod Phi_q (length d)."""
    phi = cyclotomic_polynomial(q)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(max(2 * d - 1, q)):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic relation x^d = -sum phi_i x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * phi[i]
    return tuple(rows)


@dataclass(frozen=True)
class FluxContext:
    """Rational flux p/q; the field generator evaluates to exp(2*pi*i*p/q)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.q == 1:
            if self.p not in (0, 1):
                raise ValueError("for q = 1 the only flux is p = 0")
            object.__setattr__(self, "p", 0)
            return
        if not 1 <= self.p < self.q:
            raise ValueError(f"need 1 <= p < q, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime, got p={self.p}, q={self.q}")

    @property
    def degree(self) -> int:
        return len(cyclotomic_polynomial(self.q)) - 1

    @property
    def gamma(self) -> float:
        """Flux angle 2*pi*p/q (float; exact paths never use it)."""
        return 2 * math.pi * self.p / self.q

    @property
    def mirror(self) -> FluxContext:
        return self if self.q <= 2 else FluxContext(self.q - self.p, self.q)

    def zeta(self, k: int = 1) -> CyclotomicNumber:
        """w**k for any integer k."""
        return CyclotomicNumber.zeta_power(self, k)

    def one(self) -> CyclotomicNumber:
        return CyclotomicNumber.from_rational(self, 1)

    def zero(self) -> CyclotomicNumber:
        return CyclotomicNumber.from_rational(self, 0)

    def cos2pi(self, k: int) -> CyclotomicNumber:
        """cos(2*pi*p*k/q) as an exact field element."""
        return (self.zeta(k) + self.zeta(-k)) * Fraction(1, 2)

    def four_sin2(self, m: int) -> CyclotomicNumber:
        """4*sin(pi*m*p/q)**2 = 2 - w**m - w**-m."""
        return 2 - self.zeta(m) - self.zeta(-m)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def coprime_fluxes(q_max: int, include_trivial: bool = True) -> list[FluxContext]:
    """All coprime p/q with q <= q_max, ordered by (q, p)."""
    out = [FluxContext(0, 1)] if include_trivial else []
    for q in range(2, q_max + 1):
        out.extend(FluxContext(p, q) for p in range(1, q) if math.gcd(p, q) == 1)
    return out


def _normalize(nums: Iterable[int], den: int) -> tuple[tuple[int, ...], int]:
    nums = tuple(nums)
    if den < 0:
        nums = tuple(-c for c in nums)
        den = -den
    g = den
    for c in nums:
        if g == 1:
            break
        g = math.gcd(g, c)
    if g > 1:
        nums = tuple(c // g for c in nums)
        den //= g
    if not any(nums):
        den = 1
    return nums, den


@dataclass(frozen=True, eq=False)
class CyclotomicNumber:
    """Immutable element of Q(w) in canonical form modulo Phi_q."""

    ctx: FluxContext
    nums: tuple[int, ...]
    den: int = 1

    # -- construction -------------------------------------------------
    @classmethod
    def _make(cls, ctx: FluxContext, nums: Iterable[int], den: int = 1) -> CyclotomicNumber:
        n, d = _normalize(nums, den)
        return cls(ctx, n, d)

    @classmethod
    def from_rational(cls, ctx: FluxContext, value: Rational) -> CyclotomicNumber:
        value = Fraction(value)
        nums = [0] * ctx.degree
        nums[0] = value.numerator
        return cls._make(ctx, nums, value.denominator)

    @classmethod
    def from_coeffs(cls, ctx: FluxContext, coeffs: Iterable[Rational]) -> CyclotomicNumber:
        """Element sum_j coeffs[j] * w**j; any length, reduced modulo Phi_q."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        ints = [c.numerator * (den // c.denominator) for c in fr]
        return cls._make(ctx, _reduce_full(ctx.q, ints), den)

    @classmethod
    def zeta_power(cls, ctx: FluxContext, k: int) -> CyclotomicNumber:
        return cls(ctx, _reduction_table(ctx.q)[k % ctx.q], 1)

    # -- views --------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def is_real(self) -> bool:
        return self == self.conjugate()

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other: object) -> CyclotomicNumber | None:
        if isinstance(other, CyclotomicNumber):
            if other.ctx != self.ctx:
                raise ValueError(f"mismatched flux contexts {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.ctx, other)
        return None

    def __add__(self, other: object) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CyclotomicNumber._make(
                self.ctx, (a + b for a, b in zip(self.nums, o.nums)), self.den
            )
        return CyclotomicNumber._make(
            self.ctx,
            (a * o.den + b * self.den for a, b in zip(self.nums, o.nums)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber(self.ctx, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other: object) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CyclotomicNumber:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicNumber._make(
                self.ctx,
                (a * other.numerator for a in self.nums),
                self.den * other.denominator,
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.nums, o.nums
        d = len(a)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CyclotomicNumber._make(self.ctx, _reduce_product(self.ctx.q, prod), self.den * o.den)

    __rmul__ = __mul__

    def mul_zeta(self, k: int) -> CyclotomicNumber:
        """self * w**k."""
        k %= self.ctx.q
        if k == 0:
            return self
        return self * CyclotomicNumber.zeta_power(self.ctx, k)

    def conjugate(self) -> CyclotomicNumber:
        """Image under w -> w**-1 (complex conjugation)."""
        q = self.ctx.q
        table = _reduction_table(q)
        out = [0] * len(self.nums)
        for j, c in enumerate(self.nums):
            if c:
                row = table[(-j) % q]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return CyclotomicNumber._make(self.ctx, out, self.den)

    def galois(self, k: int) -> CyclotomicNumber:
        """Image under the field automorphism w -> w**k, gcd(k, q) = 1."""
        q = self.ctx.q
        if math.gcd(k, q) != 1:
            raise ValueError(f"w -> w^{k} is not an automorphism for q = {q}")
        out = [0] * q
        for j, c in enumerate(self.nums):
            out[(j * k) % q] += c
        return CyclotomicNumber._make(self.ctx, _reduce_full(q, out), self.den)

    def quadratic_form(self, max_radicand: int = 10**12) -> tuple[Fraction, Fraction, int] | None:
        """(a, b, d) with self = a + b*sqrt(d), d squarefree, when self has degree <= 2 over Q.

        The conjugates of a quadratic element take at most two values x, x';
        then x + x' and (x - x')^2 are rational.  Returns None otherwise.
        """
        q = self.ctx.q
        orbit = {self.galois(k) for k in range(1, max(q, 2)) if math.gcd(k, q) == 1}
        orbit.add(self)
        if len(orbit) == 1:
            return self.rational(), Fraction(0), 1
        if len(orbit) != 2:
            return None
        other = next(x for x in orbit if x != self)
        half_sum = (self + other) * Fraction(1, 2)
        half_diff_sq = ((self - other) * Fraction(1, 2)) ** 2
        if not (half_sum.is_rational() and half_diff_sq.is_rational()):
            return None
        r = half_diff_sq.rational()
        if r <= 0:
            return None  # imaginary quadratic; not rendered with a real root
        n, m = r.numerator * r.denominator, r.denominator
        if n > max_radicand:
            return None
        f, d = _square_part(n)
        coeff = Fraction(f, m)
        sign = 1 if (self - other).to_complex().real > 0 else -1
        return half_sum.rational(), sign * coeff, d

    def radical_str(self) -> str:
        """Render as a + b√d where possible, otherwise as a polynomial in w."""
        form = self.quadratic_form()
        if form is None:
            return str(self)
        a, b, d = form
        if b == 0 or d == 1:
            return str(a + b)
        if b in (1, -1):
            root = f"√{d}"
        else:
            root = f"{abs(b)}√{d}" if abs(b).denominator == 1 else f"({abs(b)})√{d}"
        if a == 0:
            return ("-" if b < 0 else "") + root
        return f"{a}{'-' if b < 0 else '+'}{root}"

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.from_rational(self.ctx, 1 / self.rational())
        s = _poly_inverse_mod(list(self.coeffs), [Fraction(c) for c in cyclotomic_polynomial(self.ctx.q)])
        return CyclotomicNumber.from_coeffs(self.ctx, s)

    def __truediv__(self, other: object) -> CyclotomicNumber:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> CyclotomicNumber:
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_rational(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        if isinstance(other, CyclotomicNumber):
            return self.ctx == other.ctx and self.den == other.den and self.nums == other.nums
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(Fraction(self.nums[0], self.den))
        return hash((self.ctx, self.nums, self.den))

    # -- numerics -----------------------------------------------------
    def to_mpc(self, precision: int = 30) -> mpmath.mpc:
        """Value at w = exp(2*pi*i*p/q) with `precision` significant digits."""
        with mpmath.workdps(precision + 10):
            w = mpmath.expjpi(mpmath.mpf(2 * self.ctx.p) / self.ctx.q)
            acc = mpmath.mpc(0)
            for c in reversed(self.nums):
                acc = acc * w + c
            return +(acc / self.den)

    def to_complex(self, precision: int = 15) -> complex:
        if precision < 15:
            raise ValueError("precision must be at least 15 digits")
        if precision == 15 and self.ctx.q <= 2:
            return complex(Fraction(self.nums[0], self.den))
        return complex(self.to_mpc(precision))

    def __float__(self) -> float:
        z = self.to_complex()
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        return z.real

    def __complex__(self) -> complex:
        return self.to_complex()

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "q": self.ctx.q,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicNumber:
        ctx = FluxContext(int(data["p"]), int(data["q"]))
        return cls.from_coeffs(ctx, [Fraction(s) for s in data["coeffs"]])

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.ctx}, {self})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "" if j == 0 else ("w" if j == 1 else f"w^{j}")
                if mono and c in (1, -1):
                    terms.append(("-" if c < 0 else "+") + mono)
                else:
                    sign = "-" if c < 0 else "+"
                    terms.append(f"{sign}{abs(c)}" + ("*" + mono if mono else ""))
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s[0] == "+" else s


def _reduce_product(q: int, prod: list[int]) -> list[int]:
    table = _reduction_table(q)
    d = len(table[0])
    out = list(prod[:d]) + [0] * max(0, d - len(prod))
    for j in range(d, len(prod)):
        c = prod[j]
        if c:
            for i, r in enumerate(table[j]):
                if r:
                    out[i] += c * r
    return out


def _reduce_full(q: int, coeffs: list[int]) -> list[int]:
    d = len(cyclotomic_polynomial(q)) - 1
    folded = [0] * q
    for j, c in enumerate(coeffs):
        folded[j % q] += c
    table = _reduction_table(q)
    out = [0] * d
    for j, c in enumerate(folded):
        if c:
            for i, r in enumerate(table[j]):
                out[i] += c * r
    return out


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        quot[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        _poly_trim(a)
    return quot, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(c) for c in out])


def _poly_inverse_mod(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    """s with s*a = 1 mod m, by the extended Euclidean algorithm over Q[x]."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        quot, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible modulo Phi_q")
    c = r1[0]
    return [x / c for x in s1]


def _square_part(n: int) -> tuple[int, int]:
    """n = f^2 * d with d squarefree, by trial division."""
    f, d, k = 1, 1, 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            f *= k
        if n % k == 0:
            n //= k
            d *= k
        k += 1
    return f, d * n


def zeta_sum_check(ctx: FluxContext, j: int) -> CyclotomicNumber:
    """sum_{k=0}^{q-1} w**(j*k); q when q | j, else 0."""
    total = ctx.zero()
    for k in range(ctx.q):
        total = total + ctx.zeta(j * k)
    return total


def as_complex(x: object) -> complex:
    """Float rendering of an int, Fraction or CyclotomicNumber."""
    if isinstance(x, CyclotomicNumber):
        return x.to_complex()
    return complex(x)


def format_float(x: object, digits: int = 12) -> str:
    z = as_complex(x)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


__all__ = [
    "CyclotomicNumber",
    "FluxContext",
    "as_complex",
    "coprime_fluxes",
    "cyclotomic_polynomial",
    "format_float",
    "zeta_sum_check",
]

