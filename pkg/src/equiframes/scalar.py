"""Exact arithmetic for frame entries and Gram computations.

Values live in Z[zeta_m][sqrt2, sqrt3] / 2^k: a cyclotomic integer part for
the roots of unity, plus the quadratic surds sqrt(2), sqrt(3) and their
product sqrt(6), over power-of-two denominators.  Every matrix entry and
every Gram value in this package is one of these numbers, so equality,
zero tests and conjugation are exact (no epsilon).
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


def _poly_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def _poly_divmod_exact(n: list[int], d: tuple[int, ...]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of integer polynomials; d must be monic."""
    assert d[-1] == 1
    n = list(n)
    q = [0] * max(1, len(n) - len(d) + 1)
    for i in range(len(n) - 1, len(d) - 2, -1):
        c = n[i]
        if c:
            q[i - len(d) + 1] = c
            for t, dc in enumerate(d):
                n[i - len(d) + 1 + t] -= c * dc
    return q, n[: len(d) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (constant first) of the m-th cyclotomic polynomial.

    Computed by exact division of x^m - 1 by the product of the cyclotomic
    polynomials of the proper divisors of m.
    """
    if m < 1:
        raise ValueError(f"cyclotomic order must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod_exact(poly, cyclotomic_poly(d))
            assert not any(r), f"non-exact cyclotomic division at m={m}, d={d}"
            while len(q) > 1 and q[-1] == 0:
                q.pop()
            poly = q
    return tuple(poly)


@lru_cache(maxsize=None)
def _unit_roots(m: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * j / m) for j in range(m))


class CycInt:
    """Cyclotomic integer: an element of Z[zeta_m] in the power basis.

    ``coeffs`` has length deg(Phi_m) and stores coordinates in the basis
    1, zeta, ..., zeta^(deg-1); arithmetic always reduces modulo Phi_m, so
    coefficient-wise equality is faithful at a fixed order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs) -> None:
        deg = len(cyclotomic_poly(order)) - 1
        cs = list(coeffs)
        if len(cs) > deg:
            phi = cyclotomic_poly(order)
            for i in range(len(cs) - 1, deg - 1, -1):
                c = cs[i]
                if c:
                    cs[i] = 0
                    for t in range(deg):
                        cs[i - deg + t] -= c * phi[t]
            cs = cs[:deg]
        elif len(cs) < deg:
            cs.extend([0] * (deg - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def from_int(cls, n: int, order: int = 1) -> CycInt:
        return cls(order, [n])

    @classmethod
    def root(cls, order: int, exponent: int = 1) -> CycInt:
        """zeta_order ** exponent."""
        e = exponent % order
        return cls(order, [0] * e + [1])

    def promote(self, order: int) -> CycInt:
        """Re-express at a larger root order (current order must divide it)."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot promote order {self.order} to {order}")
        step = order // self.order
        out = [0] * order
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * step] += c
        return CycInt(order, out)

    def _common(self, other: CycInt) -> tuple[CycInt, CycInt]:
        if self.order == other.order:
            return self, other
        m = self.order * other.order // gcd(self.order, other.order)
        return self.promote(m), other.promote(m)

    def __add__(self, other: CycInt) -> CycInt:
        x, y = self._common(other)
        return CycInt(x.order, [a + b for a, b in zip(x.coeffs, y.coeffs)])

    def __sub__(self, other: CycInt) -> CycInt:
        x, y = self._common(other)
        return CycInt(x.order, [a - b for a, b in zip(x.coeffs, y.coeffs)])

    def __neg__(self) -> CycInt:
        return CycInt(self.order, [-a for a in self.coeffs])

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.order, [a * other for a in self.coeffs])
        x, y = self._common(other)
        return CycInt(x.order, _poly_mul(x.coeffs, y.coeffs))

    __rmul__ = __mul__

    def conjugate(self) -> CycInt:
        m = self.order
        out = [0] * m
        for i, c in enumerate(self.coeffs):
            if c:
                out[(m - i) % m] += c
        return CycInt(m, out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        roots = _unit_roots(self.order)
        return sum((c * roots[i] for i, c in enumerate(self.coeffs) if c), 0j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycInt):
            return NotImplemented
        x, y = self._common(other)
        return x.coeffs == y.coeffs

    def __repr__(self) -> str:
        return f"CycInt(order={self.order}, coeffs={list(self.coeffs)})"


@lru_cache(maxsize=None)
def _surd_embeddings(order: int) -> tuple[CycInt, CycInt, CycInt]:
    """sqrt2, sqrt3, sqrt6 as cyclotomic integers at an order divisible by 24."""
    assert order % 24 == 0
    s2 = CycInt.root(order, order // 8) + CycInt.root(order, 7 * order // 8)
    s3 = CycInt.root(order, order // 12) + CycInt.root(order, 11 * order // 12)
    return s2, s3, s2 * s3


_SQRT2_F = 2.0 ** 0.5
_SQRT3_F = 3.0 ** 0.5
_SQRT6_F = 6.0 ** 0.5


class ExtScalar:
    """(a + b*sqrt2 + c*sqrt3 + d*sqrt6) / 2^k with cyclotomic a, b, c, d.

    Canonical form keeps k minimal: either k = 0 or some component has an
    odd coefficient.  All operations are pure; instances are immutable and
    safe to share between workers.
    """

    __slots__ = ("a", "b", "c", "d", "k")

    def __init__(self, a: CycInt, b: CycInt, c: CycInt, d: CycInt, k: int = 0) -> None:
        if k < 0:
            raise ValueError("denominator exponent must be non-negative")
        orders = {a.order, b.order, c.order, d.order}
        if len(orders) > 1:
            m = 1
            for o in orders:
                m = m * o // gcd(m, o)
            a, b, c, d = (x.promote(m) for x in (a, b, c, d))
        while k > 0 and all(
            cf % 2 == 0 for x in (a, b, c, d) for cf in x.coeffs
        ):
            a, b, c, d = (
                CycInt(x.order, [cf // 2 for cf in x.coeffs]) for x in (a, b, c, d)
            )
            k -= 1
        self.a, self.b, self.c, self.d, self.k = a, b, c, d, k

    @property
    def order(self) -> int:
        return self.a.order

    @classmethod
    def from_int(cls, n: int, order: int = 1, k: int = 0) -> ExtScalar:
        z = CycInt.from_int(0, order)
        return cls(CycInt.from_int(n, order), z, z, z, k)

    @classmethod
    def from_cyc(cls, a: CycInt, k: int = 0) -> ExtScalar:
        z = CycInt.from_int(0, a.order)
        return cls(a, z, z, z, k)

    @classmethod
    def root(cls, order: int, exponent: int = 1) -> ExtScalar:
        return cls.from_cyc(CycInt.root(order, exponent))

    @classmethod
    def sqrt2(cls, order: int = 1, k: int = 0) -> ExtScalar:
        z = CycInt.from_int(0, order)
        return cls(z, CycInt.from_int(1, order), z, z, k)

    @classmethod
    def sqrt3(cls, order: int = 1, k: int = 0) -> ExtScalar:
        z = CycInt.from_int(0, order)
        return cls(z, z, CycInt.from_int(1, order), z, k)

    @classmethod
    def sqrt6(cls, order: int = 1, k: int = 0) -> ExtScalar:
        z = CycInt.from_int(0, order)
        return cls(z, z, z, CycInt.from_int(1, order), k)

    def promote(self, order: int) -> ExtScalar:
        if order == self.order:
            return self
        return ExtScalar(
            self.a.promote(order),
            self.b.promote(order),
            self.c.promote(order),
            self.d.promote(order),
            self.k,
        )

    def _common(self, other: ExtScalar) -> tuple[ExtScalar, ExtScalar]:
        if self.order == other.order:
            return self, other
        m = self.order * other.order // gcd(self.order, other.order)
        return self.promote(m), other.promote(m)

    def _scaled_components(self, k: int) -> tuple[CycInt, CycInt, CycInt, CycInt]:
        f = 1 << (k - self.k)
        if f == 1:
            return self.a, self.b, self.c, self.d
        return self.a * f, self.b * f, self.c * f, self.d * f

    def __add__(self, other: ExtScalar) -> ExtScalar:
        x, y = self._common(other)
        k = max(x.k, y.k)
        xa, xb, xc, xd = x._scaled_components(k)
        ya, yb, yc, yd = y._scaled_components(k)
        return ExtScalar(xa + ya, xb + yb, xc + yc, xd + yd, k)

    def __sub__(self, other: ExtScalar) -> ExtScalar:
        return self + (-other)

    def __neg__(self) -> ExtScalar:
        return ExtScalar(-self.a, -self.b, -self.c, -self.d, self.k)

    def __mul__(self, other: ExtScalar | int) -> ExtScalar:
        if isinstance(other, int):
            return ExtScalar(self.a * other, self.b * other, self.c * other,
                             self.d * other, self.k)
        x, y = self._common(other)
        a1, b1, c1, d1 = x.a, x.b, x.c, x.d
        a2, b2, c2, d2 = y.a, y.b, y.c, y.d
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2
        a = a1 * a2 + (b1 * b2) * 2 + (c1 * c2) * 3 + (d1 * d2) * 6
        b = a1 * b2 + b1 * a2 + (c1 * d2 + d1 * c2) * 3
        c = a1 * c2 + c1 * a2 + (b1 * d2 + d1 * b2) * 2
        d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2
        return ExtScalar(a, b, c, d, x.k + y.k)

    __rmul__ = __mul__

    def conjugate(self) -> ExtScalar:
        return ExtScalar(
            self.a.conjugate(),
            self.b.conjugate(),
            self.c.conjugate(),
            self.d.conjugate(),
            self.k,
        )

    def abs_sq(self) -> ExtScalar:
        return self * self.conjugate()

    def is_zero(self) -> bool:
        if self.a.is_zero() and self.b.is_zero() and self.c.is_zero() and self.d.is_zero():
            return True
        m = self.order
        if m % 8 and m % 12:
            # 1, sqrt2, sqrt3, sqrt6 are independent over Q(zeta_m)
            return False
        big = m * 24 // gcd(m, 24)
        s2, s3, s6 = _surd_embeddings(big)
        total = (
            self.a.promote(big)
            + self.b.promote(big) * s2
            + self.c.promote(big) * s3
            + self.d.promote(big) * s6
        )
        return total.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtScalar):
            return NotImplemented
        x, y = self._common(other)
        if x.k == y.k and x.a == y.a and x.b == y.b and x.c == y.c and x.d == y.d:
            return True
        m = x.order
        if m % 8 and m % 12:
            return False
        return (x - y).is_zero()

    def is_rational(self) -> bool:
        return (
            self.a.is_rational()
            and self.b.is_zero()
            and self.c.is_zero()
            and self.d.is_zero()
        )

    def as_fraction(self) -> Fraction | None:
        """Exact rational value, or None when the value has a surd or root part.

        Componentwise test only; sound at the unramified orders this package
        builds with (m not divisible by 8 or 12).
        """
        if not self.is_rational():
            return None
        return Fraction(self.a.rational_value(), 1 << self.k)

    def to_complex(self) -> complex:
        val = (
            self.a.to_complex()
            + self.b.to_complex() * _SQRT2_F
            + self.c.to_complex() * _SQRT3_F
            + self.d.to_complex() * _SQRT6_F
        )
        return val / (1 << self.k)

    def __repr__(self) -> str:
        parts = []
        for name, comp in (("", self.a), ("sqrt2", self.b), ("sqrt3", self.c), ("sqrt6", self.d)):
            if not comp.is_zero():
                parts.append(f"{list(comp.coeffs)}{name and '*' + name}")
        body = " + ".join(parts) if parts else "0"
        return f"ExtScalar({body}, order={self.order}, k={self.k})"
