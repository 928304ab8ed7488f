"""Certified enclosures of complex polynomial roots.

Approximations come from mpmath's Durand-Kerner solver; the certificate is
exact rational arithmetic.  For monic squarefree p of degree d and distinct
approximations z_i, put W_i = p(z_i) / prod_{j != i} (z_i - z_j).  The
matrix diag(z) - W 1^T has characteristic polynomial p, so by Gershgorin
every disc D(z_i - W_i, (d - 1)|W_i|) that is disjoint from the others holds
exactly one root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath.libmp import to_rational

from .arith import Poly
from .errors import PrecisionError

__all__ = ["ComplexBall", "isolate_roots", "sqrt_bounds"]

_Z = Fraction(0)


def sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(q) <= hi with hi - lo <= 2**-bits."""
    if q < 0:
        raise ValueError("square root of a negative number")
    scale = 1 << (2 * bits)
    s = math.isqrt(q.numerator * scale // q.denominator)
    lo = Fraction(s, 1 << bits)
    if lo * lo == q:
        return lo, lo
    return lo, Fraction(s + 1, 1 << bits)


def _round(v: Fraction, bits: int) -> Fraction:
    return Fraction(round(v * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class ComplexBall:
    """Closed disc {z : |z - (re + i im)| <= rad} with rational data."""

    re: Fraction
    im: Fraction
    rad: Fraction
    bits: int = 256

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_bounds(self) -> tuple[Fraction, Fraction]:
        """Enclosure [lo, hi] of |z| over the disc."""
        lo, hi = sqrt_bounds(self.abs2(), self.bits + 8)
        return max(_Z, lo - self.rad), hi + self.rad

    def contains_zero(self) -> bool:
        return self.abs2() <= self.rad * self.rad

    def contains(self, re, im=0) -> bool:
        dr, di = self.re - re, self.im - im
        return dr * dr + di * di <= self.rad * self.rad

    def disjoint(self, other: "ComplexBall") -> bool:
        dr, di = self.re - other.re, self.im - other.im
        s = self.rad + other.rad
        return dr * dr + di * di > s * s

    def _tidy(self, re, im, rad) -> "ComplexBall":
        # round the centre to keep sizes bounded, widening the radius
        b = self.bits + 16
        rr, ri = _round(re, b), _round(im, b)
        if rr != re or ri != im:
            rad += Fraction(2, 1 << b)
        return ComplexBall(rr, ri, rad, self.bits)

    def __mul__(self, other: "ComplexBall") -> "ComplexBall":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        a = sqrt_bounds(self.abs2(), self.bits)[1]
        b = sqrt_bounds(other.abs2(), self.bits)[1]
        rad = a * other.rad + b * self.rad + self.rad * other.rad
        return self._tidy(re, im, rad)

    def inverse(self) -> "ComplexBall":
        # the image of a disc avoiding 0 under z -> 1/z is again a disc
        den = self.abs2() - self.rad * self.rad
        if den <= 0:
            raise PrecisionError("ball contains zero; cannot invert")
        return self._tidy(self.re / den, -self.im / den, self.rad / den)

    def __truediv__(self, other: "ComplexBall") -> "ComplexBall":
        return self * other.inverse()

    def __pow__(self, m: int) -> "ComplexBall":
        if m < 1:
            raise ValueError("ball power needs m >= 1")
        out, base = None, self
        while m:
            if m & 1:
                out = base if out is None else out * base
            m >>= 1
            if m:
                base = base * base
        return out

    def __str__(self):
        return f"{float(self.re):.6g}{float(self.im):+.6g}i +/- {float(self.rad):.2e}"


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    d = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d)


def _horner(coeffs, z):
    acc = (coeffs[-1], _Z)
    for c in reversed(coeffs[:-1]):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _mpf_fraction(v) -> Fraction:
    num, den = to_rational(v._mpf_)
    return Fraction(int(num), int(den))


def _approximate(p: Poly, prec: int) -> list[tuple[Fraction, Fraction]]:
    with mpmath.workprec(prec):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        zs = mpmath.polyroots(coeffs, maxsteps=400, extraprec=prec, error=False)
        out = []
        for z in zs:
            z = mpmath.mpc(z)
            out.append((_round(_mpf_fraction(z.real), prec), _round(_mpf_fraction(z.imag), prec)))
    return out


def _certify(p: Poly, zs, bits: int):
    coeffs = p.coeffs
    d = len(coeffs) - 1
    balls = []
    for i, z in enumerate(zs):
        denom = (Fraction(1), _Z)
        for j, w in enumerate(zs):
            if j != i:
                denom = _cmul(denom, (z[0] - w[0], z[1] - w[1]))
        if denom == (_Z, _Z):
            return None
        W = _cdiv(_horner(coeffs, z), denom)
        rad = (d - 1) * sqrt_bounds(W[0] * W[0] + W[1] * W[1], bits + 32)[1]
        balls.append(ComplexBall(z[0], z[1], Fraction(0), bits)._tidy(z[0] - W[0], z[1] - W[1], rad))
    for i in range(d):
        for j in range(i + 1, d):
            if not balls[i].disjoint(balls[j]):
                return None
    return balls


def isolate_roots(p: Poly, bits: int = 256, max_bits: int = 4096) -> list[ComplexBall]:
    """Pairwise disjoint discs, one per root of the squarefree polynomial p,
    each of radius roughly 2**-bits (or smaller)."""
    if p.is_constant():
        return []
    p = p.monic()
    prec = bits + 32
    while prec <= max_bits + 32:
        balls = _certify(p, _approximate(p, prec), bits)
        if balls is not None:
            balls.sort(key=lambda b: (b.re, b.im))
            return balls
        prec *= 2
    raise PrecisionError(f"could not isolate the roots of {p}; raise precision_bits")
