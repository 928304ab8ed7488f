"""Exact arithmetic over Q: univariate polynomials, reduced rational functions,
and coprime-basis refinement.

Polynomials are stored as ascending tuples of :class:`fractions.Fraction`
(index ``k`` holds the coefficient of ``x**k``).  Rational functions are kept
in lowest terms with a monic denominator, so structural equality is value
equality.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "NEG_INF",
    "Poly",
    "RatFunc",
    "CoprimeBasis",
    "poly_gcd",
    "ratfunc_normalize",
    "squarefree_part",
    "squarefree_decomposition",
    "coprime_basis",
    "rank",
    "independent_subset",
]

# Mersenne prime for the modular coprimality fast path in poly_gcd.
_GCD_PRIME = (1 << 61) - 1


@functools.total_ordering
class _NegInf:
    """Degree of the zero polynomial.  Compares below every integer and
    refuses arithmetic, so a degenerate degree can never leak into a sum."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("recgrow.NEG_INF")

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floats are not exact; pass int, Fraction or 'p/q'")
    return Fraction(c)


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def _to_ints(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale to integers: returns (ints, d) with coeffs == ints / d."""
    d = 1
    for c in coeffs:
        d = d * c.denominator // math.gcd(d, c.denominator)
    return [c.numerator * (d // c.denominator) for c in coeffs], d


def _int_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


class Poly:
    """Univariate polynomial over Q, immutable."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([_frac(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw((Fraction(1),))

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw(())

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        lc = self.lc
        if lc == 1:
            return self
        return Poly._raw(tuple(c / lc for c in self.coeffs))

    def derivative(self) -> "Poly":
        return Poly._raw(_strip([k * c for k, c in enumerate(self.coeffs)][1:]))

    def primitive_ints(self) -> list[int]:
        """Integer coefficients with content 1 and positive leading term."""
        ints, _ = _to_ints(self.coeffs)
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        if g == 0:
            return []
        if ints[-1] < 0:
            g = -g
        return [c // g for c in ints]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero()
            return Poly._raw(tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly.zero()
        ia, da = _to_ints(self.coeffs)
        ib, db = _to_ints(other.coeffs)
        d = da * db
        return Poly._raw(tuple(Fraction(c, d) for c in _int_mul(ia, ib)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a non-negative int")
        result, base = Poly.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "Poly"):
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lc = other.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly.zero(), self
        quo = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lc
            quo[i - db] = q
            off = i - db
            for j in range(db):
                if bc[j]:
                    rem[off + j] -= q * bc[j]
            rem[i] = Fraction(0)
        return Poly._raw(_strip(quo)), Poly._raw(_strip(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r.coeffs:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self).coeffs

    def multiplicity_in(self, other: "Poly") -> tuple[int, "Poly"]:
        """Largest k with self**k | other, and the cofactor other / self**k."""
        if self.is_constant():
            raise ValueError("multiplicity of a constant is undefined")
        k = 0
        while True:
            q, r = divmod(other, self)
            if r.coeffs:
                return k, other
            other, k = q, k + 1

    def __call__(self, value):
        """Horner evaluation; ``value`` may be any ring element that mixes
        with Fraction (Fraction, int, Poly, RatFunc)."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k == 0:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------------------
# gcd and friends
# ---------------------------------------------------------------------------

def _gcd_mod_p_degree(a: list[int], b: list[int], p: int) -> int:
    a = _strip([c % p for c in a])
    b = _strip([c % p for c in b])
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            if a[-1]:
                f = a[-1] * inv % p
                off = len(a) - len(b)
                for j in range(len(b)):
                    a[off + j] = (a[off + j] - f * b[j]) % p
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two polynomials over Q."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0,0) undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.one()
    ia, ib = a.primitive_ints(), b.primitive_ints()
    if ia[-1] % _GCD_PRIME and ib[-1] % _GCD_PRIME:
        # Reduction mod p cannot lower the gcd degree when p misses both
        # leading coefficients, so a trivial gcd mod p is a proof.
        if _gcd_mod_p_degree(ia, ib, _GCD_PRIME) == 0:
            return Poly.one()
    if len(ia) < len(ib):
        a, b = b, a
    a, b = a.monic(), b.monic()
    while b.coeffs:
        r = a % b
        a, b = b, (r.monic() if r.coeffs else r)
    return a


def squarefree_part(p: Poly) -> Poly:
    """Monic radical of p: same distinct complex roots, each simple."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial is undefined")
    if p.is_constant():
        return Poly.one()
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime ``(s_i, i)`` with
    ``p == lc(p) * prod(s_i ** i)``; constant factors are omitted."""
    if p.is_zero():
        raise ValueError("squarefree decomposition of zero is undefined")
    out = []
    if p.is_constant():
        return out
    p = p.monic()
    dp = p.derivative()
    g = poly_gcd(p, dp)
    b = p.exact_div(g)
    c = dp.exact_div(g)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """Element of Q(x) in canonical form: gcd(num, den) = 1, den monic,
    zero stored as 0/1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.constant(num)
        if den is None:
            den = Poly.one()
        elif not isinstance(den, Poly):
            den = Poly.constant(den)
        r = ratfunc_normalize(num, den)
        self.num, self.den, self._hash = r.num, r.den, None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        f = object.__new__(cls)
        f.num, f.den, f._hash = num, den, None
        return f

    @classmethod
    def x(cls) -> "RatFunc":
        return cls._raw(Poly.x(), Poly.one())

    @classmethod
    def constant(cls, c) -> "RatFunc":
        return cls._raw(Poly.constant(c), Poly.one())

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls._raw(p, Poly.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.one())
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            num = self.num + other.num
            if self.den.is_constant():
                return RatFunc._raw(num, self.den)
            return ratfunc_normalize(num, self.den)
        if self.den.is_constant():
            return RatFunc._raw(self.num * other.den + other.num, other.den)
        if other.den.is_constant():
            return RatFunc._raw(self.num + other.num * self.den, self.den)
        g = poly_gcd(self.den, other.den)
        bd = self.den.exact_div(g) if not g.is_constant() else self.den
        od = other.den.exact_div(g) if not g.is_constant() else other.den
        num = self.num * od + other.num * bd
        return ratfunc_normalize(num, bd * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(Poly.zero(), Poly.one())
            return RatFunc._raw(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc._raw(Poly.zero(), Poly.one())
        # cross-cancel; inputs are reduced so the product is too
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        a = self.num.exact_div(g1) if not g1.is_constant() else self.num
        d = other.den.exact_div(g1) if not g1.is_constant() else other.den
        c = other.num.exact_div(g2) if not g2.is_constant() else other.num
        b = self.den.exact_div(g2) if not g2.is_constant() else self.den
        num, den = a * c, b * d
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        lc = self.num.lc
        return RatFunc._raw(self.den * (1 / lc), self.num * (1 / lc))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an int")
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RatFunc.constant(1)
        # reduced and monic powers stay reduced and monic
        return RatFunc._raw(self.num ** n, self.den ** n)

    def __call__(self, value: Fraction) -> Fraction:
        d = self.den(value)
        if not d:
            raise ZeroDivisionError(f"{self} has a pole at {value}")
        return Fraction(self.num(value)) / d

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Reduce num/den to canonical form."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return RatFunc._raw(Poly.zero(), Poly.one())
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.lc
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return RatFunc._raw(num, den)


# ---------------------------------------------------------------------------
# coprime basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoprimeBasis:
    """Pairwise coprime, monic, squarefree factors with their exponents in
    each input: ``exponents[k][i]`` is the exponent of ``factors[k]`` in
    input ``i``."""

    factors: tuple[Poly, ...]
    exponents: tuple[tuple[int, ...], ...]

    def exponent(self, factor: int, source: int) -> int:
        return self.exponents[factor][source]

    def reconstruct(self, source: int) -> Poly:
        out = Poly.one()
        for f, exps in zip(self.factors, self.exponents):
            out = out * f ** exps[source]
        return out


def _refine(basis: list[Poly], s: Poly) -> list[Poly]:
    out = []
    for f in basis:
        if s.is_constant():
            out.append(f)
            continue
        g = poly_gcd(f, s)
        if g.is_constant():
            out.append(f)
            continue
        out.append(g)
        rest = f.exact_div(g)
        if not rest.is_constant():
            out.append(rest.monic())
        s = s.exact_div(g)
    if not s.is_constant():
        out.append(s.monic())
    return out


def coprime_basis(ps: Sequence[Poly]) -> CoprimeBasis:
    if any(p.is_zero() for p in ps):
        raise ValueError("coprime basis of a zero polynomial is undefined")
    basis: list[Poly] = []
    for p in ps:
        # refine by every Yun layer so each factor has one multiplicity per input
        for s, _ in squarefree_decomposition(p):
            basis = _refine(basis, s)
    basis.sort(key=Poly.sort_key)
    exps = tuple(tuple(f.multiplicity_in(p)[0] for p in ps) for f in basis)
    return CoprimeBasis(tuple(basis), exps)


# ---------------------------------------------------------------------------
# Q-linear algebra on rational functions
# ---------------------------------------------------------------------------

def _common_vectors(funcs: Sequence[RatFunc]) -> list[list[Fraction]]:
    """Coefficient vectors of f_i * Q with Q the product of the distinct
    denominators; Q-linear relations among the f_i are preserved."""
    funcs = [f if isinstance(f, RatFunc) else RatFunc(f) for f in funcs]
    dens = []
    for f in funcs:
        if f.den not in dens:
            dens.append(f.den)
    polys = []
    for f in funcs:
        p = f.num
        for d in dens:
            if d != f.den:
                p = p * d
        polys.append(p)
    width = max((len(p.coeffs) for p in polys), default=0)
    return [list(p.coeffs) + [Fraction(0)] * (width - len(p.coeffs)) for p in polys]


class _Echelon:
    """Incremental row echelon form over Q keyed by pivot column."""

    def __init__(self):
        self.rows: dict[int, list[Fraction]] = {}

    def reduce(self, v: list[Fraction]) -> list[Fraction]:
        v = list(v)
        for col in sorted(self.rows):
            if v[col]:
                row = self.rows[col]
                f = v[col]
                for k in range(col, len(v)):
                    if row[k]:
                        v[k] -= f * row[k]
        return v

    def add(self, v: list[Fraction]) -> bool:
        v = self.reduce(v)
        for col, c in enumerate(v):
            if c:
                v = [e / c for e in v]
                # keep existing rows reduced at the new pivot
                for pc, row in self.rows.items():
                    if row[col]:
                        f = row[col]
                        self.rows[pc] = [a - f * b for a, b in zip(row, v)]
                self.rows[col] = v
                return True
        return False


def rank(funcs: Sequence[RatFunc]) -> int:
    """Dimension of the Q-span of ``funcs``."""
    ech = _Echelon()
    return sum(ech.add(v) for v in _common_vectors(funcs))


def independent_subset(funcs: Sequence[RatFunc]) -> list[int]:
    """Indices of a maximal Q-independent subset, chosen greedily in order."""
    ech = _Echelon()
    return [i for i, v in enumerate(_common_vectors(funcs)) if ech.add(v)]
