"""Places of Q(x) seen inside C(x), valuations, divisors and the height.

A finite place is carried by a monic squarefree factor ``p``; it stands for
the ``deg p`` complex points that are its roots.  Every sum "over all
valuations" weights such a place by its complex degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import Poly, RatFunc, coprime_basis, poly_gcd, squarefree_part
from .errors import PlaceIncompatibleError

__all__ = [
    "Place",
    "INFINITY",
    "PlaceIncompatibleError",
    "ValuationDivisor",
    "val_infty",
    "val_at_point",
    "val_at_place",
    "valuation_divisor",
    "height",
    "Lemma1Report",
    "check_lemma1",
]


def _nonzero(f: RatFunc, what: str) -> None:
    if f.is_zero():
        raise ValueError(f"{what} of zero undefined")


@dataclass(frozen=True)
class Place:
    """``factor is None`` means the place at infinity."""

    factor: Optional[Poly] = None

    def __post_init__(self):
        p = self.factor
        if p is None:
            return
        if p.is_constant():
            raise ValueError("finite place needs a factor of degree >= 1")
        if not p.is_monic():
            raise ValueError(f"place factor {p} is not monic")
        if squarefree_part(p) != p:
            raise ValueError(f"place factor {p} is not squarefree")

    @classmethod
    def finite(cls, factor: Poly) -> "Place":
        return cls(factor)

    @classmethod
    def point(cls, c) -> "Place":
        return cls(Poly((-Fraction(c), 1)))

    @property
    def is_infinite(self) -> bool:
        return self.factor is None

    @property
    def complex_degree(self) -> int:
        return 1 if self.factor is None else self.factor.degree

    def sort_key(self):
        if self.factor is None:
            return (1, ())
        return (0, self.factor.sort_key())

    def __str__(self):
        return "inf" if self.factor is None else f"({self.factor})"


INFINITY = Place()


def val_infty(f: RatFunc) -> int:
    _nonzero(f, "valuation")
    return f.den.degree - f.num.degree


def val_at_point(f: RatFunc, c) -> int:
    """Order of vanishing of f at the rational point c."""
    _nonzero(f, "valuation")
    lin = Poly((-Fraction(c), 1))
    return lin.multiplicity_in(f.num)[0] - lin.multiplicity_in(f.den)[0]


def val_at_place(f: RatFunc, place: Place) -> int:
    _nonzero(f, "valuation")
    if place.factor is None:
        return val_infty(f)
    p = place.factor
    kn, rn = p.multiplicity_in(f.num)
    kd, rd = p.multiplicity_in(f.den)
    # every root of p must see the same order, i.e. nothing of p survives
    if not poly_gcd(rn, p).is_constant() or not poly_gcd(rd, p).is_constant():
        raise PlaceIncompatibleError(
            f"place incompatible with function: {p} splits against {f}")
    return kn - kd


@dataclass(frozen=True)
class ValuationDivisor:
    """Nonzero valuations of a function, sorted with infinity last."""

    entries: tuple[tuple[Place, int], ...]

    def __getitem__(self, place: Place) -> int:
        for p, v in self.entries:
            if p == place:
                return v
        return 0

    def weighted_sum(self) -> int:
        return sum(p.complex_degree * v for p, v in self.entries)

    def degree_of_zeros(self) -> int:
        return sum(p.complex_degree * v for p, v in self.entries if v > 0)

    def to_json(self) -> list:
        from .io import poly_to_json

        return [
            {"factor": "inf" if p.factor is None else poly_to_json(p.factor),
             "complex_degree": p.complex_degree,
             "value": v}
            for p, v in self.entries
        ]


def valuation_divisor(f: RatFunc) -> ValuationDivisor:
    _nonzero(f, "valuation")
    entries = []
    polys = [p for p in (f.num, f.den) if not p.is_constant()]
    if polys:
        basis = coprime_basis([f.num, f.den])
        for k, factor in enumerate(basis.factors):
            v = basis.exponent(k, 0) - basis.exponent(k, 1)
            if v:
                entries.append((Place(factor), v))
    v_inf = val_infty(f)
    if v_inf:
        entries.append((INFINITY, v_inf))
    return ValuationDivisor(tuple(entries))


def height(f: RatFunc) -> int:
    """Sum over complex places of max(0, v(f)).

    Computed from the divisor and checked against max(deg num, deg den),
    which is the same number on the projective line.
    """
    if f.is_zero():
        raise ValueError("height of zero is infinite")
    h = valuation_divisor(f).degree_of_zeros()
    h_deg = max(f.num.degree, f.den.degree)
    if h != h_deg:
        raise ArithmeticError(f"height mismatch for {f}: divisor {h} vs degree {h_deg}")
    return h


@dataclass(frozen=True)
class Lemma1Report:
    """Per-property outcome: True/False, or None when the property's
    hypotheses fail for the given arguments (e.g. f + g = 0)."""

    results: dict

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.results.values())

    @property
    def skipped(self) -> list[str]:
        return [k for k, v in self.results.items() if v is None]

    def __bool__(self):
        return self.ok


def check_lemma1(f: RatFunc, g: RatFunc, n: int, A: Poly) -> Lemma1Report:
    if f.is_zero() or g.is_zero():
        raise ValueError("check_lemma1 needs nonzero f and g")
    if A.is_zero():
        raise ValueError("check_lemma1 needs a nonzero polynomial A")
    hf, hg = height(f), height(g)
    res = {}
    res["a"] = hf >= 0 and hf == height(f.inverse())

    s = f + g
    res["b"] = None if s.is_zero() else (hf - hg <= height(s) <= hf + hg)

    h_prod = height(f * g)
    res["c"] = hf - hg <= h_prod <= hf + hg

    res["d"] = height(f ** n) == abs(n) * hf

    res["e"] = (hf == 0) == f.is_constant()

    af = A(f)
    if not isinstance(af, RatFunc):
        af = RatFunc.constant(af)
    res["f"] = None if af.is_zero() else height(af) == A.degree * hf
    return Lemma1Report(res)
