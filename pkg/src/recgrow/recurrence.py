"""Power sums G_n = sum_j a_j(n) * alpha_j**n over Q(x).

The power-sum form is the input; the linear recurrence it satisfies is
derived from it and used as an independent evaluation route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

from .arith import RatFunc

__all__ = [
    "Term",
    "PowerSumSpec",
    "RecurrenceForm",
    "Nondegeneracy",
    "coeff_at",
    "eval_power_sum",
    "power_sum_values",
    "to_recurrence",
    "unroll",
    "is_nondegenerate",
]


def _as_ratfunc(v) -> RatFunc:
    return v if isinstance(v, RatFunc) else RatFunc(v)


@dataclass(frozen=True)
class Term:
    """One summand a(n) * alpha**n; ``coeffs[k]`` multiplies n**k."""

    coeffs: tuple[RatFunc, ...]
    alpha: RatFunc

    def __post_init__(self):
        coeffs = [_as_ratfunc(c) for c in self.coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise ValueError("coefficient polynomial a_j(n) is identically zero")
        alpha = _as_ratfunc(self.alpha)
        if alpha.is_zero():
            raise ValueError("characteristic root alpha must be nonzero")
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "alpha", alpha)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def nonzero_coeffs(self) -> list[RatFunc]:
        return [c for c in self.coeffs if not c.is_zero()]


@dataclass(frozen=True)
class PowerSumSpec:
    terms: tuple[Term, ...]

    def __post_init__(self):
        terms = tuple(t if isinstance(t, Term) else Term(*t) for t in self.terms)
        if not terms:
            raise ValueError("power sum needs at least one term")
        seen = set()
        for t in terms:
            if t.alpha in seen:
                raise ValueError(f"duplicate characteristic root {t.alpha}; merge the terms")
            seen.add(t.alpha)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *pairs) -> "PowerSumSpec":
        """Build from ``(coeffs, alpha)`` pairs."""
        return cls(tuple(Term(tuple(c), a) for c, a in pairs))

    @property
    def t(self) -> int:
        return len(self.terms)

    @property
    def alphas(self) -> list[RatFunc]:
        return [term.alpha for term in self.terms]

    def nonzero_coeffs(self) -> list[RatFunc]:
        return [c for term in self.terms for c in term.nonzero_coeffs()]

    def is_polynomial(self) -> bool:
        return all(f.is_polynomial() for f in self.alphas + self.nonzero_coeffs())


def coeff_at(term: Term, n: int) -> RatFunc:
    """a_j(n) for an integer n."""
    acc = RatFunc.constant(0)
    nk = Fraction(1)
    for c in term.coeffs:
        if nk and not c.is_zero():
            acc = acc + c * nk
        nk *= n
    return acc


def eval_power_sum(spec: PowerSumSpec, n: int) -> RatFunc:
    if n < 0:
        raise ValueError("power sums are indexed by n >= 0")
    total = RatFunc.constant(0)
    for term in spec.terms:
        a = coeff_at(term, n)
        if not a.is_zero():
            total = total + a * term.alpha ** n
    return total


def power_sum_values(spec: PowerSumSpec, start: int, stop: int) -> Iterator[tuple[int, RatFunc]]:
    """Yield (n, G_n) for start <= n < stop, updating alpha powers in place."""
    powers = [term.alpha ** start for term in spec.terms]
    for n in range(start, stop):
        total = RatFunc.constant(0)
        for term, pw in zip(spec.terms, powers):
            a = coeff_at(term, n)
            if not a.is_zero():
                total = total + a * pw
        yield n, total
        powers = [pw * term.alpha for term, pw in zip(spec.terms, powers)]


@dataclass(frozen=True)
class RecurrenceForm:
    """Monic characteristic polynomial (ascending coefficients in T) and the
    first ``order`` terms."""

    char_poly_coeffs: tuple[RatFunc, ...]
    initial_terms: tuple[RatFunc, ...]

    def __post_init__(self):
        if not self.char_poly_coeffs or self.char_poly_coeffs[-1] != RatFunc.constant(1):
            raise ValueError("characteristic polynomial must be monic")
        if len(self.initial_terms) != self.order:
            raise ValueError(f"need {self.order} initial terms, got {len(self.initial_terms)}")

    @property
    def order(self) -> int:
        return len(self.char_poly_coeffs) - 1


def _mul_t(a: Sequence[RatFunc], b: Sequence[RatFunc]) -> list[RatFunc]:
    out = [RatFunc.constant(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def to_recurrence(spec: PowerSumSpec) -> RecurrenceForm:
    char = [RatFunc.constant(1)]
    for term in spec.terms:
        lin = [-term.alpha, RatFunc.constant(1)]
        for _ in range(term.degree + 1):
            char = _mul_t(char, lin)
    order = len(char) - 1
    init = tuple(eval_power_sum(spec, n) for n in range(order))
    return RecurrenceForm(tuple(char), init)


def unroll(rec: RecurrenceForm, n: int) -> RatFunc:
    if n < 0:
        raise ValueError("n must be non-negative")
    d = rec.order
    window = list(rec.initial_terms)
    if n < d:
        return window[n]
    c = rec.char_poly_coeffs
    for _ in range(n - d + 1):
        nxt = RatFunc.constant(0)
        for k in range(d):
            if not c[k].is_zero() and not window[k].is_zero():
                nxt = nxt - c[k] * window[k]
        window = window[1:] + [nxt]
    return window[-1]


class Nondegeneracy(NamedTuple):
    nondegenerate: bool
    witness: Optional[tuple[int, int]] = None
    ratio: Optional[Fraction] = None


def is_nondegenerate(spec: PowerSumSpec) -> Nondegeneracy:
    """Non-degenerate iff no ratio alpha_i / alpha_j (i < j) is a constant.

    For Q(x) data a ratio lies in C exactly when it lies in Q.  Witness
    indices are 1-based, matching alpha_1 .. alpha_t.
    """
    alphas = spec.alphas
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            ratio = alphas[i] / alphas[j]
            if ratio.is_constant():
                return Nondegeneracy(False, (i + 1, j + 1), ratio.constant_value())
    return Nondegeneracy(True)
