"""Growth of integer linear recurrences (number field K = Q).

Checks |G_n| >= (max_j |alpha_j|)**(n(1 - eps)) with exact |G_n| and a
certified enclosure of the right-hand side, the log of Schmidt's bound on
the number of zeros, and the product-formula sandwich for f(r).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from mpmath import iv
from mpmath.libmp import to_rational
from sympy import factorint, totient

from .arith import Poly, squarefree_decomposition
from .errors import DegenerateSequenceError, HypothesisError, PrecisionError
from .roots import ComplexBall, isolate_roots

__all__ = [
    "IntRecurrence",
    "EpsilonCheckConfig",
    "SchmidtBoundInput",
    "NFNondegeneracy",
    "EpsilonRow",
    "EpsilonReport",
    "Lemma3Result",
    "eval_int_recurrence",
    "int_recurrence_values",
    "check_nondegenerate_nf",
    "root_of_unity_orders",
    "verify_epsilon_inequality",
    "schmidt_zero_bound_log",
    "lemma3_sandwich",
]


@dataclass(frozen=True)
class IntRecurrence:
    """G_{n+d} = -(c_0 G_n + ... + c_{d-1} G_{n+d-1}) with monic integer
    characteristic polynomial ``char_coeffs`` (ascending).

    ``roots`` holds one certified disc per distinct characteristic root,
    ``multiplicities`` the matching multiplicities.
    """

    char_coeffs: tuple[int, ...]
    initial_terms: tuple[int, ...]
    precision_bits: int = 256
    roots: tuple[ComplexBall, ...] = field(init=False, repr=False)
    multiplicities: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        cc = tuple(self.char_coeffs)
        init = tuple(self.initial_terms)
        if any(not isinstance(c, int) for c in cc + init):
            raise ValueError("coefficients and initial terms must be integers")
        if len(cc) < 2 or cc[-1] != 1:
            # z = 1 clears denominators only for monic input
            raise ValueError("characteristic polynomial must be monic of degree >= 1")
        if cc[0] == 0:
            raise ValueError("characteristic polynomial has the root 0; reduce the order")
        if len(init) != len(cc) - 1:
            raise ValueError(f"need {len(cc) - 1} initial terms, got {len(init)}")
        if self.precision_bits < 16:
            raise ValueError("precision_bits must be >= 16")
        roots, mults = [], []
        for s, k in squarefree_decomposition(Poly(cc)):
            for ball in isolate_roots(s, self.precision_bits):
                roots.append(ball)
                mults.append(k)
        order = sorted(range(len(roots)), key=lambda i: (roots[i].re, roots[i].im))
        object.__setattr__(self, "char_coeffs", cc)
        object.__setattr__(self, "initial_terms", init)
        object.__setattr__(self, "roots", tuple(roots[i] for i in order))
        object.__setattr__(self, "multiplicities", tuple(mults[i] for i in order))

    @property
    def order(self) -> int:
        return len(self.char_coeffs) - 1

    def max_abs_bounds(self) -> tuple[Fraction, Fraction]:
        bounds = [b.abs_bounds() for b in self.roots]
        return max(lo for lo, _ in bounds), max(hi for _, hi in bounds)


@dataclass(frozen=True)
class EpsilonCheckConfig:
    epsilon: Fraction
    n_max: int
    precision_bits: int = 256

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class SchmidtBoundInput:
    k: int
    a: int

    def __post_init__(self):
        if self.k < 1 or self.a < 1:
            raise ValueError("need k >= 1 and a >= 1")


def int_recurrence_values(rec: IntRecurrence, stop: int):
    window = list(rec.initial_terms)
    c = rec.char_coeffs
    d = rec.order
    for n in range(stop):
        yield n, window[0]
        nxt = -sum(c[k] * window[k] for k in range(d))
        window = window[1:] + [nxt]


def eval_int_recurrence(rec: IntRecurrence, n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    for _, g in int_recurrence_values(rec, n + 1):
        pass
    return g


# ---------------------------------------------------------------------------
# non-degeneracy
# ---------------------------------------------------------------------------

class NFNondegeneracy(NamedTuple):
    nondegenerate: bool
    witness: Optional[tuple[int, int]] = None
    order: Optional[int] = None


def root_of_unity_orders(degree: int) -> list[int]:
    """All m with phi(m) <= B, B = max(2 d, d (d - 1)).

    A ratio of two roots of a degree-d polynomial lies in a field of degree
    at most d (d - 1), so a root of unity among them has phi(order) <= B.
    """
    bound = max(2 * degree, degree * (degree - 1))
    # phi(m) >= sqrt(m / 2)
    return [m for m in range(1, 2 * bound * bound + 3) if totient(m) <= bound]


def check_nondegenerate_nf(rec: IntRecurrence) -> NFNondegeneracy:
    """Degenerate iff some ratio alpha_i / alpha_j is a root of unity.
    Witness indices are 1-based positions in ``rec.roots``.

    The ratio disc is tested against 1 in modulus, then ratio**m against 1
    for every admissible order m.  Containment with a tight disc is taken as
    equality; a wide disc that contains 1 is undecidable.
    """
    roots = rec.roots
    tol = Fraction(1, 1 << max(8, rec.precision_bits // 4))
    orders = root_of_unity_orders(len(roots))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            ratio = roots[i] / roots[j]
            lo, hi = ratio.abs_bounds()
            if hi < 1 or lo > 1:
                continue
            for m in orders:
                pw = ratio ** m
                if pw.contains(1):
                    if pw.rad > tol:
                        raise PrecisionError("cannot decide root of unity; raise precision_bits")
                    return NFNondegeneracy(False, (i + 1, j + 1), m)
    return NFNondegeneracy(True)


# ---------------------------------------------------------------------------
# epsilon inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonRow:
    n: int
    abs_Gn: int
    threshold_lo: Fraction
    threshold_hi: Fraction
    log_threshold_hi: Fraction
    status: str  # "pass", "fail" or "undecided"

    @property
    def ok(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class EpsilonReport:
    epsilon: Fraction
    max_abs_root: tuple[Fraction, Fraction]
    rows: tuple[EpsilonRow, ...]
    min_n: Optional[int]

    @property
    def undecided(self) -> list[int]:
        return [r.n for r in self.rows if r.status == "undecided"]


def _iv_from_fraction(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _bounds(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return Fraction(*map(int, to_rational(a))), Fraction(*map(int, to_rational(b)))


def verify_epsilon_inequality(rec: IntRecurrence, cfg: EpsilonCheckConfig) -> EpsilonReport:
    nd = check_nondegenerate_nf(rec)
    if not nd.nondegenerate:
        i, j = nd.witness
        raise DegenerateSequenceError(
            f"degenerate recurrence: alpha_{i}/alpha_{j} is a root of unity of order {nd.order}")
    r_lo, r_hi = rec.max_abs_bounds()
    if r_lo <= 1:
        raise HypothesisError("max |alpha_j| > 1 not certifiable")
    one_minus = 1 - cfg.epsilon
    rows = []
    saved = iv.prec
    iv.prec = cfg.precision_bits
    try:
        log_lo = iv.log(_iv_from_fraction(r_lo))
        log_hi = iv.log(_iv_from_fraction(r_hi))
        for n, g in int_recurrence_values(rec, cfg.n_max + 1):
            e = _iv_from_fraction(n * one_minus)
            t_lo = _bounds(iv.exp(log_lo * e))[0]
            lg = log_hi * e
            t_hi = _bounds(iv.exp(lg))[1]
            a = abs(g)
            if a >= t_hi:
                status = "pass"
            elif a < t_lo:
                status = "fail"
            else:
                status = "undecided"
            rows.append(EpsilonRow(n, a, t_lo, t_hi, _bounds(lg)[1], status))
    finally:
        iv.prec = saved
    min_n = None
    if rows and rows[-1].ok:
        min_n = rows[0].n
        for row in rows:
            if not row.ok:
                min_n = row.n + 1
    return EpsilonReport(cfg.epsilon, (r_lo, r_hi), tuple(rows), min_n)


# ---------------------------------------------------------------------------
# Schmidt's zero bound, product sandwich
# ---------------------------------------------------------------------------

def schmidt_zero_bound_log(inp: SchmidtBoundInput) -> int:
    """ln c(k, a) = (7 k^a)^(8 k^a); c itself is never formed."""
    ka = inp.k ** inp.a
    return (7 * ka) ** (8 * ka)


class Lemma3Result(NamedTuple):
    product: int
    c_used: int
    ok: bool
    product_formula_ok: bool


def _p_adic_abs(v: int, p: int) -> Fraction:
    e = 0
    while v % p == 0:
        v //= p
        e += 1
    return Fraction(1, p ** e)


def lemma3_sandwich(f_coeffs: Sequence[int], r: int) -> Lemma3Result:
    """Sandwich for K = Q (D = 1), f given by ascending integer coefficients:

        c^-1 |r|^-m <= (prod_v max(1, |f(r)|_v))^-1 <= prod_{v in T} |f(r)|_v
                    <= prod_v max(1, |f(r)|_v) <= c |r|^m

    with c = max(1, sum |coeffs|), checked for T = {inf} and T = the primes
    dividing f(r).
    """
    coeffs = list(f_coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("f must be nonzero")
    if r == 0:
        raise ValueError("lemma3_sandwich requires r != 0")
    m = len(coeffs) - 1
    value = sum(c * r ** k for k, c in enumerate(coeffs))
    if value == 0:
        raise ValueError("lemma3_sandwich requires f(r) != 0")
    primes = sorted(factorint(abs(value)))
    finite = [_p_adic_abs(value, p) for p in primes]
    arch = abs(value)
    product = max(1, arch)
    for a in finite:
        product *= max(1, a)
    finite_part = Fraction(1)
    for a in finite:
        finite_part *= a
    formula_ok = arch * finite_part == 1

    c = max(1, sum(abs(x) for x in coeffs))
    top = Fraction(c * abs(r) ** m)
    inv = 1 / Fraction(product)
    ok = formula_ok and 1 / top <= inv and product <= top
    t_sets = [Fraction(arch), finite_part if primes else Fraction(1)]
    ok = ok and all(inv <= t <= product for t in t_sets)
    return Lemma3Result(int(product), c, ok, formula_ok)
