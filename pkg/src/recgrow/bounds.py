"""Valuation bounds for power sums over Q(x).

Lower side: mu(G_n) >= C~ + n * min_j mu(alpha_j), with C~ the least
valuation of a nonzero coefficient a_jk.

Upper side: mu(G_n) <= C2 + n * min_j mu(alpha_j) once the set
{pi_ji * alpha_j**n} is linearly independent, where

    C1 = binom(q, 2) * (|S| + 2*genus - 2),   C2 = C1 + max H(a_jk),

q is the total rank of the coefficient families and S the places carrying
zeros/poles of the data, the chosen place mu and infinity.  For a single
term the constant is sum_k H(a_1k) instead.
"""

from __future__ import annotations

import os
from functools import partial
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple, Optional, Sequence

from .arith import (Poly, RatFunc, coprime_basis, independent_subset, poly_gcd, rank,
                    squarefree_part)
from .errors import DegenerateSequenceError, HypothesisError, PlaceIncompatibleError
from .places import INFINITY, Place, height, val_at_place, val_infty
from .recurrence import PowerSumSpec, is_nondegenerate, power_sum_values

__all__ = [
    "GENUS",
    "DegenerateSequenceError",
    "HypothesisError",
    "PlaceSet",
    "BoundConstants",
    "BoundRow",
    "BoundReport",
    "DegreeRow",
    "DegreeReport",
    "IndependenceWitness",
    "IndependenceResult",
    "ZannierInstance",
    "ZannierResult",
    "trivial_lower_constant",
    "build_S",
    "bound_constants",
    "theorem1_constant",
    "theorem1_upper",
    "verify_bounds",
    "corollary_degree_bound",
    "independence_test",
    "independence_scan",
    "horizon_of",
    "independence_horizon",
    "zannier_check",
]

GENUS = 0


def _workers(workers: Optional[int]) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get("RECGROW_THREADS", "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def _require_nondegenerate(spec: PowerSumSpec) -> None:
    nd = is_nondegenerate(spec)
    if not nd.nondegenerate:
        i, j = nd.witness
        raise DegenerateSequenceError(
            f"degenerate sequence: alpha_{i}/alpha_{j} = {nd.ratio} is constant")


# ---------------------------------------------------------------------------
# place sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceSet:
    """Finite set of places with pairwise coprime factors (distinct C-points)."""

    places: tuple[Place, ...]

    def __post_init__(self):
        places = sorted(set(self.places), key=Place.sort_key)
        finite = [p.factor for p in places if p.factor is not None]
        for i in range(len(finite)):
            for j in range(i + 1, len(finite)):
                if not _coprime(finite[i], finite[j]):
                    raise ValueError(f"places {finite[i]} and {finite[j]} share a root")
        object.__setattr__(self, "places", tuple(places))

    @property
    def size_over_C(self) -> int:
        return sum(p.complex_degree for p in self.places)

    def __contains__(self, place: Place) -> bool:
        return place in self.places

    def __iter__(self):
        return iter(self.places)

    def __len__(self):
        return len(self.places)

    @property
    def finite_factors(self) -> list[Poly]:
        return [p.factor for p in self.places if p.factor is not None]

    def covers(self, poly: Poly) -> bool:
        """All complex roots of ``poly`` are finite places of this set."""
        if poly.is_constant():
            return True
        prod = Poly.one()
        for f in self.finite_factors:
            prod = prod * f
        return squarefree_part(poly).divides(prod)


def _coprime(a: Poly, b: Poly) -> bool:
    return poly_gcd(a, b).is_constant()


def _data_functions(spec: PowerSumSpec) -> list[RatFunc]:
    return spec.alphas + spec.nonzero_coeffs()


def build_S(spec: PowerSumSpec, mu: Place) -> PlaceSet:
    polys = []
    for f in _data_functions(spec):
        polys.extend(p for p in (f.num, f.den) if not p.is_constant())
    if mu.factor is not None:
        polys.append(mu.factor)
    factors = coprime_basis(polys).factors if polys else ()
    if mu.factor is not None and mu.factor not in factors:
        raise PlaceIncompatibleError(
            f"place incompatible with function data: {mu.factor} splits against the sequence")
    return PlaceSet(tuple(Place(f) for f in factors) + (INFINITY,))


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def trivial_lower_constant(spec: PowerSumSpec, mu: Place) -> int:
    return min(val_at_place(a, mu) for a in spec.nonzero_coeffs())


def min_alpha_valuation(spec: PowerSumSpec, mu: Place) -> int:
    return min(val_at_place(a, mu) for a in spec.alphas)


@dataclass(frozen=True)
class BoundConstants:
    c_tilde: int
    q: int
    genus: int
    c1: int
    c2: int
    k_js: tuple[int, ...]
    S: PlaceSet
    min_alpha_val: int

    def to_json(self) -> dict:
        from .io import place_to_json

        return {
            "c_tilde": self.c_tilde,
            "q": self.q,
            "k_js": list(self.k_js),
            "genus": self.genus,
            "S": [place_to_json(p) for p in self.S],
            "size_over_C": self.S.size_over_C,
            "c1": self.c1,
            "c2": self.c2,
            "min_alpha_valuation": self.min_alpha_val,
        }


def bound_constants(spec: PowerSumSpec, mu: Place) -> BoundConstants:
    """Constants of the upper bound.  Also defined for t = 1, where C2 is a
    valid (if not the tightest) constant; theorem1_upper uses sum H(a_1k)
    there."""
    _require_nondegenerate(spec)
    k_js = tuple(rank(term.coeffs) for term in spec.terms)
    q = sum(k_js)
    S = build_S(spec, mu)
    c1 = comb(q, 2) * (S.size_over_C + 2 * GENUS - 2)
    c2 = c1 + max(height(a) for a in spec.nonzero_coeffs())
    return BoundConstants(
        c_tilde=trivial_lower_constant(spec, mu),
        q=q,
        genus=GENUS,
        c1=c1,
        c2=c2,
        k_js=k_js,
        S=S,
        min_alpha_val=min_alpha_valuation(spec, mu),
    )


def theorem1_constant(spec: PowerSumSpec, mu: Place) -> int:
    if spec.t == 1:
        return sum(height(a) for a in spec.terms[0].nonzero_coeffs())
    return bound_constants(spec, mu).c2


def theorem1_upper(spec: PowerSumSpec, mu: Place, n: int) -> int:
    _require_nondegenerate(spec)
    return theorem1_constant(spec, mu) + n * min_alpha_valuation(spec, mu)


# ---------------------------------------------------------------------------
# bound verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    n: int
    mu_Gn: Optional[int]  # None: G_n = 0, row skipped
    lower: int
    upper: int
    ok: bool

    @property
    def zero_skip(self) -> bool:
        return self.mu_Gn is None

    @property
    def lower_ok(self) -> bool:
        return self.mu_Gn is None or self.lower <= self.mu_Gn


def _n0(rows) -> Optional[int]:
    """Least n such that every row from n on is ok; None if the last row fails."""
    if not rows:
        return 0
    if not rows[-1].ok:
        return None
    n0 = rows[0].n
    for row in rows:
        if not row.ok:
            n0 = row.n + 1
    return n0


@dataclass(frozen=True)
class BoundReport:
    mu: Place
    constants: BoundConstants
    upper_constant: int
    rows: tuple[BoundRow, ...]
    n0_observed: Optional[int] = field(default=None)

    @property
    def lower_violations(self) -> list[BoundRow]:
        return [r for r in self.rows if not r.lower_ok]

    @property
    def zero_rows(self) -> list[int]:
        return [r.n for r in self.rows if r.zero_skip]


def _bound_rows(spec, mu, c_tilde, c_up, m, start, stop):
    rows = []
    for n, g in power_sum_values(spec, start, stop):
        lower, upper = c_tilde + n * m, c_up + n * m
        if g.is_zero():
            rows.append(BoundRow(n, None, lower, upper, True))
        else:
            v = val_at_place(g, mu)
            rows.append(BoundRow(n, v, lower, upper, lower <= v <= upper))
    return rows


def _chunks(n_max: int, parts: int) -> list[tuple[int, int]]:
    total = n_max + 1
    step = -(-total // parts)
    return [(a, min(a + step, total)) for a in range(0, total, step)]


def _scan(chunk, n_max: int, workers: Optional[int]) -> list:
    """Run ``chunk(start, stop)`` over [0, n_max], split across processes
    when RECGROW_THREADS (or ``workers``) allows; rows come back in n order."""
    w = _workers(workers)
    if w == 1 or n_max < 32:
        return chunk(0, n_max + 1)
    out = []
    with ProcessPoolExecutor(max_workers=w) as pool:
        futs = [pool.submit(chunk, a, b) for a, b in _chunks(n_max, w)]
        for f in futs:
            out.extend(f.result())
    return out


def verify_bounds(spec: PowerSumSpec, mu: Place, n_max: int,
                  workers: Optional[int] = None) -> BoundReport:
    """Evaluate mu(G_n) for 0 <= n <= n_max against both bounds."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    consts = bound_constants(spec, mu)
    c_up = theorem1_constant(spec, mu)
    chunk = partial(_bound_rows, spec, mu, consts.c_tilde, c_up, consts.min_alpha_val)
    rows = _scan(chunk, n_max, workers)
    return BoundReport(mu, consts, c_up, tuple(rows), _n0(rows))


@dataclass(frozen=True)
class DegreeRow:
    n: int
    deg_Gn: Optional[int]  # None: G_n = 0
    nu_inf: Optional[int]
    lower: int
    ok: bool

    @property
    def zero_skip(self) -> bool:
        return self.deg_Gn is None

    @property
    def slack(self) -> Optional[int]:
        return None if self.deg_Gn is None else self.deg_Gn - self.lower


@dataclass(frozen=True)
class DegreeReport:
    constant: int
    max_alpha_degree: int
    rows: tuple[DegreeRow, ...]
    n0_observed: Optional[int]


def _degree_rows(spec, c, dmax, start, stop):
    rows = []
    for n, g in power_sum_values(spec, start, stop):
        lower = n * dmax - c
        if g.is_zero():
            rows.append(DegreeRow(n, None, None, lower, True))
            continue
        deg = g.num.degree
        nu = val_infty(g)
        rows.append(DegreeRow(n, deg, nu, lower, deg >= lower and nu == -deg))
    return rows


def corollary_degree_bound(spec: PowerSumSpec, n_max: int,
                           workers: Optional[int] = None) -> DegreeReport:
    """deg G_n >= n * max_j deg alpha_j - C, the upper bound read at infinity."""
    if not spec.is_polynomial():
        raise ValueError("corollary requires polynomial data")
    _require_nondegenerate(spec)
    c = theorem1_constant(spec, INFINITY)
    dmax = max(a.num.degree for a in spec.alphas)
    rows = _scan(partial(_degree_rows, spec, c, dmax), n_max, workers)
    return DegreeReport(c, dmax, tuple(rows), _n0(rows))


# ---------------------------------------------------------------------------
# linear independence of {pi_ji * alpha_j**n}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndependenceWitness:
    """``pis[j]`` indexes the coefficients of term j chosen as a Q-basis of
    its coefficient span; ``labels`` name the elements (j, k) of the set in
    order; ``dependent_subset`` is a minimal dependent subset, if any."""

    pis: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, int], ...]
    dependent_subset: Optional[tuple[tuple[int, int], ...]] = None


class IndependenceResult(NamedTuple):
    independent: bool
    witness: IndependenceWitness


def _pis(spec: PowerSumSpec) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(independent_subset(term.coeffs)) for term in spec.terms)


def _minimal_dependent(elements: Sequence[RatFunc]) -> list[int]:
    current = list(range(len(elements)))
    for idx in list(current):
        trial = [c for c in current if c != idx]
        if rank([elements[c] for c in trial]) < len(trial):
            current = trial
    return current


def _independence_at(spec, pis, powers) -> IndependenceResult:
    labels, elements = [], []
    for j, (term, idx, pw) in enumerate(zip(spec.terms, pis, powers)):
        for k in idx:
            labels.append((j, k))
            elements.append(term.coeffs[k] * pw)
    if rank(elements) == len(elements):
        return IndependenceResult(True, IndependenceWitness(pis, tuple(labels)))
    sub = tuple(labels[i] for i in _minimal_dependent(elements))
    return IndependenceResult(False, IndependenceWitness(pis, tuple(labels), sub))


def independence_test(spec: PowerSumSpec, n: int) -> IndependenceResult:
    if n < 0:
        raise ValueError("n must be >= 0")
    powers = [term.alpha ** n for term in spec.terms]
    return _independence_at(spec, _pis(spec), powers)


def independence_scan(spec: PowerSumSpec, n_max: int) -> list[IndependenceResult]:
    """independence_test for n = 0..n_max, sharing the alpha powers."""
    pis = _pis(spec)
    powers = [RatFunc.constant(1)] * spec.t
    out = []
    for _ in range(n_max + 1):
        out.append(_independence_at(spec, pis, powers))
        powers = [pw * term.alpha for term, pw in zip(spec.terms, powers)]
    return out


def horizon_of(scan: Sequence[IndependenceResult]) -> Optional[int]:
    last = None
    for n, res in enumerate(scan):
        if not res.independent:
            last = n
    return None if last is None else last + 1


def independence_horizon(spec: PowerSumSpec, n_max: int) -> Optional[int]:
    """One past the last n <= n_max where the set is dependent, else None.

    An empirical stand-in for the (unstated) bound on such n.
    """
    _require_nondegenerate(spec)
    return horizon_of(independence_scan(spec, n_max))


# ---------------------------------------------------------------------------
# subspace-type inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZannierInstance:
    """phi_1..phi_n independent over Q, S holding all poles of every phi_i
    and all zeros of phi_1..phi_r."""

    phis: tuple[RatFunc, ...]
    r: int
    S: PlaceSet

    def __post_init__(self):
        phis = tuple(self.phis)
        object.__setattr__(self, "phis", phis)
        n = len(phis)
        if n == 0:
            raise ValueError("need at least one function")
        if not 0 <= self.r <= n:
            raise ValueError(f"r must lie in [0, {n}]")
        if any(f.is_zero() for f in phis) or rank(phis) < n:
            raise HypothesisError("phis are linearly dependent over Q")
        if self.sigma.is_zero():
            raise ValueError("sigma = sum of phis is zero")
        for i, f in enumerate(phis):
            if not self.S.covers(f.den) or (f.num.degree > f.den.degree and INFINITY not in self.S):
                raise HypothesisError(f"S violates hypothesis: misses a pole of phi_{i + 1}")
            if i < self.r and (not self.S.covers(f.num)
                               or (f.den.degree > f.num.degree and INFINITY not in self.S)):
                raise HypothesisError(f"S violates hypothesis: misses a zero of phi_{i + 1}")

    @property
    def n(self) -> int:
        return len(self.phis)

    @property
    def sigma(self) -> RatFunc:
        total = RatFunc.constant(0)
        for f in self.phis:
            total = total + f
        return total


class ZannierResult(NamedTuple):
    lhs: int
    rhs: int
    ok: bool


def _refined_places(S: PlaceSet, funcs: Sequence[RatFunc]) -> list[Place]:
    """Split the finite places of S so each piece sees a single valuation of
    every function in ``funcs``."""
    finite = S.finite_factors
    out = [p for p in S if p.is_infinite]
    if not finite:
        return out
    polys = list(finite)
    for f in funcs:
        polys.extend(p for p in (f.num, f.den) if not p.is_constant())
    for piece in coprime_basis(polys).factors:
        if any(piece.divides(s) for s in finite):
            out.append(Place(piece))
    return out


def zannier_check(inst: ZannierInstance) -> ZannierResult:
    sigma = inst.sigma
    lhs = 0
    for place in _refined_places(inst.S, (sigma,) + inst.phis):
        gap = val_at_place(sigma, place) - min(val_at_place(f, place) for f in inst.phis)
        lhs += place.complex_degree * gap
    rhs = comb(inst.n, 2) * (inst.S.size_over_C + 2 * GENUS - 2)
    rhs += sum(height(f) for f in inst.phis[inst.r:])
    return ZannierResult(lhs, rhs, lhs <= rhs)
