"""Exact growth bounds for linear recurrence sequences over Q(x) and Q."""

from .arith import NEG_INF, CoprimeBasis, Poly, RatFunc, coprime_basis, poly_gcd, ratfunc_normalize, squarefree_part
from .errors import DegenerateSequenceError, HypothesisError, PlaceIncompatibleError, PrecisionError
from .places import INFINITY, Place, ValuationDivisor, check_lemma1, height, val_at_place, val_at_point, val_infty, valuation_divisor
from .recurrence import PowerSumSpec, RecurrenceForm, Term, eval_power_sum, is_nondegenerate, to_recurrence, unroll

__version__ = "0.1.0"
