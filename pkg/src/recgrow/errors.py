"""Exception types.  All derive from ValueError: they signal inputs that
violate a hypothesis, never a failed inequality (those are reported)."""


class PlaceIncompatibleError(ValueError):
    """A finite place whose roots see different valuations of a function."""


class DegenerateSequenceError(ValueError):
    """Two characteristic roots have a constant (or root-of-unity) ratio."""


class HypothesisError(ValueError):
    """Input violates the hypotheses of the inequality being checked."""


class PrecisionError(ValueError):
    """Certified arithmetic could not decide at the requested precision."""
