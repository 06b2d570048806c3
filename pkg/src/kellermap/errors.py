"""Exception hierarchy.

The CLI maps these onto exit codes: input problems (``InputError``) exit
2, mathematical negatives (``MathNegative``) exit 1 and theorem
contradictions exit 3.
"""


class KellerMapError(Exception):
    pass


class InputError(KellerMapError, ValueError):
    """Malformed input or violated precondition."""


class DimensionError(InputError):
    pass


class ParseError(InputError):
    pass


class PreconditionError(InputError):
    pass


class NotNilpotentError(PreconditionError):
    pass


class MathNegative(KellerMapError):
    """The mathematics says no: not Keller, no inverse, invalid certificate."""


class NoInverseError(MathNegative):
    pass


class TheoremContradiction(KellerMapError, AssertionError):
    """A proven bound or identity failed; should never happen."""
