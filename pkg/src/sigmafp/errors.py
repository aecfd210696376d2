"""Exception types shared across the package.

The CLI maps these onto exit codes, so the hierarchy mirrors the three
failure flavours: bad input, violated precondition, and honest refusal.
"""


class SigmaFpError(Exception):
    """Base class for all package-specific errors."""


class ProblemFormatError(SigmaFpError):
    """A problem, subspace, or report file could not be parsed or validated."""


class NotVirtualSubdirect(SigmaFpError):
    """The queried subspace point is not a virtual subdirect product."""


class NotFinitelyPresented(SigmaFpError):
    """An openness certificate was requested for a non-FP point."""


class NonPointedPiece(SigmaFpError):
    """A certificate is unavailable because a cone piece contains a line."""


class TheoremAApplies(SigmaFpError):
    """No open non-FP box exists: the generic-openness condition dim <= k holds."""


class UnsupportedRank(SigmaFpError):
    """The rho construction is only available for rank <= 2 or equal cone data."""


class ConstructionFailed(SigmaFpError):
    """An exact post-check failed where the construction guarantees success."""


class NoSuitableFactors(SigmaFpError):
    """Fewer than two factors have a nonzero cone complement."""
