"""Exception hierarchy.

Every failure mode carries a short machine-readable ``code`` so the CLI can
map it onto exit codes without string matching.
"""


class StrichartzLabError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class GridUnderresolvedError(StrichartzLabError):
    """The requested object cannot be represented on the current grid."""

    code = "grid-underresolved"


class InvalidAlphaError(StrichartzLabError):
    code = "invalid-alpha"


class InvalidExponentError(StrichartzLabError):
    code = "invalid-exponent"


class InvalidInputError(StrichartzLabError):
    code = "invalid-input"


class EndpointPairError(StrichartzLabError):
    code = "endpoint-pair"


class NoConvergenceError(StrichartzLabError):
    """Adaptive time window doubled past its cap without stabilizing."""

    code = "no-convergence"


class StalledError(StrichartzLabError):
    """Power iteration oscillated beyond tolerance without converging."""

    code = "stalled"


class SingularAtZeroError(StrichartzLabError):
    """Negative-order derivative requested for data with zero-mode mass."""

    code = "singular-at-zero"


class OnDiagonalError(StrichartzLabError):
    code = "on-diagonal"


class InvalidPError(StrichartzLabError):
    code = "invalid-p"


class SupportViolationError(StrichartzLabError):
    code = "support-violation"


class DegenerateSequenceError(StrichartzLabError):
    """No phase coefficient diverges, so no oscillatory decay is predicted."""

    code = "degenerate-sequence"
