"""Exception types shared across the package."""

__all__ = [
    "PreconditionError",
    "SolverError",
    "DegenerateError",
    "WrongBaseError",
    "ReconstructionError",
]


class PreconditionError(ValueError):
    """Input violates a documented precondition of an operation."""


class SolverError(RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class DegenerateError(PreconditionError):
    """Parameters lie on the excluded degenerate locus of a construction."""


class WrongBaseError(PreconditionError):
    """Operation is only defined over a specific transition matrix."""


class ReconstructionError(PreconditionError):
    """Word reconstruction failed; ``code`` states why.

    Codes: ``no_match`` (a value matches no edge consistent with the walk),
    ``not_in_G`` (the chain's branch values are not pairwise distinct, so
    lookups are ambiguous), ``bad_terminal`` (the final value equals 1, so
    the terminal symbol has a unique predecessor and carries no information).
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
