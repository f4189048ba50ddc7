"""Exception hierarchy.

Errors fall into three families that the command line maps onto exit
codes: bad input (2), numerical trouble (3) and failed hypotheses of a
statement under test (reported as not-verifiable inside suites).
"""


class EssSpecError(Exception):
    """Base class for every error raised by the package."""


class InputError(EssSpecError):
    """Malformed or out-of-range input."""


class InvalidParameterError(InputError, ValueError):
    pass


class ValidationError(InputError, ValueError):
    """A config or spec document failed validation.

    ``path`` locates the offending field, e.g. ``cases[0].operator.matrix``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ShapeError(InputError, ValueError):
    pass


class AliasingError(InputError, ValueError):
    """Sampling too coarse to represent a trigonometric polynomial."""


class UnsupportedError(InputError, NotImplementedError):
    pass


class NumericalError(EssSpecError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy answer."""


class SolverError(NumericalError):
    pass


class SingularResolventError(NumericalError):
    def __init__(self, message, condition=float("inf")):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class OnCurveError(NumericalError):
    """The point lies on (or too close to) the symbol curve."""


class ContourCollisionError(NumericalError):
    pass


class PrecisionError(NumericalError):
    pass


class HypothesisError(EssSpecError):
    """The inputs do not satisfy the hypotheses of the statement being checked."""


class NotInvariantError(HypothesisError):
    def __init__(self, defect, tol):
        super().__init__(f"subspace is not invariant: defect {defect:.3e} > tol {tol:.1e}")
        self.defect = defect
        self.tol = tol


class BasisError(InputError, ValueError):
    """Basis matrix is numerically rank deficient."""


class NotVerifiableError(HypothesisError):
    pass


class HypothesisViolationError(HypothesisError):
    pass
