"""
Exception hierarchy for isoReduce.

Every error carries the process exit code the command line reports for it:
1 for domain errors, 2 for input errors, 3 for numerical failures.
"""
from typing import Optional, Sequence


class IsoReduceError(Exception):
    """Base class for all library errors."""

    exit_code = 1


# -- input errors (exit 2) --------------------------------------------------

class InputError(IsoReduceError):
    exit_code = 2


class GraphFormatError(InputError):
    """Malformed graph file."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}{message}")


class ParamsFormatError(InputError):
    """Malformed family parameter file."""


# -- domain errors (exit 1) -------------------------------------------------

class DomainError(IsoReduceError):
    exit_code = 1


class EmptyStructuralSetError(DomainError):
    """A structural set must be nonempty."""


class NotStructuralError(DomainError):
    """The vertex set misses a non-loop cycle."""

    def __init__(self, witness: Sequence[int]):
        self.witness = tuple(witness)
        path = " -> ".join(str(v) for v in self.witness)
        super().__init__(f"not a structural set; interior cycle {path}")


class SigmaProximityError(DomainError):
    """Evaluation point lies in (or too close to) the excluded set."""

    def __init__(self, lam: complex, sigma: complex):
        self.lam = lam
        self.sigma = sigma
        super().__init__(f"lambda={lam} lies within tolerance of sigma value {sigma}")


class InvalidParamsError(DomainError):
    """Markov family parameters violate a validity condition."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"condition {condition} violated: {message}")


class NotAnEigenvalueError(DomainError):
    """The requested value is not an eigenvalue of the reduced matrix."""


class OracleError(DomainError):
    """A weight oracle contradicts its declared supports or norm bound."""


# -- numerical failures (exit 3) --------------------------------------------

class NumericalError(IsoReduceError):
    exit_code = 3


class EigensolverError(NumericalError):
    """Dense eigensolver did not converge."""


class SingularInteriorError(NumericalError):
    """lambda*I - A[interior, interior] is singular."""


class ConvergenceError(NumericalError):
    """An iteration or series did not converge within its budget."""


class NodeBudgetError(NumericalError):
    """Path enumeration exceeded its node budget."""


class WindowTooSmallError(NumericalError):
    """The probed window cannot reach the requested tolerance."""


class ConsistencyError(NumericalError):
    """Two independent computations disagree beyond tolerance."""
