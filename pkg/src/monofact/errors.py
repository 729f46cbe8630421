"""Exception hierarchy shared by every module.

Errors split into families that the command line maps to exit codes:
bad input (2), failed verification of a user-supplied script or diagram (3),
internal integrity failures (4), which always indicate a bug, and an
exhausted work budget (5).
"""


class MonofactError(Exception):
    """Base class for all package errors."""


class InvalidInput(MonofactError, ValueError):
    """The supplied data cannot form a valid problem instance."""


class DetNotUnit(InvalidInput):
    pass


class NegativeEntry(InvalidInput):
    pass


class NotDominated(InvalidInput):
    """Some coordinate of w = A^-1 v is not positive."""


class NonPositiveValuation(InvalidInput):
    pass


class ParseError(InvalidInput):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = ", ".join(x for x in (f"line {line}" if line else "", field or "") if x)
        super().__init__(f"{where}: {message}" if where else message)


class IndependenceRisk(InvalidInput):
    """Radical-mode coordinates are rationally dependent, so comparisons may tie."""


class IndependenceViolation(MonofactError, ArithmeticError):
    """A strict comparison could not be decided (a tie, or a tie within tolerance)."""


class DomainError(MonofactError, ValueError):
    pass


class VerificationFailure(MonofactError):
    """A script or diagram does not do what it claims."""


class NotPermissible(VerificationFailure):
    def __init__(self, op, step=None, reason=""):
        self.op = op
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"{op} is not permissible{where}{': ' + reason if reason else ''}")


class PhaseViolation(VerificationFailure):
    def __init__(self, op, step):
        self.op = op
        self.step = step
        super().__init__(f"{op} is not allowed in its phase (step {step})")


class ScriptNotTerminal(VerificationFailure):
    """Replaying the script does not end at the identity matrix."""


class PreconditionViolation(MonofactError):
    pass


class BudgetExceeded(MonofactError):
    """The factorization needed more elementary ops than its work budget allows."""


class IntegrityError(MonofactError):
    """An internal invariant failed. Never caused by bad input."""


class ConversionCheckFailed(IntegrityError):
    pass


class ValuationOrderViolation(IntegrityError):
    pass
