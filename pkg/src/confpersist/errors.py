"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`ConfPersistError`,
so the command line front end can turn it into a machine-readable record.
"""


class ConfPersistError(Exception):
    """Base class for all library errors."""


class InvalidMetric(ConfPersistError, ValueError):
    pass


class NonIntegerWeight(ConfPersistError, ValueError):
    pass


class MetricContradiction(ConfPersistError, ValueError):
    """An intrinsic distance came out smaller than the ambient one."""


class NotInherited(ConfPersistError, ValueError):
    pass


class BudgetExceeded(ConfPersistError, RuntimeError):
    pass


class IndexOutOfRange(ConfPersistError, IndexError):
    pass


class NonMonotoneFiltration(ConfPersistError, ValueError):
    pass


class ScaleMismatch(ConfPersistError, ValueError):
    pass


class NotACocycle(ConfPersistError, ValueError):
    pass


class GuardViolated(ConfPersistError, ValueError):
    """Proximity scale too large for the separation of a configuration."""


class CocycleViolation(ConfPersistError, ValueError):
    def __init__(self, message, triangle=None):
        super().__init__(message)
        self.triangle = triangle


class NotK2(ConfPersistError, ValueError):
    pass


class OddCoboundary(ConfPersistError, ArithmeticError):
    pass


class ToleranceInvalid(ConfPersistError, ValueError):
    pass


class KTooLarge(ConfPersistError, ValueError):
    pass
