"""Exception types raised across the package.

Every error carries an ``exit_code`` so the command-line front end can map
failures to process status without a lookup table of its own.
"""


class QMError(Exception):
    exit_code = 1


class SplitAlgebra(QMError):
    exit_code = 2


class DefiniteAlgebra(QMError):
    exit_code = 3


class OrderError(QMError):
    exit_code = 4


class NotClosed(OrderError):
    pass


class NotIntegral(OrderError):
    pass


class RankDeficient(OrderError):
    pass


class SaturationStuck(OrderError):
    pass


class NotInOrder(OrderError):
    pass


class PolarizationError(QMError):
    exit_code = 5


class SearchExhausted(PolarizationError):
    pass


class NotUnimodular(PolarizationError):
    pass


class NotAUnit(PolarizationError):
    pass


class NumericCheckError(QMError):
    exit_code = 6


class DegeneratePeriods(NumericCheckError):
    pass


class RiemannRelationViolation(NumericCheckError):
    pass


class NotSiegel(NumericCheckError):
    pass


class StepTooSmall(NumericCheckError):
    pass


class StepTooLarge(NumericCheckError):
    pass


class LedgerError(QMError):
    exit_code = 7


class InconsistentH11(LedgerError):
    pass


class MissingH11(LedgerError):
    pass
