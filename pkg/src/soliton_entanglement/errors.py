"""Exception hierarchy."""


class SolitonEntanglementError(Exception):
    """Base class for all package errors."""


class InvalidGridError(SolitonEntanglementError, ValueError):
    pass


class DomainMismatchError(SolitonEntanglementError, ValueError):
    pass


class DesyncError(SolitonEntanglementError, ValueError):
    """Classical field and fluctuation state are not on the same grid/time."""


class IntegratorError(SolitonEntanglementError, ArithmeticError):
    pass


class InvalidPartitionError(SolitonEntanglementError, ValueError):
    pass


class InvalidCorrelationsError(SolitonEntanglementError, ValueError):
    pass


class UnphysicalStateError(SolitonEntanglementError, ValueError):
    pass


class ConfigError(SolitonEntanglementError, ValueError):
    pass
