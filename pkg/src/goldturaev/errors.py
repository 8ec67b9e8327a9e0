"""Exception types raised by the engine."""


class GTError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class SignatureMismatch(GTError):
    pass


class NonUnitalLog(GTError):
    pass


class NonAugmentedExp(GTError):
    pass


class DegreeOverflow(GTError):
    """An operation would leave no exactly-known degrees."""


class GenusNotZero(GTError):
    pass


class NotPositiveDegree(GTError):
    pass


class NotSpecial(GTError):
    pass


class KvIFailed(GTError):
    pass


class LogFailure(GTError):
    pass


class ZeroElement(GTError):
    pass


class DecompositionAmbiguous(GTError):
    pass


class NotInImage(GTError):
    """A linear equation has no exact solution."""
