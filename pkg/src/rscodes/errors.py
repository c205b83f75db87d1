"""Exception hierarchy shared by every module."""


class CodingError(Exception):
    """Base class for library errors."""


class NotPrime(CodingError, ValueError):
    pass


class NotMinimalPolynomial(CodingError, ValueError):
    pass


class DivideByZero(CodingError, ZeroDivisionError):
    pass


class BadParameters(CodingError, ValueError):
    pass


class TooLarge(CodingError, ValueError):
    """Requested exhaustive enumeration exceeds the configured budget."""


class TooManyErasures(CodingError):
    pass


class DecodeFailure(CodingError):
    pass


class InsufficientRank(CodingError):
    pass


class TooManyCorruptRows(CodingError):
    pass


class DependentErrors(CodingError):
    pass


class NoControlWord(CodingError):
    pass


class ConstraintViolation(CodingError):
    pass


class Unmatchable(CodingError):
    pass


class CapacityExceeded(CodingError):
    pass


class BadDistribution(CodingError, ValueError):
    pass


class Ambiguous(CodingError):
    pass


class InfeasibleCapacity(CodingError, ValueError):
    pass


class DecodingStopped(CodingError):
    pass


class ConfigError(CodingError, ValueError):
    pass


class LegalDecodeFailure(CodingError):
    """Main-channel errors exceed the legal receiver's correction capability."""


class ReconstructFailure(CodingError):
    pass
