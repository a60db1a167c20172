"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SeqDecompError(Exception):
    """Base class for every error raised by this package."""


# field layer
class FieldError(SeqDecompError):
    pass


class NotPrime(FieldError):
    pass


class TooLarge(FieldError):
    pass


class Reducible(FieldError):
    pass


class NotMonic(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


# polynomials
class DegreeTooLargeForChar(SeqDecompError):
    pass


class NotOverPrimeField(SeqDecompError):
    pass


class NotInvertible(SeqDecompError):
    pass


# instances / IO
class InputError(SeqDecompError):
    """Malformed input documents; mapped to CLI exit code 4."""


class SchemaError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NonCommuting(InputError):
    pass


class SeparationViolated(InputError):
    pass


class FieldTooSmall(InputError):
    pass


# algorithms
class GenericityFailure(SeqDecompError):
    """Random choices kept failing; mapped to CLI exit code 2."""


class VerificationFailed(SeqDecompError):
    """An oracle check rejected a result; mapped to CLI exit code 3."""


class AnnihilatorFail(SeqDecompError):
    """The genericity-based annihilator algorithm met an irreducible column."""


class BoundTooSmall(SeqDecompError):
    pass


class RankDeficient(SeqDecompError):
    pass
