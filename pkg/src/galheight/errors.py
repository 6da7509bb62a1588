"""Typed errors shared across the toolkit.

Every domain failure raises a subclass of GalheightError carrying a stable
`name` used by the CLI's JSON error envelope, so callers can switch on the
name without parsing messages.
"""


class GalheightError(Exception):
    name = "GalheightError"

    def to_json(self):
        return {"error": self.name, "message": str(self)}


class NonPrimeP(GalheightError):
    name = "NonPrimeP"


class ReduciblePolynomial(GalheightError):
    name = "ReduciblePolynomial"


class MixedParents(GalheightError):
    name = "MixedParents"


class NotAUnit(GalheightError):
    name = "NotAUnit"


class TooLarge(GalheightError):
    name = "TooLarge"


class SingularMatrix(GalheightError):
    name = "SingularMatrix"


class NotSubgroup(GalheightError):
    name = "NotSubgroup"


class NonzeroTrace(GalheightError):
    name = "NonzeroTrace"


class NotUnipotentAtLevel(GalheightError):
    name = "NotUnipotentAtLevel"


class PreconditionViolated(GalheightError):
    name = "PreconditionViolated"


class OddWeight(GalheightError):
    name = "OddWeight"


class ZeroPolynomial(GalheightError):
    name = "ZeroPolynomial"


class RootIsolationFailure(GalheightError):
    name = "RootIsolationFailure"


class NonpositiveConstant(GalheightError):
    name = "NonpositiveConstant"


class MissingCoefficient(GalheightError):
    name = "MissingCoefficient"


class NetworkError(GalheightError):
    name = "NetworkError"


class NotFound(GalheightError):
    name = "NotFound"


class SchemaMismatch(GalheightError):
    name = "SchemaMismatch"


class InsufficientCoefficients(GalheightError):
    name = "InsufficientCoefficients"


class ParseError(GalheightError):
    name = "ParseError"


class InvariantViolation(GalheightError):
    name = "InvariantViolation"
