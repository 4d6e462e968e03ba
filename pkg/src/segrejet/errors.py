"""Exception hierarchy shared by all modules."""


class SegreJetError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(SegreJetError, ValueError):
    """Arity or truncation mismatch between series that must agree."""


class DomainError(SegreJetError, ValueError):
    """An operation was applied outside its domain (e.g. non-normal Q)."""


class SingularJacobian(SegreJetError, ArithmeticError):
    """The linear part that an implicit-function solve needs is singular."""


class TruncationExhausted(SegreJetError):
    """The requested computation needs more jet order than is available."""


class NotFiniteTypeAtOrderK(SegreJetError):
    """No nonvanishing witness for finite type was found up to the jet order.

    This is order-bounded evidence only, never a proof of infinite type.
    """


class BetaDegenerate(SegreJetError, ArithmeticError):
    """The averaging chart ``(w + abar(w))/2`` has singular linear part."""


class CriterionFailed(SegreJetError):
    """The parameter-independence criterion does not hold."""


class MapVerificationFailed(SegreJetError):
    """An assembled map does not send the source into the target."""


class RestrictionDegenerate(SegreJetError):
    """``F`` restricted to the Segre variety at 0 is not a local biholomorphism."""


class ParseError(SegreJetError, ValueError):
    """Malformed manifold or map text; carries ``line`` and ``col``."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class NonInvertible(SegreJetError):
    """An assembled map germ is not a local biholomorphism at 0."""
