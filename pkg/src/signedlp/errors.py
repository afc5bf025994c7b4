"""Exception types shared across the package."""


class SignedLPError(Exception):
    """Base class for all errors raised by this package."""


# -- p-adic kernel ------------------------------------------------------------

class NotIntegral(SignedLPError):
    """A rational number lies outside Z_p (denominator divisible by p)."""


class NonUnit(SignedLPError):
    """Inversion was requested for an element of positive valuation."""


class MixedContext(SignedLPError):
    """Operands belong to different (p, precision) or truncation contexts."""


# -- Lambda ring ---------------------------------------------------------------

class TruncationTooSmall(SignedLPError):
    """A requested element does not fit inside the working truncation."""


class NotDistinguished(SignedLPError):
    """Divisor is not a distinguished polynomial."""


class PrecisionExhausted(SignedLPError):
    """The p-adic precision budget ran out before a result was certified."""


# -- module model ----------------------------------------------------------------

class NotTorsion(SignedLPError):
    """Characteristic-ideal operation on a module of positive free rank."""


# -- curve engine ----------------------------------------------------------------

class ParseError(SignedLPError):
    """Malformed input file; carries a line number when one makes sense."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SingularCurve(SignedLPError):
    """The given a-invariants have vanishing discriminant."""


class BadReduction(SignedLPError):
    """a_ell was requested at a prime dividing the conductor."""


class NonConvergence(SignedLPError):
    """Period iteration failed to converge."""


# -- modular symbols ---------------------------------------------------------------

class CoefficientSupplyExhausted(SignedLPError):
    """More q-expansion coefficients were needed than the engine allows."""


class RecognitionFailed(SignedLPError):
    """No rational below the denominator bound matches the numerics."""


class IncompleteTable(SignedLPError):
    """Symbol table does not contain every residue the operation needs."""


class ContextMismatch(SignedLPError):
    """Imported table belongs to a different curve or prime."""


# -- theta / extraction ------------------------------------------------------------

class NotAUnit(SignedLPError):
    """Unit decomposition requested for a residue divisible by p."""


class CompatFailed(SignedLPError):
    """Three-term theta congruence failed; carries the coefficient index."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class NotStabilized(SignedLPError):
    """Invariants did not stabilize across the available levels."""


class WrongReductionType(SignedLPError):
    """Extraction method does not match the reduction type at p."""


class SingularSystem(SignedLPError):
    """The two-by-two extraction system could not be inverted."""


# -- reporting ------------------------------------------------------------------

class IoError(SignedLPError):
    """Wraps OS-level failures while writing reports."""
