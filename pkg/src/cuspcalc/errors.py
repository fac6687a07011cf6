"""Exception types shared across the package."""


class CuspCalcError(Exception):
    """Base class for all package errors."""


class UnsupportedPole(CuspCalcError):
    """A denominator root does not lie in the supported field Q(i)."""


class NotInvertible(CuspCalcError):
    """A family or element is not invertible; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFullyElliptic(CuspCalcError):
    """Parametrix or index machinery applied to a non-elliptic element."""

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class TruncationLoss(CuspCalcError):
    """An operation lost nonzero data outside the truncation window."""


class SharedPrincipalRequired(CuspCalcError):
    """log_ratio needs regularizers with a shared principal symbol."""


class CalibrationInconsistent(CuspCalcError):
    """No assignment of normalization constants satisfies the identities."""


class SchemaError(CuspCalcError):
    """A JSON document does not match the expected schema."""


class CompatibilityError(CuspCalcError):
    """Interior jet and end expansions of an element disagree.

    Carries the (hom degree, x order, end) coordinates of the first mismatch.
    """

    def __init__(self, message, j=None, k=None, end=None):
        super().__init__(message)
        self.j = j
        self.k = k
        self.end = end


class HypothesisViolation(CuspCalcError):
    """An index-formula mode was requested whose hypotheses fail."""

    def __init__(self, message, flag=None):
        super().__init__(message)
        self.flag = flag


class GapTooSmall(CuspCalcError):
    """SVD oracle verdict withheld: spectral gap below the trust threshold."""
