"""Exception types shared across the library."""


class DiolabError(Exception):
    """Base class for all library-specific errors."""


class PrecisionExhausted(DiolabError):
    """A decimal comparison or certification could not be decided at the
    available error bound."""


class EmptyRange(DiolabError):
    """A lookup or truncation exceeded the available certified range."""


class NonMonotonePsi(DiolabError):
    """An approximating function failed a required monotonicity check."""


class DimensionTooLarge(DiolabError):
    """Requested dimension exceeds the exhaustive-enumeration cap."""


class SearchBoundExceeded(DiolabError):
    """An exhaustive search ran past its configured candidate budget."""


class SingularBasis(DiolabError):
    """A lattice basis is singular (or numerically indistinguishable from
    singular at the certified precision)."""


class PrimeCapExceeded(DiolabError):
    """The prime sieve budget was exhausted before a construction finished."""
