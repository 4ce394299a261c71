"""Exception hierarchy shared by every engine module."""


class EngineError(Exception):
    """Base class for all engine errors."""


class InconsistentError(EngineError, ValueError):
    """A linear system has no solution."""


class NotIdempotent(EngineError, ValueError):
    pass


class NotInvertible(EngineError, ValueError):
    pass


class NotChainMap(EngineError, ValueError):
    pass


class NotClosed(EngineError, ValueError):
    """A subspace is not stable under the ambient differential."""


class NotInjective(EngineError, ValueError):
    pass


class NotAComplex(EngineError, ValueError):
    """Shape mismatch or d∘d ≠ 0."""


class SizeMismatch(EngineError, ValueError):
    pass


class DegreeMismatch(EngineError, ValueError):
    pass


class RangeError(EngineError, ValueError):
    pass


class MixedParity(EngineError, ValueError):
    pass


class InapplicableError(EngineError, ValueError):
    """The hypotheses of a verification routine are not met."""


class CapExceeded(EngineError):
    """A size cap or the memory guard would be exceeded."""


class SchemaError(EngineError, ValueError):
    """Malformed instance file or JSON payload."""
