"""Exception hierarchy shared by every wittkit module."""


class WittkitError(Exception):
    """Base class for all library errors."""


class ConfigurationError(WittkitError, ValueError):
    """Invalid ring descriptor, truncation set or other parameter."""


class MalformedInputError(WittkitError, ValueError):
    """A JSON document or element does not have the expected shape."""


class RingMismatchError(WittkitError, ValueError):
    """Operands live over different rings, precisions or truncation sets."""


class NotSpecialUnitError(WittkitError, ValueError):
    """A series or matrix was expected to reduce to the identity mod t."""


class ShapeError(WittkitError, ValueError):
    """Matrix shapes do not compose."""


class UnsupportedOperationError(WittkitError):
    """The requested operation is not implemented for these inputs."""


class TensorUnsupportedError(UnsupportedOperationError):
    def __init__(self, left, right):
        super().__init__(
            f"tensor product not implemented for this pair: {left!r} (x) {right!r}"
        )
        self.left = left
        self.right = right


class SizeGuardError(WittkitError):
    """A brute-force enumeration would exceed its resource guard."""
