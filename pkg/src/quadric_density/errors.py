"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """An argument exceeds the range covered by a precomputed table."""


class FormatError(ValueError):
    """Malformed input data (permutations, fiber files, CLI lists)."""


class ResourceError(RuntimeError):
    """A memory or search budget would be exceeded."""


class PartialResultError(ResourceError):
    """A long run stopped early; the partial state was written to ``checkpoint``."""

    def __init__(self, message, checkpoint=None, ledger=None):
        super().__init__(message)
        self.checkpoint = checkpoint
        self.ledger = ledger
