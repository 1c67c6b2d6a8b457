"""
Exception hierarchy for spreadhom.
"""
from typing import Any, List, Optional


class SpreadHomError(Exception):
    """Base class for all library errors."""


class InvalidInputError(SpreadHomError):
    """Input data violates a documented precondition."""


class ConfigurationError(InvalidInputError):
    """Environment configuration is malformed."""


class UnknownPointError(InvalidInputError):
    """A point id does not belong to the poset."""

    def __init__(self, point: Any):
        super().__init__(f"unknown point {point!r}")
        self.point = point


class PosetError(InvalidInputError):
    """The order relation is not a partial order."""


class NotASpreadError(InvalidInputError):
    """A point set is not convex and connected."""

    def __init__(self, message: str, components: Optional[List[frozenset]] = None):
        super().__init__(message)
        self.components = components or []


class NotInUpperSetError(InvalidInputError):
    """A point lies outside Q+ so it has no floor."""


class NonAlignedGridError(InvalidInputError):
    """A point set is not a product of per-axis subsets."""


class SupportOutsideQPlusError(InvalidInputError):
    """A module is nonzero somewhere outside Q+."""


class FunctorialityError(InvalidInputError):
    """Two Hasse paths between the same points give different maps."""


class NaturalityError(InvalidInputError):
    """A family of pointwise maps does not commute with the structure maps."""


class FamilyError(InvalidInputError):
    """A family lacks required members or a module is not a member."""


class TooLargeError(SpreadHomError):
    """An enumeration exceeded the configured cap."""


class TruncatedError(SpreadHomError):
    """A resolution did not terminate within its length budget."""

    def __init__(self, max_len: int):
        super().__init__(f"resolution exceeds budget max_len={max_len}")
        self.max_len = max_len
