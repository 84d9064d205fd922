"""Exception hierarchy shared by every bigrr module."""


class BigrrError(Exception):
    """Base class for all library errors."""


class InvalidSpecError(BigrrError, ValueError):
    pass


class TableParseError(BigrrError, ValueError):
    pass


class GroupValidationError(BigrrError, ValueError):
    pass


class CapExceededError(BigrrError):
    """A computational size cap was hit (group order, automorphism count, ...)."""


class SizeExceededError(CapExceededError):
    pass


class SpaceTooLargeError(CapExceededError):
    pass


class NotInvariantError(BigrrError, ValueError):
    pass


class ConditionNotMetError(BigrrError, ValueError):
    pass


class IdentityResultError(BigrrError):
    """An automorphism builder produced the identity map."""


class VerificationError(BigrrError):
    """A constructed map failed its automorphism check (an implementation bug)."""
