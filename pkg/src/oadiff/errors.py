"""Exception hierarchy shared by all modules."""


class OadiffError(Exception):
    """Base class for every error raised by the package."""


class BudgetError(OadiffError):
    """A computation would exceed the configured size budget."""


class VerificationError(OadiffError):
    """A structure failed one of its defining conditions."""
