"""Exception types shared across the toolkit."""


class IdiomtkError(Exception):
    """Base class for all toolkit errors."""


class DataError(IdiomtkError):
    """Malformed or inconsistent input data (bad rows, missing ids, ...)."""


class ProviderError(IdiomtkError):
    """Translation provisioning failed (cache miss without provider, HTTP failure)."""


class UsageError(IdiomtkError):
    """Invalid combination of command-line arguments."""
