class CapExceeded(ValueError):
    """Requested n is above the configured enumeration cap."""


class InternalConsistencyError(RuntimeError):
    """A proved identity failed on concrete data; always an implementation bug."""
