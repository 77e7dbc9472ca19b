class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class ResourceError(RuntimeError):
    """An exhaustive enumeration or tree construction exceeded its budget."""
