"""Shared error types."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed the library's desk-scale bounds.

    The message always states the bound and, where one exists, the cheaper
    route (a cardinality cap, a closed-form generator, a faster strategy).
    """
