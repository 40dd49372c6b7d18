class DomainError(ValueError):
    """Raised when an operation is evaluated outside its mathematical domain.

    ``index`` optionally carries the grid index (or query index) at which the
    failure was detected, so that callers can report where a stencil broke.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
