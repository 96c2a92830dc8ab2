class DomainError(Exception):
    """Base class for failures that stem from the inputs, not from a bug."""


class GraphFormatError(DomainError):
    pass


class InvalidDegreeVectorError(DomainError, ValueError):
    pass


class InconsistentBiDegreeError(DomainError, ValueError):
    pass


class NonexistenceError(DomainError):
    """No graph with the requested degree structure exists."""


class EnumerationCapError(DomainError):
    pass


class OutOfSupportError(DomainError, ValueError):
    """Graph has zero probability under the model (e.g. isolated node in 2K)."""


class ReferenceCoordinateError(DomainError, ValueError):
    pass
