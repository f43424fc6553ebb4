"""Exception hierarchy shared by all modules."""


class QbrachError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QbrachError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonDiagonalizableError(DomainError):
    """A 2x2 matrix is defective (coalescing eigenvectors)."""


class ExceptionalPointError(NonDiagonalizableError):
    """A PT-symmetric Hamiltonian sits on its exceptional point."""


class PTBrokenError(DomainError):
    """A PT-symmetric Hamiltonian is in the broken phase (complex spectrum)."""


class DegeneratePairError(DomainError):
    """Initial and final states coincide, so no transport axis is defined."""


class ConfigError(QbrachError):
    """A scenario configuration failed validation.

    Attributes:
        key: dotted path of the offending configuration key.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
