class TdqError(Exception):
    """Base class for all library errors."""


class ModeError(TdqError):
    """Arithmetic or evaluation attempted across incompatible numeric modes."""


class ParseError(TdqError):
    """Malformed scalar text or configuration value."""


class DomainError(TdqError):
    """Input outside the mathematical domain of an operation."""


class VerificationError(TdqError):
    """An identity sweep found a violating witness."""
