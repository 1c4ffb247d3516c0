"""Exception types shared by every module."""


class CostcxError(Exception):
    """Base class for toolkit errors."""


class ConfigError(CostcxError, ValueError):
    """Invalid parameters or configuration (validation failure)."""


class DomainError(CostcxError, ValueError):
    """Inputs outside the mathematical domain of an operation."""


class InternalError(CostcxError, RuntimeError):
    """A self-check failed. Should never happen."""
