"""Cost-based complexity toolkit.

Classical complexity quantifiers plus three cost trade-off experiments
(kernel reconstruction, multi-agent annealing, airport network budget).
"""

from .errors import ConfigError, DomainError, InternalError

__version__ = "0.1.0"

__all__ = ["ConfigError", "DomainError", "InternalError", "__version__"]
