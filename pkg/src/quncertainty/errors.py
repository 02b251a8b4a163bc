"""Exception hierarchy shared by every module."""


class QuncertaintyError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(QuncertaintyError):
    """Incompatible topologies, operator kinds or array shapes."""


class DegenerateStateError(QuncertaintyError):
    """A state with zero norm where a normalizable one is required."""


class NotNormalizedError(QuncertaintyError):
    """Statistics were requested for a state whose norm is not 1."""


class InapplicableError(QuncertaintyError):
    """A quantity is undefined because the state is outside an operator domain.

    ``report`` carries the failing :class:`~quncertainty.operators.DomainReport`
    and ``label`` names the operator (or product) whose domain was violated.
    """

    def __init__(self, message, report=None, label=None):
        super().__init__(message)
        self.report = report
        self.label = label


class OracleCapExceeded(QuncertaintyError):
    """The dense oracle was asked for a matrix larger than its cap."""


class SpecParseError(QuncertaintyError):
    """Malformed state, operator or sweep specification."""
