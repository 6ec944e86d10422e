"""Exception hierarchy shared by every workbench module.

Each error carries a stable ``kind`` that doubles as the message prefix the
command line prints, so callers (and test harnesses) can match on it.
"""

from datetime import datetime
from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for domain errors."""

    kind = "workbench-error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used on standard error by the cli."""
        return {
            'success': False,
            'error': self.message,
            'kind': self.kind,
            'details': self.details,
            'timestamp': datetime.now().isoformat(),
        }


class ShapeError(WorkbenchError):
    kind = "shape-error"


class AlphabetError(WorkbenchError):
    kind = "alphabet-error"


class FormatError(WorkbenchError):
    """A text artifact (.tm, .rm, .rf, .ckt, DIMACS) could not be parsed."""

    kind = "format-error"

    def __init__(self, message: str, line: Optional[int] = None, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        if line is not None:
            details['line'] = line
            message = f"line {line}: {message}"
        super().__init__(message, details)


class DecodeError(WorkbenchError):
    kind = "decode-error"


class OracleError(WorkbenchError):
    kind = "oracle-error"


class PromiseViolation(WorkbenchError):
    kind = "promise-violation"


class EquivalenceError(WorkbenchError):
    kind = "equivalence-error"


class NonTotalError(WorkbenchError):
    kind = "non-total"


class ResourceError(WorkbenchError):
    kind = "resource-error"


class UnsupportedError(WorkbenchError):
    kind = "unsupported"


class AuditError(WorkbenchError):
    kind = "audit-error"


class ConfigError(WorkbenchError):
    kind = "config-error"


class UnreadableFileError(WorkbenchError):
    kind = "io-error"
