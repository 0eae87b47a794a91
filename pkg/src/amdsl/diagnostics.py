"""Source locations and located diagnostics shared by every pipeline stage."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

_CODE_RE = re.compile(r"^[A-Z]\d{3}$")


class Severity(enum.Enum):
    Error = "error"
    Warning = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based, end-inclusive region of a source file."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span start after end: {self}")

    @staticmethod
    def point(file: str, line: int, col: int) -> "SourceSpan":
        return SourceSpan(file, line, col, line, col)

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


# Used for diagnostics about models that were built in memory and therefore
# carry no source spans.
SYNTHETIC_SPAN = SourceSpan.point("<model>", 1, 1)


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan

    def __post_init__(self) -> None:
        if not _CODE_RE.match(self.code):
            raise ValueError(f"bad diagnostic code {self.code!r}")

    def render(self, color: bool = False) -> str:
        """Format as ``file:line:col: severity[CODE]: message``."""
        sev = self.severity.value
        if color:
            tint = "31" if self.severity is Severity.Error else "33"
            sev = f"\x1b[{tint}m{sev}\x1b[0m"
        return f"{self.span}: {sev}[{self.code}]: {self.message}"


def error(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(Severity.Error, code, message, span)


def warning(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(Severity.Warning, code, message, span)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.Error for d in diags)


def sort_key(diag: Diagnostic) -> tuple:
    s = diag.span
    return (s.file, s.start_line, s.start_col, diag.code)
