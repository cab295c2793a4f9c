"""Exception hierarchy for the crossmap toolkit.

Every failure names the offending category, pair, or line so the user can
repair the edge list. ``DocumentError`` and its subclasses cover text-format
problems (CLI exit code 2); all other ``CrossmapError`` subclasses are
domain/validation failures (CLI exit code 1).
"""

from __future__ import annotations


class CrossmapError(Exception):
    """Base class for all crossmap toolkit errors.

    ``line`` (1-based) and ``unit`` are optional context attached by the
    parsing and harmonisation layers respectively; attaching them preserves
    the original exception type.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.line: int | None = None
        self.unit: str | None = None

    def at_line(self, line: int) -> "CrossmapError":
        """Attach a 1-based line number to this error."""
        if self.line is None:
            self.line = line
            self.args = (f"{self.args[0]} (line {line})",)
        return self

    def for_unit(self, unit: str) -> "CrossmapError":
        """Tag this error with the observational unit it occurred in."""
        if self.unit is None:
            self.unit = unit
            self.args = (f"unit {unit!r}: {self.args[0]}",)
        return self


# ── construction / validation ─────────────────────────────────────────────


class InvalidLabel(CrossmapError):
    """Category label is empty or contains a banned character."""

    def __init__(self, text: str, reason: str):
        super().__init__(f"invalid category label {text!r}: {reason}")
        self.text = text
        self.reason = reason


class EmptyCrossmap(CrossmapError):
    def __init__(self) -> None:
        super().__init__("crossmap has no links; a mapping with no links transforms nothing")


class DuplicateLink(CrossmapError):
    def __init__(self, source: str, target: str):
        super().__init__(f"duplicate link {source!r} -> {target!r}")
        self.source = source
        self.target = target


class WeightOutOfRange(CrossmapError):
    def __init__(self, source: str, target: str, weight: float):
        super().__init__(
            f"link {source!r} -> {target!r} has weight {weight!r}; "
            "weights must satisfy 0 < weight <= 1 (omit the link for zero)"
        )
        self.source = source
        self.target = target
        self.weight = weight


class WeightSumViolation(CrossmapError):
    def __init__(self, source: str, total: float):
        super().__init__(
            f"outgoing weights for source {source!r} sum to {total:.9g}, expected 1"
        )
        self.source = source
        self.total = total


class UnknownCategory(CrossmapError):
    def __init__(self, label: str, side: str):
        super().__init__(f"{label!r} is not a {side} category of this crossmap")
        self.label = label
        self.side = side


# ── transformation ────────────────────────────────────────────────────────


class TaxonomyMismatch(CrossmapError):
    def __init__(self, expected: str, got: str, role: str = "source"):
        super().__init__(f"expected {role} taxonomy {expected!r}, got {got!r}")
        self.expected = expected
        self.got = got


class MissingSourceMapping(CrossmapError):
    """A data category has no outgoing link; its mass would silently vanish."""

    def __init__(self, label: str, extra: int = 0):
        more = f" (and {extra} more)" if extra else ""
        super().__init__(f"data category {label!r} has no outgoing link{more}")
        self.label = label


class UncoveredIntermediate(CrossmapError):
    """An intermediate category is not carried forward; mass through it would be lost."""

    def __init__(self, label: str):
        super().__init__(f"intermediate category {label!r} is not a source of the next step")
        self.label = label


class NotBijective(CrossmapError):
    def __init__(self, reason: str, label: str):
        super().__init__(f"crossmap is not invertible: {label!r} is a {reason} node")
        self.reason = reason
        self.label = label


class TargetTaxonomyMismatch(CrossmapError):
    def __init__(self, unit: str, expected: str, got: str):
        super().__init__(
            f"unit {unit!r} maps into taxonomy {got!r}, but the panel target is {expected!r}"
        )
        self.unit = unit
        self.expected = expected
        self.got = got


class DuplicateUnit(CrossmapError):
    def __init__(self, unit: str):
        super().__init__(f"duplicate unit name {unit!r}")
        self.unit = unit


# ── text documents ────────────────────────────────────────────────────────


class DocumentError(CrossmapError):
    """Base class for malformed input documents (CLI exit code 2)."""


class ParseError(DocumentError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"parse error: {reason}")
        self.at_line(line)
        self.reason = reason


class DuplicateKey(DocumentError):
    def __init__(self, label: str):
        super().__init__(f"duplicate key {label!r}")
        self.label = label


class NonFiniteValue(DocumentError):
    def __init__(self, label: str, value: float):
        super().__init__(f"value for {label!r} is not finite: {value!r}")
        self.label = label
        self.value = value


class MissingColumn(DocumentError):
    def __init__(self, name: str, available: tuple[str, ...]):
        super().__init__(f"column {name!r} not found; columns are {list(available)}")
        self.name = name
        self.available = available


class DuplicateSourceCode(DocumentError):
    def __init__(self, label: str):
        super().__init__(f"source code {label!r} appears more than once in the from-column")
        self.label = label


class EmptyCell(DocumentError):
    def __init__(self, line: int, column: str):
        super().__init__(f"empty cell in column {column!r}")
        self.at_line(line)
        self.column = column


# ── rendering ─────────────────────────────────────────────────────────────


class PlanMismatch(CrossmapError):
    def __init__(self, detail: str):
        super().__init__(f"layout plan does not match crossmap: {detail}")
        self.detail = detail
