"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- One publication record plus the per-line error value produced while reading records.
- Field names follow the analysis vocabulary (author_count, citation_total); the
  wire names of the record files (authors, citations, collab) are pydantic aliases.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_core import PydanticCustomError

from config.config import INGEST

YEAR_MIN = INGEST["year_min"]
YEAR_MAX = INGEST["year_max"]

# json object keys always arrive as strings, so history years are parsed laxly
CitationYear = Annotated[int, Field(ge=YEAR_MIN, le=YEAR_MAX)]
CitationCount = Annotated[int, Field(ge=0, strict=True)]


class ErrorReason(str, Enum):
    MISSING_FIELD = "missing-field"
    BAD_TYPE = "bad-type"
    RANGE_VIOLATION = "range-violation"
    DUPLICATE_ID = "duplicate-id"
    CITATION_SUM_MISMATCH = "citation-sum-mismatch"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class RecordError:
    """
    A problem with one input line. ERROR means the line produced no record;
    WARNING means the record was kept (e.g. citation years before publication).
    """
    line_number: int
    reason: ErrorReason
    detail: str
    severity: Severity = Severity.ERROR
    record_id: Optional[str] = None
    source: Optional[str] = None

    def to_dict(self):
        return {
            "source": self.source or "",
            "line": self.line_number,
            "severity": self.severity.value,
            "reason": self.reason.value,
            "id": self.record_id or "",
            "detail": self.detail,
        }

    def __str__(self):
        where = f"{self.source}:{self.line_number}" if self.source else f"line {self.line_number}"
        return f"{where} [{self.severity.value}] {self.reason.value}: {self.detail}"


class PublicationRecord(BaseModel):
    """
    A single publication: year, team size, citations and optional extras.

    Records are immutable once validated. `citations_by_year`, when present,
    must sum to `citation_total`; invalid records are rejected, never repaired.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="ignore")

    # Identity
    id: str = Field(min_length=1, strict=True)
    year: int = Field(ge=YEAR_MIN, le=YEAR_MAX, strict=True)

    # Team size and citations
    author_count: int = Field(ge=1, strict=True, alias="authors")
    citation_total: int = Field(ge=0, strict=True, alias="citations")
    citations_by_year: Optional[dict[CitationYear, CitationCount]] = None

    # Descriptive extras (kept verbatim)
    title: Optional[str] = Field(default=None, strict=True)
    affiliations: Optional[list[Annotated[str, Field(min_length=1, strict=True)]]] = None
    collab_label: Optional[str] = Field(default=None, strict=True, alias="collab")

    @field_validator("collab_label", "title")
    @classmethod
    def _blank_is_absent(cls, value):
        return value or None

    @model_validator(mode="after")
    def _history_matches_total(self):
        if self.citations_by_year is not None:
            total = sum(self.citations_by_year.values())
            if total != self.citation_total:
                raise PydanticCustomError(
                    "citation_sum_mismatch",
                    "citations_by_year sums to {total}, citations is {expected}",
                    {"total": total, "expected": self.citation_total},
                )
        return self

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    @property
    def has_history(self):
        return self.citations_by_year is not None

    def early_citation_years(self):
        """History years that precede the publication year (database artifacts)."""
        if not self.citations_by_year:
            return []
        return sorted(y for y in self.citations_by_year if y < self.year)

    def cumulative_citations(self, year):
        """Citations received up to and including `year` (requires history)."""
        return sum(c for y, c in self.citations_by_year.items() if y <= year)

    def to_dict(self):
        """
        Wire form used by the jsonl writer. Key order is fixed and history
        years are ascending, so equal records serialize to equal bytes.
        """
        data = {
            "id": self.id,
            "year": self.year,
            "authors": self.author_count,
            "citations": self.citation_total,
        }
        if self.citations_by_year is not None:
            data["citations_by_year"] = {str(y): self.citations_by_year[y] for y in sorted(self.citations_by_year)}
        if self.title is not None:
            data["title"] = self.title
        if self.affiliations is not None:
            data["affiliations"] = list(self.affiliations)
        if self.collab_label is not None:
            data["collab"] = self.collab_label
        return data

    def __str__(self):
        label = f" | {self.collab_label}" if self.collab_label else ""
        return (
            f"Record({self.id}) | {self.year} | Authors: {self.author_count} | "
            f"Citations: {self.citation_total}{label}"
        )


# ---------------------------------------------------------------------
# Validation error -> RecordError
# ---------------------------------------------------------------------
# pydantic may report several problems for one line; the line still yields
# exactly one RecordError, classified by the most basic problem found.

_REASON_BY_TYPE = {
    "missing": ErrorReason.MISSING_FIELD,
    "greater_than_equal": ErrorReason.RANGE_VIOLATION,
    "less_than_equal": ErrorReason.RANGE_VIOLATION,
    "greater_than": ErrorReason.RANGE_VIOLATION,
    "less_than": ErrorReason.RANGE_VIOLATION,
    "string_too_short": ErrorReason.RANGE_VIOLATION,
    "citation_sum_mismatch": ErrorReason.CITATION_SUM_MISMATCH,
}

_REASON_PRIORITY = [
    ErrorReason.MISSING_FIELD,
    ErrorReason.BAD_TYPE,
    ErrorReason.RANGE_VIOLATION,
    ErrorReason.CITATION_SUM_MISMATCH,
]


def classify_validation_error(exc: ValidationError, line_number, record_id=None, source=None):
    details = []
    reasons = set()
    for err in exc.errors():
        reasons.add(_REASON_BY_TYPE.get(err["type"], ErrorReason.BAD_TYPE))
        loc = ".".join(str(part) for part in err["loc"]) or "record"
        details.append(f"{loc}: {err['msg']}")
    reason = next(r for r in _REASON_PRIORITY if r in reasons)
    return RecordError(
        line_number=line_number,
        reason=reason,
        detail="; ".join(details),
        record_id=record_id,
        source=source,
    )
