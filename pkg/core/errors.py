"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Exception hierarchy shared by every module.
- Per-line record problems are NOT exceptions: they travel as RecordError values
  (entities/record.py) so that parsing never aborts on a bad line.
"""


class AnalysisError(Exception):
    """Base class for every fatal toolkit error."""


class ArgumentError(AnalysisError, ValueError):
    """An operation was called with arguments outside its contract."""


class PreconditionError(AnalysisError):
    """
    Input data lacks something an operation needs (e.g. per-year citation history).
    `record_ids` names the offending records in id order.
    """

    def __init__(self, message, record_ids=()):
        self.record_ids = tuple(record_ids)
        if self.record_ids:
            shown = ", ".join(self.record_ids[:10])
            more = f" (+{len(self.record_ids) - 10} more)" if len(self.record_ids) > 10 else ""
            message = f"{message}: {shown}{more}"
        super().__init__(message)


class IngestError(AnalysisError):
    """A record stream could not be read at all (I/O, encoding, csv header)."""
