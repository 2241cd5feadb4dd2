"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Immutable, id-unique collection of PublicationRecord.
- Records are held in ascending id order, so nothing downstream can depend on
  the order in which they were read.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import pandas as pd

from core.errors import ArgumentError


@dataclass(frozen=True)
class Corpus:
    """
    A validated publication set. Build it through core.ingest.build_corpus when
    the input may contain duplicate ids; constructing it directly with
    duplicates raises ArgumentError.

    Equality compares records only; `provenance` is a description of where the
    records came from.
    """

    records: tuple = ()
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.records, key=lambda r: r.id))
        for prev, cur in zip(ordered, ordered[1:]):
            if prev.id == cur.id:
                raise ArgumentError(f"duplicate record id {cur.id!r} in corpus")
        object.__setattr__(self, "records", ordered)

    # ------------------------------------------------------------------
    # Collection protocol
    # ------------------------------------------------------------------

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __contains__(self, record_id):
        return record_id in self.by_id

    @cached_property
    def by_id(self):
        return {r.id: r for r in self.records}

    @property
    def ids(self):
        return [r.id for r in self.records]

    def get(self, record_id):
        return self.by_id.get(record_id)

    # ------------------------------------------------------------------
    # Derived corpora
    # ------------------------------------------------------------------

    def select(self, predicate, provenance=None):
        """New corpus with the records for which predicate(record) is true."""
        kept = tuple(r for r in self.records if predicate(r))
        return Corpus(kept, provenance if provenance is not None else self.provenance)

    def subset(self, record_ids, provenance=None):
        """New corpus restricted to `record_ids`; unknown ids raise ArgumentError."""
        missing = sorted(set(record_ids) - self.by_id.keys())
        if missing:
            raise ArgumentError(f"unknown record ids: {', '.join(missing[:10])}")
        wanted = set(record_ids)
        return self.select(lambda r: r.id in wanted, provenance)

    def without(self, record_ids, provenance=None):
        dropped = set(record_ids)
        return self.select(lambda r: r.id not in dropped, provenance)

    # ------------------------------------------------------------------
    # Column views
    # ------------------------------------------------------------------

    def author_counts(self):
        return np.fromiter((r.author_count for r in self.records), dtype=np.int64, count=len(self.records))

    def citation_totals(self):
        return np.fromiter((r.citation_total for r in self.records), dtype=np.int64, count=len(self.records))

    def years(self):
        return np.fromiter((r.year for r in self.records), dtype=np.int64, count=len(self.records))

    def year_span(self):
        """(first, last) publication year, or None for an empty corpus."""
        if not self.records:
            return None
        years = self.years()
        return int(years.min()), int(years.max())

    def total_citations(self):
        return int(self.citation_totals().sum())

    def to_frame(self):
        """One row per record, in id order, for group-by style aggregation."""
        return pd.DataFrame(
            {
                "id": self.ids,
                "year": self.years(),
                "author_count": self.author_counts(),
                "citation_total": self.citation_totals(),
            }
        )

    def __str__(self):
        span = self.year_span()
        period = f"{span[0]}-{span[1]}" if span else "empty"
        return f"Corpus({len(self)} records | {period} | {self.provenance or 'unnamed'})"
