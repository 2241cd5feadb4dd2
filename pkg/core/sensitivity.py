"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Threshold filtering on team size and the with/without-large-teams tables:
  exceedance counts and shares, at-most-n recomputed indicators with the
  share of excluded papers, and per-entity profiles.
- Row order always follows the caller's threshold order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from config.config import ANALYSIS
from config.metrics import IndicatorSet, h_index, indicator_set, share
from core.errors import ArgumentError

logger = logging.getLogger(__name__)


class ThresholdMode(str, Enum):
    EXCEEDS = "exceeds"     # author_count > n
    AT_MOST = "at_most"     # author_count <= n


@dataclass(frozen=True)
class ThresholdSpec:
    n: int
    mode: ThresholdMode = ThresholdMode.EXCEEDS

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError(f"threshold n must be >= 1, got {self.n}")
        object.__setattr__(self, "mode", ThresholdMode(self.mode))

    def selects(self, record):
        if self.mode is ThresholdMode.EXCEEDS:
            return record.author_count > self.n
        return record.author_count <= self.n

    def __str__(self):
        return f"{'>' if self.mode is ThresholdMode.EXCEEDS else '<='}{self.n}"


@dataclass(frozen=True)
class SensitivityRow:
    spec: ThresholdSpec
    publication_count: int
    citation_count: int
    publication_share: float
    citation_share: Optional[float]
    indicators: Optional[IndicatorSet]          # None when nothing is selected
    excluded_share: Optional[float] = None      # exclusion_report rows only


@dataclass(frozen=True)
class SensitivityTable:
    rows: tuple
    baseline: IndicatorSet
    base_publications: int
    base_citations: int
    corpus_publications: int = 0
    corpus_citations: int = 0
    decimals: int = 2
    exclusion_decimals: Optional[int] = None
    rows_by_n: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rows_by_n", {(r.spec.n, r.spec.mode): r for r in self.rows})

    def row(self, n, mode=ThresholdMode.EXCEEDS):
        return self.rows_by_n[(n, ThresholdMode(mode))]


# ------------------------------------------------------------------
# Filtering
# ------------------------------------------------------------------

def filter_by_authors(corpus, spec):
    """exceeds -> author_count > n; at_most -> author_count <= n."""
    return corpus.select(spec.selects, provenance=f"{corpus.provenance}[authors{spec}]")


# ------------------------------------------------------------------
# Tables
# ------------------------------------------------------------------

def _row(corpus, spec, base_publications, base_citations, citation_cutoff_year, decimals):
    selected = filter_by_authors(corpus, spec)
    cites = selected.total_citations()
    indicators = indicator_set(selected, citation_cutoff_year) if len(selected) else None
    return SensitivityRow(
        spec=spec,
        publication_count=len(selected),
        citation_count=cites,
        publication_share=share(len(selected), base_publications, decimals),
        citation_share=share(cites, base_citations, decimals) if base_citations else None,
        indicators=indicators,
    )


def sensitivity_table(corpus, base, thresholds, citation_cutoff_year=None,
                      decimals=ANALYSIS["share_decimals"], workers=1):
    """
    One row per threshold: selected publication and citation counts, their
    shares of the `base` corpus, and the indicator bundle of the selection.

    `base` is the share denominator and must contain every record of `corpus`
    (e.g. the full 1889-2020 extract while `corpus` is the 1991-2020 slice).
    """
    thresholds = list(thresholds)
    if not thresholds:
        raise ArgumentError("sensitivity_table needs at least one threshold")
    outside = [rid for rid in corpus.ids if rid not in base]
    if outside:
        raise ArgumentError(f"{len(outside)} record(s) of the corpus are not in the share base, e.g. {outside[0]!r}")
    if len(base) == 0:
        raise ArgumentError("share base is empty")

    base_publications = len(base)
    base_citations = base.total_citations()
    baseline = indicator_set(corpus, citation_cutoff_year)

    def build(spec):
        return _row(corpus, spec, base_publications, base_citations, citation_cutoff_year, decimals)

    if workers > 1:
        # map() preserves threshold order
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(build, thresholds))
    else:
        rows = tuple(build(spec) for spec in thresholds)

    for row in rows:
        logger.debug("threshold %s: %d pubs (%.2f%%)", row.spec, row.publication_count, row.publication_share)
    return SensitivityTable(
        rows=rows,
        baseline=baseline,
        base_publications=base_publications,
        base_citations=base_citations,
        corpus_publications=len(corpus),
        corpus_citations=corpus.total_citations(),
        decimals=decimals,
    )


def exclusion_report(corpus, thresholds, citation_cutoff_year=None,
                     decimals=ANALYSIS["exclusion_decimals"], share_decimals=ANALYSIS["share_decimals"],
                     workers=1):
    """
    Institution-table layout: for each n the at-most-n sub-corpus with its
    indicators, plus the share of papers left out (author_count > n) at
    `decimals` places.
    """
    thresholds = list(thresholds)
    if not thresholds:
        raise ArgumentError("exclusion_report needs at least one threshold")
    specs = [ThresholdSpec(n, ThresholdMode.AT_MOST) for n in thresholds]
    table = sensitivity_table(corpus, corpus, specs, citation_cutoff_year, share_decimals, workers)

    total = len(corpus)
    rows = tuple(
        SensitivityRow(
            spec=row.spec,
            publication_count=row.publication_count,
            citation_count=row.citation_count,
            publication_share=row.publication_share,
            citation_share=row.citation_share,
            indicators=row.indicators,
            excluded_share=share(total - row.publication_count, total, decimals),
        )
        for row in table.rows
    )
    return SensitivityTable(
        rows=rows,
        baseline=table.baseline,
        base_publications=table.base_publications,
        base_citations=table.base_citations,
        corpus_publications=table.corpus_publications,
        corpus_citations=table.corpus_citations,
        decimals=share_decimals,
        exclusion_decimals=decimals,
    )


# ------------------------------------------------------------------
# Entity profile
# ------------------------------------------------------------------

@dataclass(frozen=True)
class EntityProfile:
    """
    One researcher or institution: output size, active period, share of
    papers above each team-size threshold, and h-index.
    """
    name: str
    publication_count: int
    first_year: int
    last_year: int
    large_team_shares: tuple      # ((n, share %), ...) in threshold order
    h_index: int

    def share_above(self, n):
        return dict(self.large_team_shares)[n]


def entity_profile(corpus, thresholds=None, name=None, decimals=0):
    thresholds = list(thresholds if thresholds is not None else ANALYSIS["profile_thresholds"])
    if len(corpus) == 0:
        raise ArgumentError("entity_profile needs a non-empty corpus")
    first, last = corpus.year_span()
    total = len(corpus)
    shares = tuple(
        (n, share(sum(1 for r in corpus if r.author_count > n), total, decimals))
        for n in thresholds
    )
    return EntityProfile(
        name=name or corpus.provenance or "entity",
        publication_count=total,
        first_year=first,
        last_year=last,
        large_team_shares=shares,
        h_index=h_index(corpus.citation_totals()),
    )
