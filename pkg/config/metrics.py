"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Scientometric indicators: h-index, percentage shares, the per-slice indicator
  bundle, yearly aggregates and the cumulative h-index time series.
- Every function is a pure function of an immutable corpus.
"""

import logging
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional

import numpy as np

from core.errors import ArgumentError, PreconditionError
from entities.series import HIndexSeries, YearSeries

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------
# h-index
# ------------------------------------------------------------------

def h_index(citation_counts):
    """
    Largest h such that at least h of the counts are >= h (0 when empty).
    """
    if not isinstance(citation_counts, np.ndarray):
        citation_counts = list(citation_counts)
    counts = np.sort(np.asarray(citation_counts, dtype=np.int64))[::-1]
    if counts.size == 0:
        return 0
    # counts descending: counts[i] >= i + 1 holds for a prefix of length h
    return int(np.count_nonzero(counts >= np.arange(1, counts.size + 1)))


# ------------------------------------------------------------------
# Percentages
# ------------------------------------------------------------------

def share(part_count, whole_count, decimals=2):
    """
    100 * part / whole rounded half-up to `decimals` places.
    Exact decimal arithmetic, so printed table values reproduce bit for bit.
    """
    if whole_count <= 0:
        raise ArgumentError("share of an empty whole")
    if part_count < 0 or part_count > whole_count:
        raise ArgumentError(f"part {part_count} outside 0..{whole_count}")
    if decimals < 0:
        raise ArgumentError("decimals must be >= 0")
    value = Decimal(100 * part_count) / Decimal(whole_count)
    return float(value.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP))


# ------------------------------------------------------------------
# Indicator bundle
# ------------------------------------------------------------------

@dataclass(frozen=True)
class IndicatorSet:
    """
    Statistics for one corpus slice. Author statistics cover every record;
    citation statistics cover the records published up to the citation
    cutoff year (all records when no cutoff). Citation fields are None when
    that sub-corpus is empty.
    """
    publication_count: int
    mean_authors: float
    median_authors: float
    single_author_share: float
    max_authors: int
    mean_citations: Optional[float]
    median_citations: Optional[float]
    max_citations: Optional[int]
    uncited_share: Optional[float]
    h_index: Optional[int]
    mean_publications_per_year: float
    mean_citations_per_year: Optional[float]
    span_years: int
    citation_cutoff_year: Optional[int] = None
    analysis_span_years: Optional[int] = None
    mean_publications_per_analysis_year: Optional[float] = None
    mean_citations_per_analysis_year: Optional[float] = None

    def to_dict(self):
        return asdict(self)


def _span_years(years):
    return int(years.max() - years.min() + 1)


def indicator_set(corpus, citation_cutoff_year=None, analysis_span=None):
    """
    Compute the indicator bundle of a non-empty corpus.

    Rates per year divide by the observed publication span of the slice
    (first to last year, inclusive). `analysis_span=(first, last)` adds the
    same rates over a caller-declared span.
    """
    if len(corpus) == 0:
        raise ArgumentError("indicator_set needs a non-empty corpus")

    authors = corpus.author_counts()
    years = corpus.years()
    citations = corpus.citation_totals()
    span = _span_years(years)

    if citation_cutoff_year is not None:
        cited_mask = years <= citation_cutoff_year
    else:
        cited_mask = np.ones(len(corpus), dtype=bool)
    cit = citations[cited_mask]

    if cit.size:
        cit_stats = dict(
            mean_citations=float(cit.mean()),
            median_citations=float(np.median(cit)),
            max_citations=int(cit.max()),
            uncited_share=float(np.count_nonzero(cit == 0) / cit.size),
            h_index=h_index(cit),
            mean_citations_per_year=float(cit.sum() / _span_years(years[cited_mask])),
        )
    else:
        logger.warning("No publications up to cutoff %s; citation statistics left empty", citation_cutoff_year)
        cit_stats = dict(
            mean_citations=None, median_citations=None, max_citations=None,
            uncited_share=None, h_index=None, mean_citations_per_year=None,
        )

    analysis = {}
    if analysis_span is not None:
        first, last = analysis_span
        if first > last:
            raise ArgumentError(f"empty analysis span {first}-{last}")
        n_years = last - first + 1
        analysis = dict(
            analysis_span_years=n_years,
            mean_publications_per_analysis_year=len(corpus) / n_years,
            mean_citations_per_analysis_year=float(cit.sum()) / n_years if cit.size else None,
        )

    return IndicatorSet(
        publication_count=len(corpus),
        mean_authors=float(authors.mean()),
        median_authors=float(np.median(authors)),
        single_author_share=float(np.count_nonzero(authors == 1) / authors.size),
        max_authors=int(authors.max()),
        mean_publications_per_year=len(corpus) / span,
        span_years=span,
        citation_cutoff_year=citation_cutoff_year,
        **cit_stats,
        **analysis,
    )


# ------------------------------------------------------------------
# Yearly aggregates
# ------------------------------------------------------------------

def _zero_filled(counts, first, last, name):
    return YearSeries(tuple((y, int(counts.get(y, 0))) for y in range(first, last + 1)), name=name)


def yearly_counts(corpus, split_at=50):
    """
    Records per publication year, split into teams of at most `split_at`
    authors and larger teams. Both series are zero-filled over the corpus span.
    """
    if split_at < 1:
        raise ArgumentError("split_at must be >= 1")
    if len(corpus) == 0:
        return YearSeries(name="small"), YearSeries(name="large")

    frame = corpus.to_frame()
    small = frame["author_count"] <= split_at
    first, last = corpus.year_span()
    small_counts = frame[small].groupby("year").size().to_dict()
    large_counts = frame[~small].groupby("year").size().to_dict()
    return (
        _zero_filled(small_counts, first, last, f"authors<={split_at}"),
        _zero_filled(large_counts, first, last, f"authors>{split_at}"),
    )


def yearly_mean_citations(corpus, max_author_count=None):
    """
    Mean citation_total per publication year over records with at most
    `max_author_count` authors (all records when None). Years without a
    qualifying record are omitted.
    """
    frame = corpus.to_frame()
    if max_author_count is not None:
        frame = frame[frame["author_count"] <= max_author_count]
    name = "all" if max_author_count is None else f"authors<={max_author_count}"
    if frame.empty:
        return YearSeries(name=name)
    means = frame.groupby("year")["citation_total"].mean().sort_index()
    return YearSeries(tuple((int(y), float(v)) for y, v in means.items()), name=name)


# ------------------------------------------------------------------
# Cumulative h-index dynamics
# ------------------------------------------------------------------

def h_index_series(corpus, name="corpus"):
    """
    For every year y from the first publication year to the last citation
    year: the h-index of { citations received up to y } over the records
    published up to y. Needs citations_by_year on every record.
    """
    missing = [r.id for r in corpus if not r.has_history]
    if missing:
        raise PreconditionError("records lack citations_by_year", missing)
    if len(corpus) == 0:
        return HIndexSeries(name=name)

    pub_years = corpus.years()
    first = int(pub_years.min())
    last = int(pub_years.max())
    for record in corpus:
        if record.citations_by_year:
            last = max(last, max(record.citations_by_year))

    # citation events per (record, year); years before `first` fold into column 0
    n_years = last - first + 1
    events = np.zeros((len(corpus), n_years), dtype=np.int64)
    for row, record in enumerate(corpus):
        for year, count in record.citations_by_year.items():
            events[row, max(year - first, 0)] += count
    cumulative = np.cumsum(events, axis=1)

    points = []
    for col in range(n_years):
        year = first + col
        published = pub_years <= year
        points.append((year, h_index(cumulative[published, col])))
    logger.debug("h-index series %s: %d years, final h=%d", name, len(points), points[-1][1])
    return HIndexSeries(tuple(points), name=name)
