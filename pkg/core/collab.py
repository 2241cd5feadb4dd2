"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Team-size and citation frequency distributions, plus automatic detection of
  stable large collaborations from the peaks in the team-size tail.
- Detection replaces manual title/abstract inspection with single-linkage on
  author_count: neighbouring sizes k1 <= k2 link iff (k2 - k1) / k2 <= rel_tol.
  Publication years never enter the linkage; year_span is descriptive.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from config.config import ANALYSIS, DETECTION
from config.metrics import h_index_series
from core.errors import ArgumentError
from entities.series import YearSeries

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------
# Distributions
# ------------------------------------------------------------------

@dataclass(frozen=True)
class AuthorCountDistribution:
    support: tuple          # ((k, f(k)), ...) with k strictly increasing
    normalized: bool
    total: int

    @property
    def mode(self):
        """Most frequent team size (smallest k on ties)."""
        best = max(f for _, f in self.support)
        return next(k for k, f in self.support if f == best)

    def as_dict(self):
        return dict(self.support)


@dataclass(frozen=True)
class CitationFrequency:
    rows: tuple             # ((c, p(c), hyperauthored share), ...) with c increasing
    hyper_threshold: int

    @property
    def total(self):
        return sum(p for _, p, _ in self.rows)


def author_count_distribution(corpus, normalize=True):
    """f(k) = number of records with k authors (divided by corpus size when normalized)."""
    if len(corpus) == 0:
        raise ArgumentError("author_count_distribution needs a non-empty corpus")
    sizes, counts = np.unique(corpus.author_counts(), return_counts=True)
    total = len(corpus)
    if normalize:
        support = tuple((int(k), float(c) / total) for k, c in zip(sizes, counts))
    else:
        support = tuple((int(k), int(c)) for k, c in zip(sizes, counts))
    return AuthorCountDistribution(support=support, normalized=normalize, total=total)


def citation_frequency(corpus, hyper_threshold=ANALYSIS["hyper_threshold"]):
    """
    p(c) for every observed citation value c, with the fraction of those
    records having more than `hyper_threshold` authors.
    """
    if hyper_threshold < 1:
        raise ArgumentError("hyper_threshold must be >= 1")
    pubs, hyper = Counter(), Counter()
    for record in corpus:
        pubs[record.citation_total] += 1
        if record.author_count > hyper_threshold:
            hyper[record.citation_total] += 1
    rows = tuple((c, pubs[c], hyper[c] / pubs[c]) for c in sorted(pubs))
    return CitationFrequency(rows=rows, hyper_threshold=hyper_threshold)


# ------------------------------------------------------------------
# Collaboration clusters
# ------------------------------------------------------------------

@dataclass(frozen=True)
class CollaborationCluster:
    label: str
    member_ids: frozenset
    centroid_size: float
    size_band: tuple        # (min, max) author_count
    year_span: tuple        # (first, last) publication year

    @property
    def size(self):
        return len(self.member_ids)


def _single_linkage(records, rel_tol):
    """Chain records sorted by team size; break where the relative gap exceeds rel_tol."""
    ordered = sorted(records, key=lambda r: (r.author_count, r.id))
    groups = []
    for record in ordered:
        if groups:
            k1 = groups[-1][-1].author_count
            k2 = record.author_count
            if (k2 - k1) / k2 <= rel_tol:
                groups[-1].append(record)
                continue
        groups.append([record])
    return groups


def _make_cluster(members):
    sizes = [r.author_count for r in members]
    years = [r.year for r in members]
    centroid = sum(sizes) / len(sizes)
    labels = {r.collab_label for r in members}
    # adopt a collective-author name only when every member carries it
    if len(labels) == 1 and None not in labels:
        label = labels.pop()
    else:
        label = f"C{round(centroid)}"
    return CollaborationCluster(
        label=label,
        member_ids=frozenset(r.id for r in members),
        centroid_size=centroid,
        size_band=(min(sizes), max(sizes)),
        year_span=(min(years), max(years)),
    )


def detect_clusters(corpus, min_size=DETECTION["min_size"], rel_tol=DETECTION["rel_tol"],
                    min_members=DETECTION["min_members"], group_by_label=False):
    """
    Find stable large collaborations among records with more than `min_size`
    authors. Clusters with fewer than `min_members` records are dropped; the
    result is sorted by descending centroid size and clusters are disjoint.

    With group_by_label, records carrying a collab_label are grouped exactly
    by that label and only unlabelled records are linked by size.
    """
    if not 0 < rel_tol < 1:
        raise ArgumentError(f"rel_tol must be in (0, 1), got {rel_tol}")
    if min_members < 1:
        raise ArgumentError("min_members must be >= 1")

    qualifying = [r for r in corpus if r.author_count > min_size]
    groups = []
    if group_by_label:
        labelled = defaultdict(list)
        unlabelled = []
        for record in qualifying:
            if record.collab_label:
                labelled[record.collab_label].append(record)
            else:
                unlabelled.append(record)
        groups.extend(labelled[label] for label in sorted(labelled))
        qualifying = unlabelled
    groups.extend(_single_linkage(qualifying, rel_tol))

    clusters = [_make_cluster(g) for g in groups if len(g) >= min_members]
    clusters.sort(key=lambda c: (-c.centroid_size, c.label, min(c.member_ids)))

    # labels name output files, so keep them unique
    taken = {c.label for c in clusters}
    seen = Counter()
    unique = []
    for cluster in clusters:
        seen[cluster.label] += 1
        if seen[cluster.label] > 1:
            suffix = seen[cluster.label]
            while f"{cluster.label}#{suffix}" in taken:
                suffix += 1
            seen[cluster.label] = suffix
            label = f"{cluster.label}#{suffix}"
            taken.add(label)
            cluster = CollaborationCluster(
                label=label,
                member_ids=cluster.member_ids,
                centroid_size=cluster.centroid_size,
                size_band=cluster.size_band,
                year_span=cluster.year_span,
            )
        unique.append(cluster)

    logger.info(
        "Detected %d cluster(s) among %d records with > %d authors",
        len(unique), sum(len(g) for g in groups), min_size,
    )
    return unique


def _members(cluster, corpus):
    unknown = sorted(cluster.member_ids - set(corpus.ids))
    if unknown:
        raise ArgumentError(f"cluster {cluster.label} has ids missing from the corpus: {', '.join(unknown[:10])}")
    return corpus.subset(cluster.member_ids, provenance=cluster.label)


def cluster_yearly_counts(cluster, corpus):
    """Member records per year, zero-filled across the members' year span."""
    members = _members(cluster, corpus)
    counts = Counter(r.year for r in members)
    first, last = members.year_span()
    return YearSeries(tuple((y, counts.get(y, 0)) for y in range(first, last + 1)), name=cluster.label)


def cluster_h_index_series(cluster, corpus):
    """Group h-index dynamics over the pooled member records."""
    return h_index_series(_members(cluster, corpus), name=cluster.label)


# ------------------------------------------------------------------
# Highly cited papers
# ------------------------------------------------------------------

@dataclass(frozen=True)
class TeamSizeBreakdown:
    min_citations: int
    total: int
    bands: tuple                # ((band label, count), ...)
    published_early: int        # year <= early_end
    published_recent: int       # year >= recent_start


def top_cited(corpus, limit=ANALYSIS["top_cited_limit"]):
    """Most cited records, ties broken by id."""
    return sorted(corpus, key=lambda r: (-r.citation_total, r.id))[:limit]


def highly_cited_breakdown(corpus, min_citations=ANALYSIS["highly_cited_min"], edges=None,
                           early_end=ANALYSIS["early_period_end"],
                           recent_start=ANALYSIS["recent_period_start"]):
    """
    Team-size bands among records with at least `min_citations` citations.
    edges [10, 50] give the bands <10, 10-50 and >50.
    """
    edges = sorted(edges if edges is not None else ANALYSIS["team_band_edges"])
    if len(edges) < 2:
        raise ArgumentError("at least two band edges are required")
    cited = [r for r in corpus if r.citation_total >= min_citations]

    labels = [f"<{edges[0]}"]
    labels += [f"{lo}-{hi}" for lo, hi in zip(edges, edges[1:])]
    labels.append(f">{edges[-1]}")
    counts = Counter()
    for record in cited:
        k = record.author_count
        if k < edges[0]:
            counts[labels[0]] += 1
        elif k > edges[-1]:
            counts[labels[-1]] += 1
        else:
            # first band whose upper edge reaches k
            idx = next(i for i, hi in enumerate(edges[1:], start=1) if k <= hi)
            counts[labels[idx]] += 1

    return TeamSizeBreakdown(
        min_citations=min_citations,
        total=len(cited),
        bands=tuple((label, counts[label]) for label in labels),
        published_early=sum(1 for r in cited if r.year <= early_end),
        published_recent=sum(1 for r in cited if r.year >= recent_start),
    )
