"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Deterministic synthetic corpora: a "natural" population with Poisson-like
  team sizes plus planted large collaborations, and the ground truth to check
  the analyses against.
- Randomness is keyed by (seed, stream, block of BLOCK_SIZE record indices),
  so the output does not depend on how many workers generate the blocks.
- Presets live in config.config.SYNTH_PRESETS.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from config.config import INGEST, SYNTH_PRESETS
from config.metrics import share
from core.errors import ArgumentError
from entities.corpus import Corpus
from entities.record import PublicationRecord

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1024
NATURAL = "natural"
LARGE_TEAM_FLOOR = 50


# ------------------------------------------------------------------
# Spec types
# ------------------------------------------------------------------

@dataclass(frozen=True)
class NaturalTeamModel:
    """Team size = offset + Poisson(rate)."""
    offset: int = 1
    rate: float = 1.5

    def __post_init__(self):
        if self.offset < 1:
            raise ArgumentError(f"team offset must be >= 1, got {self.offset}")
        if not self.rate > 0:
            raise ArgumentError(f"team rate must be > 0, got {self.rate}")


@dataclass(frozen=True)
class CitationModel:
    """Truncated zeta on 0..cap: P(c) proportional to (c + 1) ** -alpha."""
    alpha: float = 2.0
    cap: int = 5_359

    def __post_init__(self):
        if not self.alpha > 1:
            raise ArgumentError(f"citation alpha must be > 1, got {self.alpha}")
        if self.cap < 0:
            raise ArgumentError("citation cap must be >= 0")

    def cdf(self):
        weights = np.arange(1, self.cap + 2, dtype=np.float64) ** -self.alpha
        cdf = np.cumsum(weights)
        return cdf / cdf[-1]


@dataclass(frozen=True)
class TailModel:
    """
    Optional power-law team-size component: with probability `fraction` a
    natural record draws its size from P(k) ~ k ** -exponent on k_min..k_max.
    """
    fraction: float
    exponent: float
    k_min: int
    k_max: int

    def __post_init__(self):
        if not 0 <= self.fraction <= 1:
            raise ArgumentError(f"tail fraction must be in [0, 1], got {self.fraction}")
        if not self.exponent > 0:
            raise ArgumentError("tail exponent must be > 0")
        if not 1 <= self.k_min <= self.k_max:
            raise ArgumentError(f"bad tail support {self.k_min}..{self.k_max}")

    def cdf(self):
        weights = np.arange(self.k_min, self.k_max + 1, dtype=np.float64) ** -self.exponent
        cdf = np.cumsum(weights)
        return cdf / cdf[-1]


def _check_years(year_range, what):
    first, last = year_range
    if first > last:
        raise ArgumentError(f"{what} year_range {first}-{last} is empty")
    if first < INGEST["year_min"] or last > INGEST["year_max"]:
        raise ArgumentError(f"{what} year_range {first}-{last} outside {INGEST['year_min']}-{INGEST['year_max']}")


@dataclass(frozen=True)
class PlantedClusterSpec:
    label: str
    n_pubs: int
    size_mean: float
    size_jitter: float
    year_range: tuple
    citation_multiplier: float = 1.0

    def __post_init__(self):
        if not self.label:
            raise ArgumentError("planted cluster needs a label")
        if self.n_pubs < 1:
            raise ArgumentError(f"{self.label}: n_pubs must be >= 1")
        if not 0 <= self.size_jitter < 1:
            raise ArgumentError(f"{self.label}: size_jitter must be in [0, 1)")
        if self.size_mean * (1 - self.size_jitter) < 1:
            raise ArgumentError(f"{self.label}: team sizes would fall below 1 author")
        if self.citation_multiplier < 1:
            raise ArgumentError(f"{self.label}: citation_multiplier must be >= 1")
        object.__setattr__(self, "year_range", tuple(self.year_range))
        _check_years(self.year_range, self.label)
        if self.size_mean * (1 - self.size_jitter) <= LARGE_TEAM_FLOOR:
            logger.warning(
                "Planted band %s may reach %d authors or fewer and overlap the natural population",
                self.label, LARGE_TEAM_FLOOR,
            )


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    n_natural: int
    team: NaturalTeamModel = field(default_factory=NaturalTeamModel)
    citations: CitationModel = field(default_factory=CitationModel)
    planted: tuple = ()
    year_range: tuple = (1991, 2019)
    tail: Optional[TailModel] = None
    aging_weights: tuple = ()       # weight per year since publication; last one repeats; () = uniform
    with_history: bool = True
    emit_labels: bool = True        # write planted labels to the collab field

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.n_natural < 0:
            raise ArgumentError("n_natural must be >= 0")
        object.__setattr__(self, "planted", tuple(self.planted))
        object.__setattr__(self, "year_range", tuple(self.year_range))
        object.__setattr__(self, "aging_weights", tuple(self.aging_weights))
        _check_years(self.year_range, "corpus")
        labels = [p.label for p in self.planted]
        if len(set(labels)) != len(labels) or NATURAL in labels:
            raise ArgumentError(f"planted labels must be unique and not {NATURAL!r}: {labels}")
        if self.aging_weights and (min(self.aging_weights) < 0 or sum(self.aging_weights) <= 0):
            raise ArgumentError("aging_weights must be non-negative with a positive sum")

    @property
    def size(self):
        return self.n_natural + sum(p.n_pubs for p in self.planted)


@dataclass(frozen=True)
class GroundTruth:
    """Origin of every generated record plus the realized shares per planted label."""
    origins: dict                   # id -> "natural" | label
    member_counts: dict             # label -> records
    citation_counts: dict           # label -> citations
    publication_shares: dict        # label -> % of all records (2 decimals)
    citation_shares: dict           # label -> % of all citations, None when the corpus has none
    total_publications: int
    total_citations: int

    def members(self, label):
        return frozenset(rid for rid, origin in self.origins.items() if origin == label)

    def rows(self):
        for rid in sorted(self.origins):
            origin = self.origins[rid]
            yield {
                "id": rid,
                "origin": NATURAL if origin == NATURAL else "planted",
                "label": None if origin == NATURAL else origin,
            }


# ------------------------------------------------------------------
# Sampling
# ------------------------------------------------------------------

def _rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _blocks(n):
    return [(start, min(start + BLOCK_SIZE, n)) for start in range(0, n, BLOCK_SIZE)]


def _spread(total, first, last, weights):
    """
    Split `total` citations over first..last by the aging weights with
    largest-remainder rounding (ties to the earliest year); zero years omitted.
    """
    if total == 0:
        return {}
    n = last - first + 1
    if not weights:
        base, extra = divmod(total, n)
        alloc = [base + (1 if i < extra else 0) for i in range(n)]
    else:
        w = [weights[min(i, len(weights) - 1)] for i in range(n)]
        if sum(w) == 0:
            w = [1.0] * n
        quotas = [total * wi / sum(w) for wi in w]
        alloc = [int(q) for q in quotas]
        rest = total - sum(alloc)
        order = sorted(range(n), key=lambda i: (-(quotas[i] - alloc[i]), i))
        for i in order[:rest]:
            alloc[i] += 1
    return {first + i: a for i, a in enumerate(alloc) if a}


class CorpusGenerator:
    """
    Builds a synthetic corpus from a GeneratorSpec.

    Natural records get ids syn-0000000 .. in index order, planted records
    follow in spec order. Each block of BLOCK_SIZE indices draws from its own
    seeded stream, so `workers` only changes speed.
    """

    def __init__(self, spec, workers=1):
        self.spec = spec
        self.workers = max(1, int(workers))
        self._citation_cdf = spec.citations.cdf()
        self._tail_cdf = spec.tail.cdf() if spec.tail is not None else None

    # -- per-block draws -------------------------------------------------

    def _draw_citations(self, rng, size):
        drawn = np.searchsorted(self._citation_cdf, rng.random(size), side="right")
        return np.minimum(drawn, self.spec.citations.cap)

    def _natural_block(self, block_no, start, stop):
        spec = self.spec
        rng = _rng(spec.seed, 0, block_no)
        size = stop - start
        first, last = spec.year_range
        years = rng.integers(first, last + 1, size=size)
        authors = spec.team.offset + rng.poisson(spec.team.rate, size=size)
        if self._tail_cdf is not None:
            in_tail = rng.random(size) < spec.tail.fraction
            tail_sizes = spec.tail.k_min + np.searchsorted(self._tail_cdf, rng.random(size), side="right")
            authors = np.where(in_tail, np.minimum(tail_sizes, spec.tail.k_max), authors)
        citations = self._draw_citations(rng, size)
        return years, authors, citations

    def _planted_block(self, label_no, block_no, start, stop):
        planted = self.spec.planted[label_no]
        rng = _rng(self.spec.seed, 1, label_no, block_no)
        size = stop - start
        first, last = planted.year_range
        years = rng.integers(first, last + 1, size=size)
        u = rng.uniform(-planted.size_jitter, planted.size_jitter, size=size)
        authors = np.maximum(1, np.rint(planted.size_mean * (1 + u))).astype(np.int64)
        citations = np.rint(planted.citation_multiplier * self._draw_citations(rng, size)).astype(np.int64)
        return years, authors, citations

    def _jobs(self):
        jobs = [(NATURAL, lambda b=b, s=s, e=e: self._natural_block(b, s, e))
                for b, (s, e) in enumerate(_blocks(self.spec.n_natural))]
        for j, planted in enumerate(self.spec.planted):
            jobs.extend(
                (planted.label, lambda j=j, b=b, s=s, e=e: self._planted_block(j, b, s, e))
                for b, (s, e) in enumerate(_blocks(planted.n_pubs))
            )
        return jobs

    # -- assembly ---------------------------------------------------------

    def _make_record(self, index, year, authors, citations, origin):
        spec = self.spec
        history = None
        if spec.with_history:
            end = max(spec.year_range[1], year)
            history = _spread(citations, year, end, spec.aging_weights)
        label = origin if origin != NATURAL and spec.emit_labels else None
        # values are generated valid, so skip validation
        return PublicationRecord.model_construct(
            id=f"syn-{index:07d}",
            year=year,
            author_count=authors,
            citation_total=citations,
            citations_by_year=history,
            collab_label=label,
        )

    def generate(self):
        spec = self.spec
        jobs = self._jobs()
        if self.workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                drawn = list(pool.map(lambda job: job[1](), jobs))
        else:
            drawn = [job[1]() for job in jobs]

        records, origins = [], {}
        index = 0
        for (origin, _), (years, authors, citations) in zip(jobs, drawn):
            for year, k, c in zip(years.tolist(), authors.tolist(), citations.tolist()):
                record = self._make_record(index, year, k, c, origin)
                records.append(record)
                origins[record.id] = origin
                index += 1

        corpus = Corpus(tuple(records), provenance=f"synthetic(seed={spec.seed})")
        truth = self._ground_truth(corpus, origins)
        logger.info(
            "Generated %d records (%d natural, %d planted in %d band(s))",
            len(corpus), spec.n_natural, len(corpus) - spec.n_natural, len(spec.planted),
        )
        return corpus, truth

    def _ground_truth(self, corpus, origins):
        total_pubs = len(corpus)
        total_cites = corpus.total_citations()
        members, cites = {}, {}
        for planted in self.spec.planted:
            members[planted.label] = 0
            cites[planted.label] = 0
        for record in corpus:
            origin = origins[record.id]
            if origin != NATURAL:
                members[origin] += 1
                cites[origin] += record.citation_total
        return GroundTruth(
            origins=origins,
            member_counts=members,
            citation_counts=cites,
            publication_shares={k: share(v, total_pubs, 2) for k, v in members.items()},
            citation_shares={k: share(v, total_cites, 2) if total_cites else None for k, v in cites.items()},
            total_publications=total_pubs,
            total_citations=total_cites,
        )


def generate_corpus(spec, workers=1):
    """Generate (Corpus, GroundTruth) for `spec`; identical for any `workers`."""
    return CorpusGenerator(spec, workers).generate()


# ------------------------------------------------------------------
# Presets and output
# ------------------------------------------------------------------

def preset(name, seed=None, n_natural=None):
    """GeneratorSpec for a named preset, optionally overriding seed and natural count."""
    try:
        params = SYNTH_PRESETS[name]
    except KeyError:
        raise ArgumentError(f"unknown preset {name!r}; expected one of {sorted(SYNTH_PRESETS)}") from None
    return GeneratorSpec(
        seed=params["seed"] if seed is None else seed,
        n_natural=params["n_natural"] if n_natural is None else n_natural,
        team=NaturalTeamModel(**params["team"]),
        citations=CitationModel(**params["citations"]),
        planted=tuple(PlantedClusterSpec(**p) for p in params["planted"]),
        year_range=params["year_range"],
        tail=TailModel(**params["tail"]) if params.get("tail") else None,
        aging_weights=tuple(params.get("aging_weights", ())),
    )


def write_ground_truth(truth, stream):
    """Sidecar jsonl: one {"id", "origin", "label"} object per record in id order."""
    for row in truth.rows():
        stream.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")))
        stream.write("\n")


def dump_ground_truth(truth, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding=INGEST["encoding"], newline="") as f:
        write_ground_truth(truth, f)
    logger.info("Wrote %s", path)
    return path
