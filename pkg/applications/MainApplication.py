"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Command-line entry point: python applications/MainApplication.py <command> [flags]
- Commands: summary, sensitivity, dist, citedist, detect, dynamics, synth,
  validate, yearly, profile, topcited. Every command writes TSV files under --out.
- Exit status: 0 on success, 1 on an analysis error (or any record error with
  --strict), 2 on a usage error.
"""

import argparse
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import quote

# ---------------------------------------------------------------------
# Import path setup
# ---------------------------------------------------------------------
# Ensure the project root is on sys.path so module imports work when
# running this file directly (python applications/MainApplication.py).
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
ROOT_DIR = os.path.abspath(os.path.join(CURRENT_DIR, ".."))
if ROOT_DIR not in sys.path:
    sys.path.append(ROOT_DIR)

from config.config import ANALYSIS, DETECTION, INGEST  # noqa: E402
from config.metrics import h_index_series, indicator_set, yearly_counts, yearly_mean_citations  # noqa: E402
from core import reporter  # noqa: E402
from core.collab import (  # noqa: E402
    author_count_distribution,
    citation_frequency,
    cluster_h_index_series,
    cluster_yearly_counts,
    detect_clusters,
    highly_cited_breakdown,
    top_cited,
)
from core.errors import AnalysisError, ArgumentError  # noqa: E402
from core.ingest import DEDUP_POLICIES, FORMATS, dump_records, filter_period, load_corpus  # noqa: E402
from core.sensitivity import ThresholdMode, ThresholdSpec, entity_profile, exclusion_report, sensitivity_table  # noqa: E402
from entities.record import Severity  # noqa: E402
from workload.generator import dump_ground_truth, generate_corpus, preset  # noqa: E402

logger = logging.getLogger(__name__)

COMMANDS = (
    "summary", "sensitivity", "dist", "citedist", "detect", "dynamics",
    "synth", "validate", "yearly", "profile", "topcited",
)


# ---------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------

@dataclass
class RunConfig:
    """Everything one invocation needs; built from the parsed flags."""
    command: str
    inputs: list = field(default_factory=list)
    fmt: str = INGEST["format"]
    dedup_policy: str = INGEST["dedup_policy"]
    year_from: Optional[int] = None
    year_to: Optional[int] = None
    periods: list = field(default_factory=list)
    citation_cutoff: Optional[int] = None
    thresholds: Optional[list] = None
    mode: str = ThresholdMode.EXCEEDS.value
    share_base: str = "slice"
    decimals: int = ANALYSIS["share_decimals"]
    exclusion_decimals: int = ANALYSIS["exclusion_decimals"]
    split_at: int = ANALYSIS["split_at"]
    hyper_threshold: int = ANALYSIS["hyper_threshold"]
    min_size: int = DETECTION["min_size"]
    rel_tol: float = DETECTION["rel_tol"]
    min_members: int = DETECTION["min_members"]
    group_by_label: bool = False
    per_cluster: bool = False
    raw: bool = False
    name: Optional[str] = None
    limit: int = ANALYSIS["top_cited_limit"]
    min_citations: int = ANALYSIS["highly_cited_min"]
    preset: Optional[str] = None
    seed: Optional[int] = None
    natural: Optional[int] = None
    out: Path = Path("results")
    strict: bool = False
    workers: int = 1

    # not part of the recorded configuration: they never change output bytes
    _UNRECORDED = ("command", "out", "workers")

    @classmethod
    def from_args(cls, args):
        return cls(
            command=args.command,
            inputs=list(args.input or []),
            fmt=args.format,
            dedup_policy=args.dedup,
            year_from=args.year_from,
            year_to=args.year_to,
            periods=list(args.period or []),
            citation_cutoff=args.citation_cutoff,
            thresholds=args.thresholds,
            mode=args.mode,
            share_base=args.share_base,
            decimals=args.decimals,
            exclusion_decimals=args.exclusion_decimals,
            split_at=args.split_at,
            hyper_threshold=args.hyper_threshold,
            min_size=args.min_size,
            rel_tol=args.rel_tol,
            min_members=args.min_members,
            group_by_label=args.group_by_label,
            per_cluster=args.per_cluster,
            raw=args.raw,
            name=args.name,
            limit=args.limit,
            min_citations=args.min_citations,
            preset=args.preset,
            seed=args.seed,
            natural=args.natural,
            out=Path(args.out),
            strict=args.strict,
            workers=args.workers,
        )

    def header(self, **extra):
        values = {k: v for k, v in vars(self).items() if k not in self._UNRECORDED}
        values["periods"] = [f"{a}-{b}" for a, b in self.periods]
        values.update(extra)
        return reporter.config_header(self.command, values)

    def path(self, filename):
        return self.out / filename


# ---------------------------------------------------------------------
# Shared steps
# ---------------------------------------------------------------------

def _safe_name(label):
    """Percent-encode a cluster label for a file name; distinct labels never share a name."""
    return quote(label, safe="")


def _load(config):
    """Read --input files -> (full corpus, sliced corpus); applies --strict."""
    if not config.inputs:
        raise ArgumentError(f"{config.command} needs at least one --input file")
    corpus, errors = load_corpus(config.inputs, config.fmt, config.dedup_policy, config.workers)
    if errors:
        reporter.write_errors(errors, config.path("errors.tsv"), config.header())
        if config.strict:
            raise AnalysisError(f"{len(errors)} record error(s) with --strict; see {config.path('errors.tsv')}")
    if len(corpus) == 0:
        raise ArgumentError("input holds no valid records")
    return corpus, _slice(corpus, config.year_from, config.year_to)


def _slice(corpus, year_from, year_to):
    if year_from is None and year_to is None:
        return corpus
    first, last = corpus.year_span()
    return filter_period(
        corpus,
        year_from if year_from is not None else first,
        year_to if year_to is not None else last,
    )


def _non_empty(corpus, what):
    if len(corpus) == 0:
        raise ArgumentError(f"no records in {what}")
    return corpus


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------

def cmd_validate(config):
    if not config.inputs:
        raise ArgumentError("validate needs at least one --input file")
    corpus, errors = load_corpus(config.inputs, config.fmt, config.dedup_policy, config.workers)
    reporter.write_errors(errors, config.path("errors.tsv"), config.header())
    n_errors = sum(e.severity is Severity.ERROR for e in errors)
    logger.info("%s: %d error(s), %d warning(s)", corpus, n_errors, len(errors) - n_errors)
    if config.strict and errors:
        raise AnalysisError(f"{len(errors)} record error(s) with --strict")
    return 0


def cmd_summary(config):
    corpus, sliced = _load(config)
    if config.periods:
        slices = [(a, b, filter_period(corpus, a, b), (a, b)) for a, b in config.periods]
    else:
        span = sliced.year_span() if len(sliced) else (config.year_from, config.year_to)
        slices = [(span[0], span[1], sliced, None)]
    for first, last, part, analysis_span in slices:
        _non_empty(part, f"period {first}-{last}")
        indicators = indicator_set(part, config.citation_cutoff, analysis_span)
        reporter.write_indicators(
            indicators,
            config.path(f"summary_{first}_{last}.tsv"),
            config.header(slice=f"{first}-{last}"),
            echo=True,
        )
    return 0


def cmd_sensitivity(config):
    corpus, sliced = _load(config)
    _non_empty(sliced, "the selected period")
    thresholds = config.thresholds or ANALYSIS["thresholds"]
    if config.mode == ThresholdMode.EXCEEDS.value:
        base = sliced if config.share_base == "slice" else corpus
        table = sensitivity_table(
            sliced, base, [ThresholdSpec(n) for n in thresholds],
            config.citation_cutoff, config.decimals, config.workers,
        )
    else:
        table = exclusion_report(
            sliced, thresholds, config.citation_cutoff,
            decimals=config.exclusion_decimals, share_decimals=config.decimals, workers=config.workers,
        )
    reporter.write_sensitivity(table, config.path(f"sensitivity_{config.mode}.tsv"), config.header(), echo=True)
    return 0


def cmd_dist(config):
    _, sliced = _load(config)
    distribution = author_count_distribution(_non_empty(sliced, "the selected period"), normalize=not config.raw)
    reporter.write_distribution(distribution, config.path("dist.tsv"), config.header())
    return 0


def cmd_citedist(config):
    _, sliced = _load(config)
    frequency = citation_frequency(_non_empty(sliced, "the selected period"), config.hyper_threshold)
    reporter.write_citation_frequency(frequency, config.path("citedist.tsv"), config.header())
    return 0


def _clusters(config, corpus):
    return detect_clusters(corpus, config.min_size, config.rel_tol, config.min_members, config.group_by_label)


def cmd_detect(config):
    _, sliced = _load(config)
    clusters = _clusters(config, sliced)
    header = config.header()
    reporter.write_clusters(clusters, config.path("clusters.tsv"), header, echo=True)
    for cluster in clusters:
        reporter.write_series(
            [cluster_yearly_counts(cluster, sliced)],
            config.path(f"cluster_{_safe_name(cluster.label)}_yearly.tsv"),
            header,
        )
    return 0


def cmd_dynamics(config):
    _, sliced = _load(config)
    header = config.header()
    reporter.write_series([h_index_series(sliced)], config.path("dynamics.tsv"), header)
    if config.per_cluster:
        for cluster in _clusters(config, sliced):
            reporter.write_series(
                [cluster_h_index_series(cluster, sliced)],
                config.path(f"dynamics_{_safe_name(cluster.label)}.tsv"),
                header,
            )
    return 0


def cmd_yearly(config):
    _, sliced = _load(config)
    header = config.header()
    small, large = yearly_counts(sliced, config.split_at)
    reporter.write_series([small, large], config.path("yearly_counts.tsv"), header)
    means = [yearly_mean_citations(sliced), yearly_mean_citations(sliced, config.split_at)]
    reporter.write_series(means, config.path("yearly_citations.tsv"), header, value_fmt="{:.4f}")
    return 0


def cmd_profile(config):
    _, sliced = _load(config)
    profile = entity_profile(
        _non_empty(sliced, "the selected period"),
        config.thresholds or ANALYSIS["profile_thresholds"],
        name=config.name,
        decimals=config.exclusion_decimals,
    )
    reporter.write_profile(profile, config.path("profile.tsv"), config.header(), echo=True)
    return 0


def cmd_topcited(config):
    _, sliced = _load(config)
    records = top_cited(sliced, config.limit)
    breakdown = highly_cited_breakdown(sliced, config.min_citations)
    reporter.write_top_cited(records, breakdown, config.path("topcited.tsv"), config.header(), echo=True)
    return 0


def cmd_synth(config):
    if not config.preset:
        raise ArgumentError("synth needs --preset")
    spec = preset(config.preset, seed=config.seed, n_natural=config.natural)
    corpus, truth = generate_corpus(spec, workers=config.workers)
    dump_records(corpus, config.path("corpus.jsonl"))
    dump_ground_truth(truth, config.path("ground_truth.jsonl"))

    rows = [
        {
            "label": label,
            "members": truth.member_counts[label],
            "citations": truth.citation_counts[label],
            "pub_share": truth.publication_shares[label],
            "cite_share": truth.citation_shares[label],
        }
        for label in truth.member_counts
    ]
    fields = [
        ("label",      "label",      "{}"),
        ("members",    "members",    "{}"),
        ("citations",  "citations",  "{}"),
        ("pub_share",  "pub_share",  "{:.2f}"),
        ("cite_share", "cite_share", "{:.2f}"),
    ]
    header = config.header(spec_seed=spec.seed, records=len(corpus), total_citations=truth.total_citations)
    reporter.Reporter(fields, header).write(config.path("synth.tsv"), rows)
    return 0


HANDLERS = {
    "summary": cmd_summary,
    "sensitivity": cmd_sensitivity,
    "dist": cmd_dist,
    "citedist": cmd_citedist,
    "detect": cmd_detect,
    "dynamics": cmd_dynamics,
    "synth": cmd_synth,
    "validate": cmd_validate,
    "yearly": cmd_yearly,
    "profile": cmd_profile,
    "topcited": cmd_topcited,
}


# ---------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------

def _int_list(text):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("threshold list is empty")
    return values


def _period(text):
    match = re.fullmatch(r"\s*(\d{4})\s*-\s*(\d{4})\s*", text)
    if not match:
        raise argparse.ArgumentTypeError(f"expected a period like 1991-2020, got {text!r}")
    first, last = int(match.group(1)), int(match.group(2))
    if first > last:
        raise argparse.ArgumentTypeError(f"empty period {text!r}")
    return first, last


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    io_group = common.add_argument_group("input/output")
    io_group.add_argument("--input", action="append", help="record file (repeatable)")
    io_group.add_argument("--format", choices=FORMATS, default=INGEST["format"])
    io_group.add_argument("--dedup", choices=DEDUP_POLICIES, default=INGEST["dedup_policy"])
    io_group.add_argument("--out", default="results", help="output directory (default: results)")
    io_group.add_argument("--strict", action="store_true", help="fail on any record error or warning")
    io_group.add_argument("--workers", type=int, default=1, help="parallel workers (output is unaffected)")

    period = common.add_argument_group("period")
    period.add_argument("--from", dest="year_from", type=int)
    period.add_argument("--to", dest="year_to", type=int)
    period.add_argument("--period", action="append", type=_period, help="summary slice A-B (repeatable)")
    period.add_argument("--citation-cutoff", type=int, help="citation stats cover records up to this year")

    analysis = common.add_argument_group("analysis")
    analysis.add_argument("--thresholds", type=_int_list, help="comma-separated author-count thresholds")
    analysis.add_argument("--mode", choices=[m.value for m in ThresholdMode], default=ThresholdMode.EXCEEDS.value)
    analysis.add_argument("--share-base", choices=("slice", "input"), default="slice",
                          help="denominator of exceedance shares: the period slice or the whole input")
    analysis.add_argument("--decimals", type=int, default=ANALYSIS["share_decimals"])
    analysis.add_argument("--exclusion-decimals", type=int, default=ANALYSIS["exclusion_decimals"])
    analysis.add_argument("--split-at", type=int, default=ANALYSIS["split_at"])
    analysis.add_argument("--hyper-threshold", type=int, default=ANALYSIS["hyper_threshold"])
    analysis.add_argument("--raw", action="store_true", help="dist: counts instead of frequencies")
    analysis.add_argument("--name", help="profile: entity name")
    analysis.add_argument("--limit", type=int, default=ANALYSIS["top_cited_limit"])
    analysis.add_argument("--min-citations", type=int, default=ANALYSIS["highly_cited_min"])

    detection = common.add_argument_group("collaboration detection")
    detection.add_argument("--min-size", type=int, default=DETECTION["min_size"])
    detection.add_argument("--rel-tol", type=float, default=DETECTION["rel_tol"])
    detection.add_argument("--min-members", type=int, default=DETECTION["min_members"])
    detection.add_argument("--group-by-label", action="store_true")
    detection.add_argument("--per-cluster", action="store_true", help="dynamics: also one series per cluster")

    synth = common.add_argument_group("synthetic corpora")
    synth.add_argument("--preset")
    synth.add_argument("--seed", type=_seed)
    synth.add_argument("--natural", type=int, help="override the preset's natural record count")

    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="hyperauthorpy",
        description="Hyperauthorship-aware bibliometric analyses on publication record files.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        commands.add_parser(name, parents=[common])
    return parser


def configure_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    config = RunConfig.from_args(args)
    try:
        return HANDLERS[config.command](config)
    except AnalysisError as exc:
        logger.error("%s failed: %s", config.command, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
