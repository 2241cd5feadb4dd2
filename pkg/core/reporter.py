"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Writes every result as a tab-separated, plot-ready text file and can echo
  the same rows as a console table.
- Each file opens with `#` lines recording the run configuration; there are
  no timestamps, so identical runs give identical bytes.
- Columns are declared as (key, label, format) tuples, see INDICATOR_FIELDS.
"""

import logging
import sys
from pathlib import Path

from config.config import INGEST
from config.metrics import share

logger = logging.getLogger(__name__)

MISSING = "NA"


def format_value(value, fmt="{}"):
    """Apply `fmt`; None becomes NA and unformattable values fall back to str()."""
    if value is None:
        return MISSING
    try:
        return fmt.format(value)
    except (ValueError, TypeError):
        return str(value)


def config_header(command, config):
    """`#` comment lines describing a run: command first, then sorted key=value pairs."""
    lines = [f"# hyperauthorpy {command}"]
    for key in sorted(config):
        value = config[key]
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"# {key}={format_value(value)}")
    return lines


class Reporter:
    """
    Field-driven TSV + console table reporter.

    fields : list of (key, label, format_string)
             key   = dictionary key in each row dict
             label = column name in the TSV header and console table
             fmt   = how to format the value (e.g. '{:.2f}')
    header : `#` comment lines written before the column header
    """

    def __init__(self, fields, header=()):
        self.fields = list(fields)
        self.header = list(header)

    @property
    def labels(self):
        return [label for _, label, _ in self.fields]

    def format_row(self, data):
        return [format_value(data.get(key), fmt) for key, _, fmt in self.fields]

    def lines(self, rows):
        out = list(self.header)
        out.append("\t".join(self.labels))
        out.extend("\t".join(self.format_row(row)) for row in rows)
        return out

    def write(self, path, rows):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding=INGEST["encoding"], newline="\n") as f:
            for line in self.lines(rows):
                f.write(line + "\n")
        logger.info("Wrote %s", path)
        return path

    def print_table(self, rows, stream=None):
        """Aligned console table: header, separator, one line per row."""
        stream = stream or sys.stdout
        formatted = [self.format_row(row) for row in rows]
        widths = [len(label) for label in self.labels]
        for values in formatted:
            widths = [max(w, len(v)) for w, v in zip(widths, values)]
        print(" | ".join(label.ljust(w) for label, w in zip(self.labels, widths)), file=stream)
        print("-+-".join("-" * w for w in widths), file=stream)
        for values in formatted:
            print(" | ".join(v.ljust(w) for v, w in zip(values, widths)), file=stream)


# ---------------------------------------------------------------------
# Column sets
# ---------------------------------------------------------------------
# To change a table: add, remove or reorder tuples below. Keys must match the
# attribute names of the objects the writers receive (IndicatorSet, ...).
# ---------------------------------------------------------------------

INDICATOR_FIELDS = [
    ("publication_count",          "pubs",             "{}"),
    ("mean_authors",               "mean_authors",     "{:.2f}"),
    ("median_authors",             "median_authors",   "{:.1f}"),
    ("single_author_share",        "single_author",    "{:.4f}"),
    ("max_authors",                "max_authors",      "{}"),
    ("mean_citations",             "mean_cites",       "{:.2f}"),
    ("median_citations",           "median_cites",     "{:.1f}"),
    ("max_citations",              "max_cites",        "{}"),
    ("uncited_share",              "uncited",          "{:.4f}"),
    ("h_index",                    "h_index",          "{}"),
    ("mean_publications_per_year", "pubs_per_year",    "{:.2f}"),
    ("mean_citations_per_year",    "cites_per_year",   "{:.2f}"),
    ("citation_cutoff_year",       "cutoff_year",      "{}"),
]

ANALYSIS_SPAN_FIELDS = [
    ("span_years",                          "span_years",              "{}"),
    ("analysis_span_years",                 "analysis_span_years",     "{}"),
    ("mean_publications_per_analysis_year", "pubs_per_analysis_year",  "{:.2f}"),
    ("mean_citations_per_analysis_year",    "cites_per_analysis_year", "{:.2f}"),
]

CLUSTER_FIELDS = [
    ("label",      "label",      "{}"),
    ("members",    "members",    "{}"),
    ("centroid",   "centroid",   "{:.1f}"),
    ("band_min",   "band_min",   "{}"),
    ("band_max",   "band_max",   "{}"),
    ("year_first", "year_first", "{}"),
    ("year_last",  "year_last",  "{}"),
]

ERROR_FIELDS = [
    ("source",   "source",   "{}"),
    ("line",     "line",     "{}"),
    ("severity", "severity", "{}"),
    ("reason",   "reason",   "{}"),
    ("id",       "id",       "{}"),
    ("detail",   "detail",   "{}"),
]

RECORD_FIELDS = [
    ("id",             "id",        "{}"),
    ("year",           "year",      "{}"),
    ("author_count",   "authors",   "{}"),
    ("citation_total", "citations", "{}"),
    ("collab_label",   "collab",    "{}"),
    ("title",          "title",     "{}"),
]


# ---------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------

def _indicator_values(indicators):
    if indicators is None:
        return {}
    return indicators.to_dict()


def write_indicators(indicators, path, header=(), echo=False):
    """Two columns: metric, value; analysis-span rows follow when requested."""
    values = _indicator_values(indicators)
    fields = list(INDICATOR_FIELDS)
    if values.get("analysis_span_years") is not None:
        fields += ANALYSIS_SPAN_FIELDS
    rows = [{"metric": label, "value": format_value(values.get(key), fmt)} for key, label, fmt in fields]
    reporter = Reporter([("metric", "metric", "{}"), ("value", "value", "{}")], header)
    if echo:
        reporter.print_table(rows)
    return reporter.write(path, rows)


def _share_fmt(decimals):
    return "{:.%df}" % decimals


def sensitivity_rows(table):
    """Row dicts for a SensitivityTable: the `all` baseline first, then one per threshold."""
    rows = [{
        "n": "all",
        "pubs": table.corpus_publications,
        "pub_share": share(table.corpus_publications, table.base_publications, table.decimals),
        "cites": table.corpus_citations,
        "cite_share": (
            share(table.corpus_citations, table.base_citations, table.decimals) if table.base_citations else None
        ),
        "excluded_share": 0.0,
        **_indicator_values(table.baseline),
    }]
    for row in table.rows:
        rows.append({
            "n": row.spec.n,
            "pubs": row.publication_count,
            "pub_share": row.publication_share,
            "cites": row.citation_count,
            "cite_share": row.citation_share,
            "excluded_share": row.excluded_share,
            **_indicator_values(row.indicators),
        })
    return rows


def sensitivity_reporter(table, header=()):
    share_fmt = _share_fmt(table.decimals)
    fields = [
        ("n",          "n",          "{}"),
        ("pubs",       "pubs",       "{}"),
        ("pub_share",  "pub_share",  share_fmt),
        ("cites",      "cites",      "{}"),
        ("cite_share", "cite_share", share_fmt),
    ]
    if table.exclusion_decimals is not None:
        fields.append(("excluded_share", "excluded_share", _share_fmt(table.exclusion_decimals)))
    # indicator columns get an `ind_` prefix where they would clash with the count columns
    fields += [(key, "ind_pubs" if label == "pubs" else label, fmt) for key, label, fmt in INDICATOR_FIELDS]
    return Reporter(fields, header)


def write_sensitivity(table, path, header=(), echo=False):
    reporter = sensitivity_reporter(table, header)
    rows = sensitivity_rows(table)
    if echo:
        reporter.print_table(rows)
    return reporter.write(path, rows)


def write_series(series_list, path, header=(), value_fmt="{}"):
    """
    Plot-ready series: `year` followed by one column per series. Years missing
    from a series (mean series omit empty years) are written as NA.
    """
    years = sorted({y for series in series_list for y in series.years})
    fields = [("year", "year", "{}")] + [(s.name, s.name, value_fmt) for s in series_list]
    lookups = [s.as_dict() for s in series_list]
    rows = []
    for year in years:
        row = {"year": year}
        for series, values in zip(series_list, lookups):
            row[series.name] = values.get(year)
        rows.append(row)
    return Reporter(fields, header).write(path, rows)


def write_distribution(distribution, path, header=()):
    fmt = "{!r}" if distribution.normalized else "{}"
    rows = [{"k": k, "f": f} for k, f in distribution.support]
    return Reporter([("k", "authors", "{}"), ("f", "frequency", fmt)], header).write(path, rows)


def write_citation_frequency(frequency, path, header=()):
    rows = [{"c": c, "p": p, "hyper": h} for c, p, h in frequency.rows]
    fields = [
        ("c",     "citations",                                 "{}"),
        ("p",     "publications",                              "{}"),
        ("hyper", f"share_authors>{frequency.hyper_threshold}", "{!r}"),
    ]
    return Reporter(fields, header).write(path, rows)


def cluster_rows(clusters):
    return [
        {
            "label": c.label,
            "members": c.size,
            "centroid": c.centroid_size,
            "band_min": c.size_band[0],
            "band_max": c.size_band[1],
            "year_first": c.year_span[0],
            "year_last": c.year_span[1],
        }
        for c in clusters
    ]


def write_clusters(clusters, path, header=(), echo=False):
    reporter = Reporter(CLUSTER_FIELDS, header)
    rows = cluster_rows(clusters)
    if echo:
        reporter.print_table(rows)
    return reporter.write(path, rows)


def write_errors(errors, path, header=()):
    return Reporter(ERROR_FIELDS, header).write(path, [e.to_dict() for e in errors])


def write_profile(profile, path, header=(), echo=False):
    fields = [
        ("name",  "name",       "{}"),
        ("pubs",  "pubs",       "{}"),
        ("first", "first_year", "{}"),
        ("last",  "last_year",  "{}"),
    ]
    row = {
        "name": profile.name,
        "pubs": profile.publication_count,
        "first": profile.first_year,
        "last": profile.last_year,
        "h": profile.h_index,
    }
    for n, value in profile.large_team_shares:
        fields.append((f"share>{n}", f"share_authors>{n}", "{:g}"))
        row[f"share>{n}"] = value
    fields.append(("h", "h_index", "{}"))
    reporter = Reporter(fields, header)
    if echo:
        reporter.print_table([row])
    return reporter.write(path, [row])


def write_top_cited(records, breakdown, path, header=(), echo=False):
    """Top cited records; the team-size breakdown goes to a sibling *_bands file."""
    reporter = Reporter(RECORD_FIELDS, header)
    rows = [
        {
            "id": r.id,
            "year": r.year,
            "author_count": r.author_count,
            "citation_total": r.citation_total,
            "collab_label": r.collab_label,
            "title": r.title,
        }
        for r in records
    ]
    if echo:
        reporter.print_table(rows)
    path = reporter.write(path, rows)

    band_path = path.with_name(path.stem + "_bands" + path.suffix)
    band_rows = [{"band": label, "count": count} for label, count in breakdown.bands]
    band_rows += [
        {"band": "total", "count": breakdown.total},
        {"band": "published_early", "count": breakdown.published_early},
        {"band": "published_recent", "count": breakdown.published_recent},
    ]
    band_header = list(header) + [f"# min_citations={breakdown.min_citations}"]
    Reporter([("band", "band", "{}"), ("count", "count", "{}")], band_header).write(band_path, band_rows)
    return path
