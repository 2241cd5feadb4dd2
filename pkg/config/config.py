"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Centralized configuration used across the toolkit.
- CLI flags override these values per run; nothing here is read from the environment.
"""

# ---------------------------------------------------------------------------
# Threshold references (documentation only)
# 1) 50 authors: the recurring split between "natural" teams and large collaborations.
# 2) 50 / 300 / 500 / 1000 / 2000: exceedance rows of the national share table.
# 3) 1000 authors: the hyperauthorship marker used on the citation-frequency plot.
# ---------------------------------------------------------------------------

# INGEST
# ------
# Record file handling. Encoding and csv dialect are fixed so that outputs are
# bit-exact across machines.
INGEST = {
    "format": "jsonl",
    "dedup_policy": "keep-first",
    "encoding": "utf-8",
    "csv_header": ["id", "year", "authors", "citations", "collab", "title"],
    "chunk_lines": 50_000,          # jsonl lines per worker chunk when parsing in parallel
    "year_min": 1800,
    "year_max": 2100,
}

# ANALYSIS
# --------
# Defaults for indicator tables and sensitivity runs.
ANALYSIS = {
    "split_at": 50,
    "thresholds": [50, 300, 500, 1000, 2000],
    "hyper_threshold": 1000,
    "share_decimals": 2,
    "exclusion_decimals": 0,
    "profile_thresholds": [50, 500],
    "highly_cited_min": 1000,
    "team_band_edges": [10, 50],
    "early_period_end": 1990,       # "published up to 1990" bucket of the highly-cited breakdown
    "recent_period_start": 2006,    # "published after 2005" bucket
    "top_cited_limit": 5,
}

# DETECTION
# ---------
# Collaboration cluster detection. There is no established numeric criterion,
# so rel_tol and min_members are toolkit choices exposed as CLI flags.
DETECTION = {
    "min_size": 50,
    "rel_tol": 0.05,
    "min_members": 5,
}

# SYNTH_PRESETS
# -------------
# Parameter sets for the synthetic corpus generator (workload/generator.py).
# Team sizes: offset + Poisson(rate). Citations: truncated zeta on 0..cap,
# P(c) ~ (c + 1) ** -alpha. Planted bands mirror the LHCb / ALICE / CMS sizes.
SYNTH_PRESETS = {
    "fig1-physics": {
        "seed": 1,
        "n_natural": 5_000,
        "team": {"offset": 1, "rate": 1.5},       # Poisson mode 1 -> modal team size 2
        "citations": {"alpha": 2.2, "cap": 2_000},
        "year_range": (1993, 2017),
        "planted": [],
    },
    "table2-ukraine": {
        "seed": 2020,
        "n_natural": 5_000,
        "team": {"offset": 1, "rate": 2.0},
        "citations": {"alpha": 1.8, "cap": 5_359},
        "year_range": (1991, 2019),
        "planted": [
            {"label": "LHCb", "n_pubs": 40, "size_mean": 540, "size_jitter": 0.03,
             "year_range": (2010, 2019), "citation_multiplier": 4.0},
            {"label": "ALICE", "n_pubs": 40, "size_mean": 1000, "size_jitter": 0.03,
             "year_range": (2010, 2019), "citation_multiplier": 5.0},
            {"label": "CMS", "n_pubs": 60, "size_mean": 2900, "size_jitter": 0.04,
             "year_range": (2008, 2019), "citation_multiplier": 6.0},
        ],
    },
    "fig4-tail": {
        "seed": 1991,
        "n_natural": 8_000,
        "team": {"offset": 1, "rate": 2.5},
        "tail": {"fraction": 0.04, "exponent": 2.5, "k_min": 5, "k_max": 400},
        "citations": {"alpha": 2.0, "cap": 5_359},
        "year_range": (1991, 2019),
        "planted": [
            {"label": "BESIII", "n_pubs": 25, "size_mean": 450, "size_jitter": 0.03,
             "year_range": (2012, 2019), "citation_multiplier": 2.0},
            {"label": "LHCb", "n_pubs": 30, "size_mean": 540, "size_jitter": 0.03,
             "year_range": (2010, 2019), "citation_multiplier": 4.0},
            {"label": "ALICE", "n_pubs": 30, "size_mean": 1000, "size_jitter": 0.03,
             "year_range": (2010, 2019), "citation_multiplier": 5.0},
            {"label": "CMS", "n_pubs": 45, "size_mean": 2900, "size_jitter": 0.04,
             "year_range": (2008, 2019), "citation_multiplier": 6.0},
        ],
    },
}

# Extension notes:
# - A new preset only needs an entry above; workload.generator.preset() picks it up by name.
# - Keep numeric literal underscores for readability.
