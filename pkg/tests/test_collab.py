import random

import numpy as np
import pytest

from config.metrics import h_index, yearly_counts
from conftest import make_corpus, make_record
from core.collab import (
    CollaborationCluster,
    author_count_distribution,
    citation_frequency,
    cluster_h_index_series,
    cluster_yearly_counts,
    detect_clusters,
    highly_cited_breakdown,
    top_cited,
)
from core.errors import ArgumentError, PreconditionError
from entities.corpus import Corpus
from workload.generator import GeneratorSpec, generate_corpus, preset


def band(prefix, sizes, year=2015, **extra):
    return [make_record(f"{prefix}{i:03d}", year, k, 10, **extra) for i, k in enumerate(sizes)]


# ---------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------

def test_author_count_distribution():
    dist = author_count_distribution(make_corpus([(1, 0), (1, 0), (2, 0)]))
    assert dist.as_dict() == {1: pytest.approx(2 / 3), 2: pytest.approx(1 / 3)}
    assert dist.mode == 1
    raw = author_count_distribution(make_corpus([(1, 0), (1, 0), (2, 0)]), normalize=False)
    assert raw.support == ((1, 2), (2, 1))
    with pytest.raises(ArgumentError):
        author_count_distribution(Corpus())


def test_distribution_normalized_and_order_independent():
    rng = np.random.default_rng(6)
    for trial in range(20):
        records = [make_record(f"d{trial}-{i}", 2000, int(k)) for i, k in enumerate(1 + rng.poisson(3.0, 300))]
        shuffled = list(records)
        random.Random(trial).shuffle(shuffled)
        dist = author_count_distribution(Corpus(tuple(records)))
        assert abs(sum(f for _, f in dist.support) - 1.0) <= 1e-12
        assert author_count_distribution(Corpus(tuple(shuffled))) == dist


def test_physics_preset_mode_is_two_authors():
    corpus, _ = generate_corpus(preset("fig1-physics"))
    dist = author_count_distribution(corpus)
    assert dist.mode == 2
    spec = preset("fig1-physics")
    assert max(corpus.author_counts()) <= spec.team.offset + 10 * spec.team.rate


def test_citation_frequency():
    corpus = Corpus((
        make_record("a", 2000, 2, 5),
        make_record("b", 2000, 1200, 5),
        make_record("c", 2000, 3, 0),
    ))
    assert citation_frequency(corpus, 1000).rows == ((0, 1, 0.0), (5, 2, 0.5))
    assert all(share == 0.0 for _, _, share in citation_frequency(corpus, 5000).rows)
    assert citation_frequency(Corpus()).rows == ()


def test_hyperauthored_share_rises_among_most_cited():
    corpus, _ = generate_corpus(preset("table2-ukraine"))
    freq = citation_frequency(corpus, 1000)
    overall = np.count_nonzero(corpus.author_counts() > 1000) / len(corpus)
    cut = np.quantile(corpus.citation_totals(), 0.9)
    top = [(p, s) for c, p, s in freq.rows if c >= cut]
    top_share = sum(p * s for p, s in top) / sum(p for p, _ in top)
    assert top_share > overall


# ---------------------------------------------------------------------
# detect_clusters
# ---------------------------------------------------------------------

def test_no_large_teams_no_clusters():
    assert detect_clusters(make_corpus([(3, 0), (50, 0)])) == []


def test_single_band():
    sizes = [2850, 2870, 2890, 2900, 2900, 2910, 2920, 2930, 2940, 2950]
    clusters = detect_clusters(Corpus(tuple(band("cms", sizes))))
    assert len(clusters) == 1
    cluster = clusters[0]
    assert cluster.size == 10
    assert cluster.size_band == (2850, 2950)
    assert cluster.label == "C2906"


def test_two_separated_bands_sorted_by_size():
    rng = np.random.default_rng(11)
    lhcb = band("l", np.rint(540 * (1 + rng.uniform(-0.03, 0.03, 30))).astype(int).tolist(), 2012)
    alice = band("a", np.rint(1000 * (1 + rng.uniform(-0.03, 0.03, 30))).astype(int).tolist(), 2014)
    clusters = detect_clusters(Corpus(tuple(lhcb + alice + band("n", [2, 3, 4]))))
    assert len(clusters) == 2
    assert clusters[0].member_ids == frozenset(r.id for r in alice)
    assert clusters[1].member_ids == frozenset(r.id for r in lhcb)
    assert clusters[0].centroid_size > clusters[1].centroid_size


def test_small_groups_dropped_and_labels_adopted():
    records = band("x", [600, 601, 602, 603, 604], collab="LHCb") + band("y", [2000, 2001])
    clusters = detect_clusters(Corpus(tuple(records)), min_members=5)
    assert [c.label for c in clusters] == ["LHCb"]


def test_mixed_labels_fall_back_to_centroid_label():
    records = band("x", [600, 601, 602], collab="LHCb") + band("y", [603, 604], collab="Other")
    clusters = detect_clusters(Corpus(tuple(records)))
    assert [c.label for c in clusters] == ["C602"]


def test_group_by_label():
    records = band("x", [600, 900, 1500, 2000, 2500], collab="GBD") + band("y", [700, 701, 702, 703, 704])
    clusters = detect_clusters(Corpus(tuple(records)), group_by_label=True)
    labels = {c.label: c for c in clusters}
    assert set(labels) == {"GBD", "C702"}
    assert labels["GBD"].size_band == (600, 2500)


def test_invalid_detection_arguments(toy_corpus):
    for kwargs in ({"rel_tol": 0}, {"rel_tol": 1}, {"min_members": 0}):
        with pytest.raises(ArgumentError):
            detect_clusters(toy_corpus, **kwargs)


def union_find_groups(sizes, rel_tol):
    """Reference single-linkage: link every pair within tolerance, then take connected components."""
    parent = list(range(len(sizes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(sizes)):
        for j in range(len(sizes)):
            k1, k2 = sorted((sizes[i], sizes[j]))
            if (k2 - k1) / k2 <= rel_tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(sizes)):
        groups.setdefault(find(i), set()).add(i)
    return sorted(groups.values(), key=min)


def test_detection_matches_single_linkage_oracle():
    rng = np.random.default_rng(5)
    for trial in range(50):
        n = int(rng.integers(1, 100))
        sizes = rng.integers(51, 400, n).tolist()
        records = [make_record(f"o{trial}-{i:03d}", 2000, k) for i, k in enumerate(sizes)]
        clusters = detect_clusters(Corpus(tuple(records)), rel_tol=0.05, min_members=1)
        got = sorted((frozenset(int(rid.split("-")[1]) for rid in c.member_ids) for c in clusters), key=min)
        expected = [frozenset(g) for g in union_find_groups(sizes, 0.05)]
        assert got == expected
        ids = [rid for c in clusters for rid in c.member_ids]
        assert len(ids) == len(set(ids)) == n


def test_detection_is_order_independent_and_stable_after_removal():
    spec = preset("table2-ukraine", seed=7)
    corpus, _ = generate_corpus(spec)
    clusters = detect_clusters(corpus)
    shuffled = list(corpus)
    random.Random(1).shuffle(shuffled)
    assert detect_clusters(Corpus(tuple(shuffled))) == clusters

    remaining = detect_clusters(corpus.without(clusters[0].member_ids))
    assert remaining == clusters[1:]


@pytest.mark.parametrize("seed", range(20))
def test_planted_bands_recovered(seed):
    corpus, truth = generate_corpus(preset("table2-ukraine", seed=seed))
    clusters = detect_clusters(corpus)
    assert len(clusters) == 3
    for cluster in clusters:
        planted = truth.members(cluster.label)
        correct = len(cluster.member_ids & planted)
        assert correct / max(len(planted), cluster.size) >= 0.95


def test_planted_recovery_without_labels():
    spec = preset("table2-ukraine", seed=3)
    unlabelled = GeneratorSpec(
        seed=spec.seed, n_natural=spec.n_natural, team=spec.team, citations=spec.citations,
        planted=spec.planted, year_range=spec.year_range, emit_labels=False,
    )
    corpus, truth = generate_corpus(unlabelled)
    clusters = detect_clusters(corpus)
    assert len(clusters) == 3
    for cluster, label in zip(clusters, ["CMS", "ALICE", "LHCb"]):
        assert cluster.member_ids == truth.members(label)
        assert cluster.label.startswith("C")


# ---------------------------------------------------------------------
# Per-cluster series
# ---------------------------------------------------------------------

def _cluster_of(corpus):
    return CollaborationCluster(
        label="X", member_ids=frozenset(corpus.ids), centroid_size=1.0, size_band=(1, 1),
        year_span=corpus.year_span(),
    )


def test_cluster_yearly_counts():
    corpus = Corpus((make_record("a", 2011), make_record("b", 2011), make_record("c", 2013), make_record("d", 2020)))
    cluster = _cluster_of(corpus.subset(["a", "b", "c"]))
    assert cluster_yearly_counts(cluster, corpus).points == ((2011, 2), (2012, 0), (2013, 1))


def test_cluster_counts_partition_yearly_totals():
    corpus, _ = generate_corpus(preset("table2-ukraine", seed=12, n_natural=300))
    clusters = detect_clusters(corpus)
    clustered = set().union(*(c.member_ids for c in clusters))
    small, large = yearly_counts(corpus)
    totals = {y: s + l for (y, s), (_, l) in zip(small, large)}
    rest = corpus.without(clustered)
    summed = dict.fromkeys(totals, 0)
    for r in rest:
        summed[r.year] += 1
    for cluster in clusters:
        for year, count in cluster_yearly_counts(cluster, corpus):
            summed[year] += count
    assert summed == totals


def test_cluster_unknown_member():
    corpus = make_corpus([(1, 0)])
    cluster = CollaborationCluster("X", frozenset({"zz"}), 1.0, (1, 1), (2000, 2000))
    with pytest.raises(ArgumentError):
        cluster_yearly_counts(cluster, corpus)


def test_cluster_h_index_series():
    corpus = Corpus((
        make_record("a", 2000, 900, 1, citations_by_year={"2001": 1}),
        make_record("b", 2000, 2, 5, citations_by_year={"2000": 5}),
    ))
    cluster = _cluster_of(corpus.subset(["a"]))
    series = cluster_h_index_series(cluster, corpus)
    assert series.points == ((2000, 0), (2001, 1))
    assert series.name == "X"


def test_cluster_h_index_series_final_value():
    corpus, _ = generate_corpus(preset("table2-ukraine", seed=4, n_natural=200))
    for cluster in detect_clusters(corpus):
        members = corpus.subset(cluster.member_ids)
        assert cluster_h_index_series(cluster, corpus).final == h_index(members.citation_totals())


def test_cluster_h_index_series_requires_history():
    corpus = Corpus((make_record("a", 2000, 900, 1),))
    with pytest.raises(PreconditionError):
        cluster_h_index_series(_cluster_of(corpus), corpus)


# ---------------------------------------------------------------------
# Highly cited
# ---------------------------------------------------------------------

def test_top_cited_breaks_ties_by_id():
    corpus = make_corpus([(1, 5), (2, 9), (3, 5), (4, 1)])
    assert [r.id for r in top_cited(corpus, 3)] == ["r1", "r0", "r2"]


def test_highly_cited_breakdown():
    corpus = Corpus((
        make_record("a", 1985, 3, 1500),
        make_record("b", 1999, 10, 2000),
        make_record("c", 2008, 50, 1000),
        make_record("d", 2012, 51, 5359),
        make_record("e", 2012, 2891, 999),
    ))
    breakdown = highly_cited_breakdown(corpus, 1000)
    assert breakdown.total == 4
    assert breakdown.bands == (("<10", 1), ("10-50", 2), (">50", 1))
    assert (breakdown.published_early, breakdown.published_recent) == (1, 2)
    with pytest.raises(ArgumentError):
        highly_cited_breakdown(corpus, edges=[10])


def test_repeated_labels_get_free_suffixes():
    records = (
        band("a", [2000, 2001, 2002, 2003, 2004], collab="X")
        + band("b", [1200, 1201, 1202, 1203, 1204], collab="X_2")
        + band("c", [600, 601, 602, 603, 604], collab="X")
        + band("d", [300, 301, 302, 303, 304], collab="X#2")
    )
    labels = [c.label for c in detect_clusters(Corpus(tuple(records)))]
    assert labels == ["X", "X_2", "X#3", "X#2"]
