import json
import random

import pytest

from applications.MainApplication import main
from conftest import jsonl_bytes

TOY = [
    {"id": "t1", "year": 2000, "authors": 1, "citations": 0},
    {"id": "t2", "year": 2000, "authors": 2, "citations": 1},
    {"id": "t3", "year": 2000, "authors": 3, "citations": 2},
    {"id": "t4", "year": 2000, "authors": 60, "citations": 10},
    {"id": "t5", "year": 2000, "authors": 2500, "citations": 100},
]


def data_lines(path):
    return [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.jsonl"
    path.write_bytes(jsonl_bytes(*TOY))
    return path


@pytest.fixture
def history_file(tmp_path):
    path = tmp_path / "history.jsonl"
    path.write_bytes(jsonl_bytes(
        {"id": "a", "year": 1889, "authors": 1, "citations": 3, "citations_by_year": {"1890": 1, "1895": 2}},
        {"id": "b", "year": 1990, "authors": 4, "citations": 2, "citations_by_year": {"1991": 2}},
        {"id": "c", "year": 1991, "authors": 700, "citations": 40, "citations_by_year": {"1992": 40}},
        {"id": "d", "year": 2020, "authors": 2, "citations": 0, "citations_by_year": {}},
    ))
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_sensitivity_toy_rows(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("sensitivity", "--input", toy_file, "--thresholds", "50", "--out", out, "-q") == 0
    lines = data_lines(out / "sensitivity_exceeds.tsv")
    assert lines[0].split("\t")[:5] == ["n", "pubs", "pub_share", "cites", "cite_share"]
    assert lines[1] == "all\t5\t100.00\t113\t100.00\t5\t513.20\t3.0\t0.2000\t2500\t22.60\t2.0\t100\t0.2000\t2\t5.00\t113.00\tNA"
    assert lines[2] == "50\t2\t40.00\t110\t97.35\t2\t1280.00\t1280.0\t0.0000\t2500\t55.00\t55.0\t100\t0.0000\t2\t2.00\t110.00\tNA"


def test_sensitivity_default_thresholds(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("sensitivity", "--input", toy_file, "--out", out, "-q") == 0
    rows = data_lines(out / "sensitivity_exceeds.tsv")[2:]
    assert [r.split("\t")[0] for r in rows] == ["50", "300", "500", "1000", "2000"]
    assert rows[-1].split("\t")[1:5] == ["1", "20.00", "100", "88.50"]


def test_sensitivity_at_most(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("sensitivity", "--input", toy_file, "--mode", "at_most", "--thresholds", "50,2500",
               "--out", out, "-q") == 0
    lines = data_lines(out / "sensitivity_at_most.tsv")
    assert lines[0].split("\t")[5] == "excluded_share"
    rows = [line.split("\t") for line in lines[1:]]
    assert rows[1][:6] == ["50", "3", "60.00", "3", "2.65", "40"]
    # at_most the largest team equals the baseline
    assert rows[2][6:] == rows[0][6:]
    assert rows[2][5] == "0"


def test_summary_periods(history_file, tmp_path):
    out = tmp_path / "out"
    assert run("summary", "--input", history_file, "--period", "1889-1990", "--period", "1991-2020",
               "--out", out, "-q") == 0
    early = dict(line.split("\t") for line in data_lines(out / "summary_1889_1990.tsv")[1:])
    late = dict(line.split("\t") for line in data_lines(out / "summary_1991_2020.tsv")[1:])
    assert early["pubs"] == "2"
    assert late["pubs"] == "2"
    assert late["max_authors"] == "700"
    assert late["analysis_span_years"] == "30"


def test_summary_without_period_uses_corpus_span(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("summary", "--input", toy_file, "--out", out, "-q") == 0
    assert (out / "summary_2000_2000.tsv").exists()


def test_empty_input_fails(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_bytes(b"")
    assert run("summary", "--input", empty, "--out", tmp_path / "out", "-q") == 1


def test_missing_input_flag_fails(tmp_path):
    assert run("dist", "--out", tmp_path / "out", "-q") == 1


def test_usage_error_exits_2(toy_file):
    with pytest.raises(SystemExit) as info:
        main(["sensitivity", "--input", str(toy_file), "--thresholds", "fifty"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["plot"])


def test_dist_sums_to_one(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("dist", "--input", toy_file, "--out", out, "-q") == 0
    rows = [line.split("\t") for line in data_lines(out / "dist.tsv")[1:]]
    assert [r[0] for r in rows] == ["1", "2", "3", "60", "2500"]
    assert abs(sum(float(r[1]) for r in rows) - 1.0) <= 1e-12


def test_citedist(toy_file, tmp_path):
    out = tmp_path / "out"
    assert run("citedist", "--input", toy_file, "--hyper-threshold", "1000", "--out", out, "-q") == 0
    lines = data_lines(out / "citedist.tsv")
    assert lines[0] == "citations\tpublications\tshare_authors>1000"
    assert lines[-1] == "100\t1\t1.0"


def test_validate_and_strict(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_bytes(jsonl_bytes(TOY[0], {"id": "x", "year": 2000}) + b"{oops\n")
    out = tmp_path / "out"
    assert run("validate", "--input", path, "--out", out, "-q") == 0
    rows = data_lines(out / "errors.tsv")
    assert rows[0] == "source\tline\tseverity\treason\tid\tdetail"
    assert [r.split("\t")[1:4] for r in rows[1:]] == [
        ["2", "error", "missing-field"],
        ["3", "error", "bad-type"],
    ]
    assert run("validate", "--input", path, "--out", out, "--strict", "-q") == 1
    assert run("dist", "--input", path, "--out", out, "--strict", "-q") == 1
    assert run("dist", "--input", path, "--out", out, "-q") == 0


def test_dynamics_requires_history(toy_file, tmp_path):
    assert run("dynamics", "--input", toy_file, "--out", tmp_path / "out", "-q") == 1


def test_dynamics(history_file, tmp_path):
    out = tmp_path / "out"
    assert run("dynamics", "--input", history_file, "--out", out, "-q") == 0
    rows = [line.split("\t") for line in data_lines(out / "dynamics.tsv")]
    assert rows[0] == ["year", "corpus"]
    values = [int(v) for _, v in rows[1:]]
    assert values == sorted(values)
    assert rows[-1] == ["2020", "2"]


def test_synth_then_detect(tmp_path):
    out = tmp_path / "synth"
    assert run("synth", "--preset", "table2-ukraine", "--natural", "500", "--seed", "9", "--out", out, "-q") == 0
    truth = [json.loads(line) for line in (out / "ground_truth.jsonl").read_text().splitlines()]
    assert len(truth) == 500 + 140

    detected = tmp_path / "detect"
    assert run("detect", "--input", out / "corpus.jsonl", "--out", detected, "-q") == 0
    clusters = [line.split("\t") for line in data_lines(detected / "clusters.tsv")[1:]]
    assert [c[0] for c in clusters] == ["CMS", "ALICE", "LHCb"]
    assert [int(c[1]) for c in clusters] == [60, 40, 40]
    assert (detected / "cluster_CMS_yearly.tsv").exists()


def test_synth_needs_known_preset(tmp_path):
    assert run("synth", "--out", tmp_path, "-q") == 1
    assert run("synth", "--preset", "nope", "--out", tmp_path, "-q") == 1


def test_yearly_profile_topcited(history_file, tmp_path):
    out = tmp_path / "out"
    assert run("yearly", "--input", history_file, "--out", out, "-q") == 0
    counts = data_lines(out / "yearly_counts.tsv")
    assert counts[0] == "year\tauthors<=50\tauthors>50"
    assert len(counts) == 1 + (2020 - 1889 + 1)

    assert run("profile", "--input", history_file, "--name", "lab", "--out", out, "-q") == 0
    profile = data_lines(out / "profile.tsv")
    assert profile[1] == "lab\t4\t1889\t2020\t25\t25\t2"

    assert run("topcited", "--input", history_file, "--limit", "2", "--min-citations", "3", "--out", out, "-q") == 0
    top = data_lines(out / "topcited.tsv")
    assert [line.split("\t")[0] for line in top[1:]] == ["c", "a"]
    bands = dict(line.split("\t") for line in data_lines(out / "topcited_bands.tsv")[1:])
    assert bands == {"<10": "1", "10-50": "0", ">50": "1", "total": "2",
                     "published_early": "1", "published_recent": "0"}


@pytest.mark.parametrize("argv", [
    ["summary", "--citation-cutoff", "2000"],
    ["sensitivity", "--thresholds", "1,50,1000"],
    ["sensitivity", "--mode", "at_most", "--exclusion-decimals", "1"],
    ["dist"],
    ["citedist"],
    ["detect", "--min-members", "1"],
    ["dynamics", "--per-cluster", "--min-members", "1"],
    ["yearly"],
    ["profile"],
    ["topcited"],
    ["validate"],
])
def test_reruns_are_byte_identical(history_file, tmp_path, argv):
    first, second = tmp_path / "first", tmp_path / "second"
    assert run(*argv, "--input", history_file, "--out", first, "-q") == 0
    assert run(*argv, "--input", history_file, "--out", second, "--workers", "2", "-q") == 0
    names = sorted(p.name for p in first.iterdir())
    assert names
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_synth_rerun_is_byte_identical(tmp_path):
    for target, workers in (("first", "1"), ("second", "3")):
        assert run("synth", "--preset", "fig4-tail", "--natural", "3000", "--workers", workers,
                   "--out", tmp_path / target, "-q") == 0
    for name in ("corpus.jsonl", "ground_truth.jsonl", "synth.tsv"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def without_inputs_line(path):
    return [line for line in path.read_bytes().split(b"\n") if not line.startswith(b"# inputs=")]


@pytest.mark.parametrize("argv", [
    ["summary", "--period", "1991-2019"],
    ["sensitivity"],
    ["sensitivity", "--mode", "at_most"],
    ["dist"],
    ["citedist"],
    ["detect"],
    ["dynamics", "--per-cluster"],
    ["yearly"],
    ["topcited", "--min-citations", "50"],
])
def test_shuffled_input_gives_identical_reports(tmp_path, argv):
    synth = tmp_path / "synth"
    assert run("synth", "--preset", "table2-ukraine", "--natural", "400", "--seed", "5", "--out", synth, "-q") == 0
    lines = (synth / "corpus.jsonl").read_text(encoding="utf-8").splitlines()
    random.Random(11).shuffle(lines)
    shuffled = tmp_path / "shuffled.jsonl"
    shuffled.write_text("\n".join(lines) + "\n", encoding="utf-8")

    ordered_out, shuffled_out = tmp_path / "ordered", tmp_path / "reordered"
    assert run(*argv, "--input", synth / "corpus.jsonl", "--out", ordered_out, "-q") == 0
    assert run(*argv, "--input", shuffled, "--out", shuffled_out, "-q") == 0
    names = sorted(p.name for p in ordered_out.iterdir())
    assert names == sorted(p.name for p in shuffled_out.iterdir())
    for name in names:
        assert without_inputs_line(ordered_out / name) == without_inputs_line(shuffled_out / name)


def test_cluster_files_do_not_collide(tmp_path):
    def band(prefix, start, label):
        return [{"id": f"{prefix}{i}", "year": 2015, "authors": start + i, "citations": 1, "collab": label}
                for i in range(5)]

    path = tmp_path / "bands.jsonl"
    path.write_bytes(jsonl_bytes(
        *band("a", 2000, "X"), *band("b", 1200, "X_2"), *band("c", 600, "X"), *band("d", 300, "A/B"),
    ))
    out = tmp_path / "out"
    assert run("detect", "--input", path, "--out", out, "-q") == 0
    labels = [line.split("\t")[0] for line in data_lines(out / "clusters.tsv")[1:]]
    assert labels == ["X", "X_2", "X#2", "A/B"]
    assert sorted(p.name for p in out.glob("cluster_*_yearly.tsv")) == [
        "cluster_A%2FB_yearly.tsv", "cluster_X%232_yearly.tsv", "cluster_X_2_yearly.tsv", "cluster_X_yearly.tsv",
    ]
    yearly = data_lines(out / "cluster_X_2_yearly.tsv")
    assert yearly[0] == "year\tX_2"
