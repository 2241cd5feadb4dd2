import json

import pytest

from entities.corpus import Corpus
from entities.record import PublicationRecord


def make_record(rid, year=2000, authors=1, citations=0, **extra):
    """Validated record built from wire-style keyword names."""
    data = {"id": rid, "year": year, "authors": authors, "citations": citations}
    data.update(extra)
    return PublicationRecord.model_validate(data)


def make_corpus(rows, year=2000):
    """Corpus from (authors, citations) pairs, ids r0, r1, ... in row order."""
    return Corpus(tuple(make_record(f"r{i}", year, a, c) for i, (a, c) in enumerate(rows)))


def jsonl_bytes(*objects):
    return "\n".join(json.dumps(o, ensure_ascii=False) for o in objects).encode("utf-8") + b"\n"


@pytest.fixture
def toy_corpus():
    """(authors, citations) = (1,0), (2,1), (3,2), (60,10), (2500,100), all published in 2000."""
    return make_corpus([(1, 0), (2, 1), (3, 2), (60, 10), (2500, 100)])


@pytest.fixture
def history_corpus():
    return Corpus((
        make_record("a", 2000, 3, 3, citations_by_year={"2001": 1, "2003": 2}),
        make_record("b", 2001, 5, 4, citations_by_year={"2001": 2, "2002": 2}),
        make_record("c", 2003, 800, 2, citations_by_year={"2004": 1, "2005": 1}),
    ), provenance="history")
