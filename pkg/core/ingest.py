"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Record file ingestion: parse -> validate -> deduplicate -> slice by period.
- A bad line never aborts parsing; it becomes exactly one RecordError with its
  line number. Only an unreadable stream raises (IngestError).
- Formats: jsonl (one object per line) and csv (RFC-4180, comma, fixed header).
  Encoding is always UTF-8.
"""

import csv
import io
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pydantic import ValidationError

from config.config import INGEST
from core.errors import ArgumentError, IngestError
from entities.corpus import Corpus
from entities.record import (
    ErrorReason,
    PublicationRecord,
    RecordError,
    Severity,
    classify_validation_error,
)

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "csv")
DEDUP_POLICIES = ("keep-first", "reject")
CSV_HEADER = INGEST["csv_header"]
_INT_TEXT = re.compile(r"^[+-]?\d+$")


# ------------------------------------------------------------------
# Reading
# ------------------------------------------------------------------

def _read_text(stream):
    """Accept bytes, a binary stream or a path; always decode as strict UTF-8."""
    try:
        if isinstance(stream, (bytes, bytearray)):
            raw = bytes(stream)
        elif isinstance(stream, (str, Path)):
            raw = Path(stream).read_bytes()
        else:
            raw = stream.read()
    except OSError as exc:
        raise IngestError(f"cannot read record stream: {exc}") from exc
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode(INGEST["encoding"])
    except UnicodeDecodeError as exc:
        raise IngestError(f"record stream is not valid UTF-8 (byte {exc.start})") from exc


def _validate(data, line_number, source):
    """Validate one decoded mapping -> (record or None, [RecordError])."""
    record_id = data.get("id") if isinstance(data.get("id"), str) else None
    try:
        record = PublicationRecord.model_validate(data)
    except ValidationError as exc:
        return None, [classify_validation_error(exc, line_number, record_id, source)]

    errors = []
    early = record.early_citation_years()
    if early:
        errors.append(RecordError(
            line_number=line_number,
            reason=ErrorReason.RANGE_VIOLATION,
            detail=f"citation years {early} precede publication year {record.year}",
            severity=Severity.WARNING,
            record_id=record.id,
            source=source,
        ))
    return record, errors


def _parse_jsonl_line(text, line_number, source):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [RecordError(line_number, ErrorReason.BAD_TYPE, f"invalid JSON: {exc.msg}", source=source)]
    if not isinstance(data, dict):
        return None, [RecordError(line_number, ErrorReason.BAD_TYPE, "line is not a JSON object", source=source)]
    return _validate(data, line_number, source)


def _parse_jsonl_chunk(lines, first_line, source):
    """Parse consecutive jsonl lines; returns [(record, line_number)], [RecordError]."""
    located, errors = [], []
    for offset, text in enumerate(lines):
        if not text.strip():
            continue
        line_number = first_line + offset
        record, line_errors = _parse_jsonl_line(text, line_number, source)
        if record is not None:
            located.append((record, line_number))
        errors.extend(line_errors)
    return located, errors


def _csv_value(value):
    value = value.strip()
    if _INT_TEXT.match(value):
        return int(value)
    return value


def _parse_csv(text, source):
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("csv stream has no header row") from None
    except csv.Error as exc:
        raise IngestError(f"unreadable csv header: {exc}") from exc
    if [h.strip() for h in header] != CSV_HEADER:
        raise IngestError(f"csv header must be {','.join(CSV_HEADER)!r}, got {','.join(header)!r}")

    located, errors = [], []
    last_line = reader.line_num
    while True:
        start = last_line + 1
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            errors.append(RecordError(start, ErrorReason.BAD_TYPE, f"malformed csv row: {exc}", source=source))
            last_line = reader.line_num
            continue
        last_line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(CSV_HEADER):
            reason = ErrorReason.MISSING_FIELD if len(row) < len(CSV_HEADER) else ErrorReason.BAD_TYPE
            errors.append(RecordError(
                start, reason, f"expected {len(CSV_HEADER)} columns, got {len(row)}", source=source,
            ))
            continue

        data = {}
        for key, cell in zip(CSV_HEADER, row):
            if not cell.strip():
                continue  # empty cell == absent field
            data[key] = cell if key in ("id", "title", "collab") else _csv_value(cell)
        record, line_errors = _validate(data, start, source)
        if record is not None:
            located.append((record, start))
        errors.extend(line_errors)
    return located, errors


def _parse_located(stream, fmt, source=None, workers=1):
    if fmt not in FORMATS:
        raise ArgumentError(f"unknown record format {fmt!r}; expected one of {FORMATS}")
    text = _read_text(stream)

    if fmt == "csv":
        located, errors = _parse_csv(text, source)
    else:
        lines = text.split("\n")  # U+2028 is legal inside JSON strings
        size = INGEST["chunk_lines"]
        starts = list(range(0, len(lines), size)) or [0]
        chunks = [lines[s:s + size] for s in starts]
        firsts = [s + 1 for s in starts]
        sources = [source] * len(chunks)
        if workers > 1 and len(chunks) > 1:
            # map() keeps chunk order, so the merge equals sequential parsing
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_parse_jsonl_chunk, chunks, firsts, sources))
        else:
            parts = [_parse_jsonl_chunk(c, f, s) for c, f, s in zip(chunks, firsts, sources)]
        located = [item for part_located, _ in parts for item in part_located]
        errors = [err for _, part_errors in parts for err in part_errors]

    logger.info(
        "Parsed %s (%s): %d records, %d errors, %d warnings",
        source or "stream", fmt, len(located),
        sum(e.severity is Severity.ERROR for e in errors),
        sum(e.severity is Severity.WARNING for e in errors),
    )
    return located, errors


def parse_records(stream, fmt="jsonl", source=None, workers=1):
    """
    Parse a complete record file.

    Returns (records, errors): one record per well-formed line, one RecordError
    per malformed line (plus WARNING entries for kept records with citation
    years before publication). Raises IngestError if the stream is unreadable.
    `workers > 1` parses jsonl chunks in parallel with an identical result.
    """
    located, errors = _parse_located(stream, fmt, source, workers)
    return [record for record, _ in located], errors


# ------------------------------------------------------------------
# Corpus construction
# ------------------------------------------------------------------

def build_corpus(records, dedup_policy="keep-first", provenance="", locations=None):
    """
    Deduplicate records by id and freeze them into a Corpus.

    keep-first keeps the earliest occurrence and reports every later copy;
    reject drops every copy of a duplicated id and reports each of them.
    `locations` optionally gives (source, line_number) per record for error
    reporting; otherwise the 1-based position in `records` is used.
    """
    if dedup_policy not in DEDUP_POLICIES:
        raise ArgumentError(f"unknown dedup policy {dedup_policy!r}; expected one of {DEDUP_POLICIES}")
    records = list(records)
    if locations is None:
        locations = [(None, i + 1) for i in range(len(records))]

    occurrences = {}
    for index, record in enumerate(records):
        occurrences.setdefault(record.id, []).append(index)

    kept, errors = [], []
    for record_id, indices in occurrences.items():
        if len(indices) == 1:
            kept.append(records[indices[0]])
            continue
        if dedup_policy == "keep-first":
            kept.append(records[indices[0]])
            reported = indices[1:]
        else:
            reported = indices
        first_source, first_line = locations[indices[0]]
        for index in reported:
            source, line = locations[index]
            errors.append(RecordError(
                line_number=line,
                reason=ErrorReason.DUPLICATE_ID,
                detail=f"id {record_id!r} first seen at {first_source or 'line'} {first_line}",
                record_id=record_id,
                source=source,
            ))

    if errors:
        logger.warning("Dropped %d duplicate record(s) under policy %s", len(errors), dedup_policy)
    corpus = Corpus(tuple(kept), provenance)
    logger.info("Built %s", corpus)
    return corpus, errors


def load_corpus(paths, fmt="jsonl", dedup_policy="keep-first", workers=1):
    """Parse every path in order and build one corpus -> (Corpus, [RecordError])."""
    located, errors = [], []
    for path in paths:
        part, part_errors = _parse_located(path, fmt, source=str(path), workers=workers)
        located.extend((record, (str(path), line)) for record, line in part)
        errors.extend(part_errors)
    corpus, dup_errors = build_corpus(
        [record for record, _ in located],
        dedup_policy=dedup_policy,
        provenance=",".join(str(p) for p in paths),
        locations=[loc for _, loc in located],
    )
    return corpus, errors + dup_errors


def filter_period(corpus, year_min, year_max):
    """Records with year_min <= year <= year_max (both ends inclusive)."""
    if year_min > year_max:
        raise ArgumentError(f"empty period: {year_min} > {year_max}")
    return corpus.select(
        lambda r: year_min <= r.year <= year_max,
        provenance=f"{corpus.provenance}[{year_min}-{year_max}]",
    )


# ------------------------------------------------------------------
# Writing
# ------------------------------------------------------------------

def write_records(records, stream, fmt="jsonl"):
    """
    Serialize records to a text stream (open it with newline="").
    csv cannot carry citations_by_year or affiliations; they are dropped with a warning.
    """
    if fmt not in FORMATS:
        raise ArgumentError(f"unknown record format {fmt!r}; expected one of {FORMATS}")
    if fmt == "jsonl":
        for record in records:
            stream.write(json.dumps(record.to_dict(), ensure_ascii=False, separators=(",", ":")))
            stream.write("\n")
        return

    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    lossy = 0
    for record in records:
        if record.citations_by_year is not None or record.affiliations is not None:
            lossy += 1
        writer.writerow([
            record.id, record.year, record.author_count, record.citation_total,
            record.collab_label or "", record.title or "",
        ])
    if lossy:
        logger.warning("csv output dropped citation history/affiliations of %d record(s)", lossy)


def dump_records(records, path, fmt="jsonl"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding=INGEST["encoding"], newline="") as f:
        write_records(records, f, fmt)
    logger.info("Wrote %s", path)
    return path
