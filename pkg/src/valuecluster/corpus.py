"""Ingestion of one data field's values into a deduplicated, counted corpus.

Everything downstream (abstraction, distances, clustering) works on a
:class:`ValueCorpus`, so the rest of the pipeline is independent of where
the values came from.  Values are preserved byte-for-byte after decoding;
normalization is the abstraction module's job, never the ingester's.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError

__all__ = ["IngestOptions", "ValueCorpus", "ingest_lines", "ingest_csv_column", "corpus_from_values"]


@dataclass(frozen=True)
class IngestOptions:
    """Ingestion knobs.

    ``skip_empty`` of None takes the operation's default: empty lines are
    kept as empty-string values, empty CSV cells are skipped.
    """

    encoding: str = "utf-8"
    skip_empty: bool | None = None
    trim_trailing_newline: bool = True


@dataclass(frozen=True)
class ValueCorpus:
    """Distinct values of one field with their occurrence counts.

    Entries are ordered by descending count, ties by codepoint order, so
    downstream indices are stable across runs.
    """

    entries: tuple[tuple[str, int], ...]
    source_label: str
    total_occurrences: int = field(default=0)

    def __post_init__(self):
        values = [v for v, _ in self.entries]
        if len(set(values)) != len(values):
            raise ValueError("corpus entries contain duplicate values")
        if any(c < 1 for _, c in self.entries):
            raise ValueError("corpus counts must be >= 1")
        total = sum(c for _, c in self.entries)
        if self.total_occurrences == 0:
            object.__setattr__(self, "total_occurrences", total)
        elif self.total_occurrences != total:
            raise ValueError("total_occurrences does not match entry counts")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def values(self) -> list[str]:
        return [v for v, _ in self.entries]

    def count_of(self, value: str) -> int:
        for v, c in self.entries:
            if v == value:
                return c
        raise KeyError(value)


def _sorted_entries(counts: Counter) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(counts.items(), key=lambda vc: (-vc[1], vc[0])))


def corpus_from_values(values, source_label: str = "<memory>") -> ValueCorpus:
    """Build a corpus from an in-memory iterable of value occurrences."""
    counts = Counter(values)
    return ValueCorpus(entries=_sorted_entries(counts), source_label=source_label)


def _read_text(path, options: IngestOptions) -> str:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise IngestError(f"cannot read {p}: {exc.strerror or exc}") from exc
    try:
        return data.decode(options.encoding)
    except UnicodeDecodeError as exc:
        raise IngestError(
            f"cannot decode {p} as {options.encoding}: invalid byte at offset {exc.start}"
        ) from exc


def ingest_lines(path, options: IngestOptions | None = None) -> ValueCorpus:
    """Ingest a newline-delimited text file, one value per line.

    Only the line terminator is stripped; interior whitespace is part of the
    value and preserved.
    """
    options = options or IngestOptions()
    text = _read_text(path, options)
    if options.trim_trailing_newline and text.endswith("\n"):
        text = text[:-1]
    if text == "":
        return ValueCorpus(entries=(), source_label=str(path))
    lines = text.split("\n")
    if options.trim_trailing_newline:
        lines = [ln[:-1] if ln.endswith("\r") else ln for ln in lines]
    skip_empty = bool(options.skip_empty)  # lines keep empty values by default
    counts = Counter(ln for ln in lines if not (skip_empty and ln == ""))
    return ValueCorpus(entries=_sorted_entries(counts), source_label=str(path))


def ingest_csv_column(path, column, options: IngestOptions | None = None) -> ValueCorpus:
    """Ingest one column of an RFC-4180-style CSV file with a header row.

    ``column`` is a header name or 0-based index.  Empty cells are skipped
    unless ``options.skip_empty`` is False, in which case they count under
    the empty-string value.
    """
    options = options or IngestOptions()
    text = _read_text(path, options)
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(f"{path}: empty CSV, no header row") from None

    if isinstance(column, int) or (isinstance(column, str) and column.lstrip("-").isdigit()):
        idx = int(column)
        if not 0 <= idx < len(header):
            raise IngestError(
                f"{path}: column index {idx} out of range, valid range is 0..{len(header) - 1}"
            )
    else:
        try:
            idx = header.index(column)
        except ValueError:
            raise IngestError(
                f"{path}: no column named {column!r}, header has {header}"
            ) from None

    skip_empty = options.skip_empty is None or options.skip_empty
    counts: Counter = Counter()
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if idx >= len(row):
            raise IngestError(f"{path}: row {row_no} has {len(row)} cells, expected > {idx}")
        cell = row[idx]
        if cell == "" and skip_empty:
            continue
        counts[cell] += 1

    label = f"{path}#{header[idx]}"
    return ValueCorpus(entries=_sorted_entries(counts), source_label=label)
