"""Ingestion of real-world ground truth: occupation gender composition,
census name frequencies, and the two built-in scatter datasets.

The CSV schemas are the only ingestion format; fetching and reshaping the
upstream government sources is the caller's job. The built-in scatter
datasets (gender-association strength against workforce or census
percentage, 50 points each) ship with the package and need no embedding.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, UsageError

FIGURE_IDS = ("fig1_occupations", "fig2_names")

_FIGURE_FILES = {
    "fig1_occupations": "fig1_occupations.csv",
    "fig2_names": "fig2_names.csv",
}


@dataclass(frozen=True)
class OccupationRecord:
    raw_name: str
    pct_women: float
    workers: int | None = None


@dataclass(frozen=True)
class NameRecord:
    name: str
    pct_women: float
    popularity: int


@dataclass(frozen=True)
class FigurePoint:
    x: float  # percentage, 0..100
    y: float  # association strength


def _open_csv(source):
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), True
    return source, False


def _parse_pct(text: str, line: int, column: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    if not 0.0 <= value <= 100.0:
        raise ParseError(f"line {line}: {column} {value} outside [0, 100]")
    return value


def load_occupations_csv(source) -> tuple[list[OccupationRecord], int]:
    """Load occupation records from a headered CSV.

    Mandatory columns ``occupation`` and ``pct_women``; optional ``workers``.
    Rows whose pct_women is empty or non-numeric are dropped and counted
    (the upstream labor data has gaps); a parseable value outside [0, 100]
    is a hard error. Returns (records, rows_dropped).
    """
    fh, close_after = _open_csv(source)
    try:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("empty CSV")
        for column in ("occupation", "pct_women"):
            if column not in reader.fieldnames:
                raise ParseError(f"missing mandatory column {column!r}")
        has_workers = "workers" in reader.fieldnames
        records: list[OccupationRecord] = []
        dropped = 0
        for row in reader:
            line = reader.line_num
            name = (row.get("occupation") or "").strip()
            if not name:
                raise ParseError(f"line {line}: empty occupation name")
            pct = _parse_pct(row.get("pct_women") or "", line, "pct_women")
            if pct is None:
                dropped += 1
                continue
            workers = None
            if has_workers:
                raw = (row.get("workers") or "").strip().replace(",", "")
                if raw:
                    try:
                        workers = int(raw)
                    except ValueError:
                        workers = None
            records.append(OccupationRecord(name, pct, workers))
        return records, dropped
    finally:
        if close_after:
            fh.close()


@dataclass(frozen=True)
class OccupationMapping:
    """Reduction table from raw occupation names to single tokens.

    ``exact`` maps a full raw name to a token; ``heads`` is the allowlist of
    single words acceptable as the trailing head-word of a multi-word name
    (for example "chemical engineer" reduces to "engineer" when "engineer"
    is allowlisted).
    """

    exact: Mapping[str, str]
    heads: frozenset[str]

    @classmethod
    def from_json(cls, source) -> "OccupationMapping":
        if isinstance(source, (str, Path)):
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        else:
            doc = json.load(source)
        if not isinstance(doc, dict):
            raise ParseError("mapping document must be a JSON object")
        exact = doc.get("exact", {})
        heads = doc.get("heads", [])
        if not isinstance(exact, dict) or not isinstance(heads, list):
            raise ParseError("mapping needs 'exact' (object) and 'heads' (list)")
        return cls(exact=dict(exact), heads=frozenset(heads))


def builtin_occupation_mapping() -> OccupationMapping:
    """The shipped mapping: the 50 reference occupation words as heads."""
    with (files("embias") / "data" / "occupation_heads.json").open("rb") as fh:
        return OccupationMapping.from_json(fh)


def reduce_occupation(raw_name: str, mapping: OccupationMapping) -> str | None:
    """Reduce a possibly multi-word occupation name to a single token.

    Exact-name entries win; otherwise the final whitespace-delimited word is
    accepted if (lowercased) it is on the head-word allowlist. Returns None
    when the name cannot be reduced. Idempotent on already-reduced tokens.
    """
    name = raw_name.strip()
    if name in mapping.exact:
        return mapping.exact[name]
    head = name.split()[-1].lower() if name else ""
    if head in mapping.heads:
        return head
    return None


def occupation_properties(
    records: Iterable[OccupationRecord], mapping: OccupationMapping
) -> tuple[dict[str, float], list[str]]:
    """Reduce raw records to token -> pct_women, plus unmappable names.

    Rows reducing to one token are merged: worker-weighted mean when every
    merged row carries a worker count, unweighted mean otherwise.
    """
    groups: dict[str, list[OccupationRecord]] = {}
    unmapped: list[str] = []
    for record in records:
        token = reduce_occupation(record.raw_name, mapping)
        if token is None:
            unmapped.append(record.raw_name)
        else:
            groups.setdefault(token, []).append(record)
    properties: dict[str, float] = {}
    for token, group in groups.items():
        weight = sum(r.workers for r in group if r.workers is not None)
        if weight > 0 and all(r.workers is not None for r in group):
            properties[token] = sum(r.pct_women * r.workers for r in group) / weight
        else:
            properties[token] = sum(r.pct_women for r in group) / len(group)
    return properties, unmapped


def load_census_names_csv(source) -> tuple[list[NameRecord], int]:
    """Load name records from a headered CSV with columns ``name``,
    ``pct_women``, ``popularity``. Rows missing a usable pct_women or
    popularity are dropped and counted."""
    fh, close_after = _open_csv(source)
    try:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("empty CSV")
        for column in ("name", "pct_women", "popularity"):
            if column not in reader.fieldnames:
                raise ParseError(f"missing mandatory column {column!r}")
        records: list[NameRecord] = []
        dropped = 0
        for row in reader:
            line = reader.line_num
            name = (row.get("name") or "").strip()
            if not name:
                raise ParseError(f"line {line}: empty name")
            pct = _parse_pct(row.get("pct_women") or "", line, "pct_women")
            raw_pop = (row.get("popularity") or "").strip().replace(",", "")
            try:
                popularity = int(raw_pop)
            except ValueError:
                popularity = None
            if pct is None or popularity is None:
                dropped += 1
                continue
            records.append(NameRecord(name, pct, popularity))
        return records, dropped
    finally:
        if close_after:
            fh.close()


def select_androgynous(
    records: Sequence[NameRecord],
    window: float = 10.0,
    per_window: int = 5,
) -> tuple[list[NameRecord], list[int]]:
    """Pick the most popular names within each gender-frequency window.

    Records are bucketed by pct_women into half-open windows [0, w),
    [w, 2w), ... with the top window closed at 100. Within each window the
    ``per_window`` highest-popularity names win, popularity ties going to
    the lexicographically smaller name. Returns (selected in window order,
    indices of empty windows).
    """
    if not 0.0 < window <= 100.0:
        raise UsageError("window must be in (0, 100]")
    if per_window < 1:
        raise UsageError("per_window must be >= 1")
    n_windows = math.ceil(100.0 / window)
    buckets: list[list[NameRecord]] = [[] for _ in range(n_windows)]
    for record in records:
        index = min(int(record.pct_women // window), n_windows - 1)
        buckets[index].append(record)
    selected: list[NameRecord] = []
    skipped: list[int] = []
    for index, bucket in enumerate(buckets):
        if not bucket:
            skipped.append(index)
            continue
        bucket.sort(key=lambda r: (-r.popularity, r.name))
        selected.extend(bucket[:per_window])
    return selected, skipped


def _figure_rows(figure_id: str) -> list[tuple[str, str]]:
    if figure_id not in _FIGURE_FILES:
        raise UsageError(
            f"unknown figure id {figure_id!r}; valid: {', '.join(FIGURE_IDS)}"
        )
    path = files("embias") / "data" / _FIGURE_FILES[figure_id]
    with path.open("r", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [(row["x"], row["y"]) for row in reader]


def builtin_figure_data(figure_id: str) -> list[FigurePoint]:
    """The shipped 50-point scatter dataset for a figure id."""
    return [FigurePoint(float(x), float(y)) for x, y in _figure_rows(figure_id)]


def write_figure_csv(figure_id: str, dest) -> None:
    """Export a built-in figure dataset as a CSV with columns x, y.

    Coordinates are written exactly as shipped, not reformatted.
    """
    rows = _figure_rows(figure_id)
    close_after = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "w", encoding="utf-8", newline="")
        close_after = True
    else:
        fh = dest
    try:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        writer.writerows(rows)
    finally:
        if close_after:
            fh.close()
