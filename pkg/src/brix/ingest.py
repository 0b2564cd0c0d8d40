"""Schema and dataset ingestion: parse, validate, normalize.

Input formats
-------------
Schema: a JSON array of indicator definitions with keys ``id``,
``display_name``, ``pillar``, ``direction`` ("higher" | "lower") and
optional ``min``/``max`` bounds. File order defines vector positions.

Data: UTF-8 CSV whose first header is ``country`` and whose remaining
headers are the schema ids in any order (columns are reordered to schema
order on load). Empty cells mean missing; decimal separator is ``.``.

Labels: CSV with headers ``country,label``; labels are high / mid / low.

Normalization maps each raw column into [0, 1] by min-max over declared
bounds when present, otherwise over the observed values, reflecting
lower-is-better indicators so that 1 is always best.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib.resources import files

import numpy as np

from .core import IndicatorVector

__all__ = [
    "ParseError",
    "IndicatorDef",
    "RawDataset",
    "parse_schema",
    "parse_data",
    "parse_labels",
    "normalize",
    "default_schema",
    "default_schema_bytes",
    "render_data_csv",
    "render_labels_csv",
]

VALID_LABELS = ("high", "mid", "low")


class ParseError(ValueError):
    """A schema, data, or labels document failed validation."""


@dataclass(frozen=True)
class IndicatorDef:
    """One indicator: position in file order defines its vector index."""

    id: str
    display_name: str
    pillar: str
    direction: str  # "higher" | "lower"
    bounds: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.direction not in ("higher", "lower"):
            raise ParseError(
                f"indicator {self.id!r}: direction must be 'higher' or 'lower', "
                f"got {self.direction!r}"
            )
        if self.bounds is not None and not self.bounds[0] < self.bounds[1]:
            raise ParseError(f"indicator {self.id!r}: bounds require min < max")


@dataclass(frozen=True)
class RawDataset:
    """Parsed but not yet normalized data: schema plus raw rows.

    Each row is (country name, raw cell list) with ``None`` for missing;
    every row has exactly one cell per schema indicator.
    """

    schema: list[IndicatorDef]
    rows: list[tuple[str, list[float | None]]]

    def __post_init__(self) -> None:
        n = len(self.schema)
        seen: set[str] = set()
        for name, cells in self.rows:
            if len(cells) != n:
                raise ParseError(f"row {name!r}: expected {n} cells, got {len(cells)}")
            if name in seen:
                raise ParseError(f"duplicate country {name!r}")
            seen.add(name)


def parse_schema(document: bytes) -> list[IndicatorDef]:
    """Parse a schema document into an ordered indicator list."""
    try:
        entries = json.loads(document.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"schema is not valid JSON: {exc}") from exc
    if not isinstance(entries, list):
        raise ParseError("schema document must be a JSON array")
    defs: list[IndicatorDef] = []
    seen: set[str] = set()
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ParseError(f"schema entry {pos}: expected an object")
        ind_id = entry.get("id")
        if not isinstance(ind_id, str) or not ind_id:
            raise ParseError(f"schema entry {pos}: missing or empty 'id'")
        if ind_id in seen:
            raise ParseError(f"duplicate indicator id {ind_id!r}")
        seen.add(ind_id)
        direction = entry.get("direction")
        if direction not in ("higher", "lower"):
            raise ParseError(
                f"indicator {ind_id!r}: direction must be 'higher' or 'lower', "
                f"got {direction!r}"
            )
        has_min, has_max = "min" in entry, "max" in entry
        if has_min != has_max:
            raise ParseError(f"indicator {ind_id!r}: bounds require both 'min' and 'max'")
        bounds = None
        if has_min:
            try:
                bounds = (float(entry["min"]), float(entry["max"]))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"indicator {ind_id!r}: non-numeric bounds") from exc
        defs.append(
            IndicatorDef(
                id=ind_id,
                display_name=str(entry.get("display_name", ind_id)),
                pillar=str(entry.get("pillar", "Custom")),
                direction=direction,
                bounds=bounds,
            )
        )
    return defs


def parse_data(document: bytes, schema: list[IndicatorDef]) -> RawDataset:
    """Parse a data CSV against a schema, reordering columns to schema order."""
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"data file is not valid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("data file is empty (no header row)") from None
    header = [h.strip() for h in header]
    if not header or header[0] != "country":
        raise ParseError("first data column header must be 'country'")
    ids = [d.id for d in schema]
    known = set(ids)
    positions: dict[str, int] = {}
    for col, name in enumerate(header[1:], start=1):
        if name not in known:
            raise ParseError(f"unknown column {name!r}")
        if name in positions:
            raise ParseError(f"duplicate column {name!r}")
        positions[name] = col
    missing_cols = [i for i in ids if i not in positions]
    if missing_cols:
        raise ParseError(f"data file lacks schema columns: {', '.join(missing_cols)}")

    rows: list[tuple[str, list[float | None]]] = []
    seen: set[str] = set()
    for lineno, record in enumerate(reader, start=2):
        if not record or (len(record) == 1 and not record[0].strip()):
            continue  # blank line
        if len(record) != len(header):
            raise ParseError(
                f"row {lineno}: expected {len(header)} cells, got {len(record)}"
            )
        name = record[0].strip()
        if not name:
            raise ParseError(f"row {lineno}: empty country name")
        if name in seen:
            raise ParseError(f"duplicate country {name!r} (row {lineno})")
        seen.add(name)
        cells: list[float | None] = []
        for ind_id in ids:
            raw = record[positions[ind_id]].strip()
            if raw == "":
                cells.append(None)
                continue
            try:
                cells.append(float(raw))
            except ValueError:
                raise ParseError(
                    f"row {lineno}, column {ind_id!r}: non-numeric value {raw!r}"
                ) from None
        rows.append((name, cells))
    return RawDataset(schema=schema, rows=rows)


def parse_labels(document: bytes) -> dict[str, str]:
    """Parse a labels CSV into a country -> label mapping."""
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"labels file is not valid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("labels file is empty (no header row)") from None
    if header != ["country", "label"]:
        raise ParseError("labels header must be exactly 'country,label'")
    labels: dict[str, str] = {}
    for lineno, record in enumerate(reader, start=2):
        if not record or (len(record) == 1 and not record[0].strip()):
            continue
        if len(record) != 2:
            raise ParseError(f"labels row {lineno}: expected 2 cells")
        name, label = record[0].strip(), record[1].strip().lower()
        if label not in VALID_LABELS:
            raise ParseError(
                f"labels row {lineno}: label must be one of {VALID_LABELS}, got {label!r}"
            )
        if name in labels:
            raise ParseError(f"duplicate labeled country {name!r} (row {lineno})")
        labels[name] = label
    return labels


def normalize(raw: RawDataset) -> list[tuple[str, IndicatorVector]]:
    """Normalize raw values into [0, 1] per indicator, preserving missingness.

    Bounds are the declared (min, max) when given, otherwise the observed
    min/max over present cells. Lower-is-better columns are reflected so 1
    is always the best value. Constant observed columns map to 1.0 (a
    non-discriminating indicator should not drag anyone away from the
    ideal). Values outside declared bounds are clipped.
    """
    n = len(raw.schema)
    matrix = np.full((len(raw.rows), n), np.nan)
    for i, (_, cells) in enumerate(raw.rows):
        for k, cell in enumerate(cells):
            if cell is not None:
                matrix[i, k] = cell
    present = ~np.isnan(matrix)

    normalized = np.full_like(matrix, np.nan)
    for k, ind in enumerate(raw.schema):
        col_present = present[:, k]
        if not col_present.any():
            continue
        col = matrix[col_present, k]
        if ind.bounds is not None:
            lo, hi = ind.bounds
        else:
            lo, hi = float(col.min()), float(col.max())
        if lo == hi:
            scaled = np.ones_like(col)
        elif ind.direction == "higher":
            scaled = (col - lo) / (hi - lo)
        else:
            scaled = (hi - col) / (hi - lo)
        normalized[col_present, k] = np.clip(scaled, 0.0, 1.0)

    return [
        (name, IndicatorVector(normalized[i], present[i]))
        for i, (name, _) in enumerate(raw.rows)
    ]


def default_schema_bytes() -> bytes:
    """Raw bytes of the packaged default indicator schema."""
    return files(__package__).joinpath("data/default_schema.json").read_bytes()


def default_schema() -> list[IndicatorDef]:
    """The packaged default indicator catalog."""
    return parse_schema(default_schema_bytes())


def _format_cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def render_data_csv(raw: RawDataset) -> str:
    """Serialize a raw dataset to the CSV format :func:`parse_data` reads."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country"] + [d.id for d in raw.schema])
    for name, cells in raw.rows:
        writer.writerow([name] + [_format_cell(c) for c in cells])
    return out.getvalue()


def render_labels_csv(labels: dict[str, str]) -> str:
    """Serialize labels to the CSV format :func:`parse_labels` reads."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country", "label"])
    for name, label in labels.items():
        writer.writerow([name, label])
    return out.getvalue()
