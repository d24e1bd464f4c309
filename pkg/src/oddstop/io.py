"""File formats: probability CSVs, intensity JSON documents, two-line CSVs."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .bandit import TwoLineInstance
from .errors import ValidationError
from .odds_engine import IntensityFunction, OddsProblem


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        try:
            return Path(source).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {source}: {exc}") from exc
    return source.read()


def parse_probability_csv(text: str) -> list[float]:
    """One probability per line, in index order; an optional ``p`` header line."""
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not values and line.lower() == "p":
            continue
        try:
            v = float(line)
        except ValueError:
            raise ValidationError(f"line {lineno}: {line!r} is not a number") from None
        if not 0.0 <= v < 1.0:
            raise ValidationError(f"line {lineno}: probability {line} is outside [0, 1)")
        values.append(v)
    if not values:
        raise ValidationError("no probabilities found")
    return values


def read_odds_problem(source) -> OddsProblem:
    return OddsProblem(tuple(parse_probability_csv(_read_text(source))))


def read_intensity(source) -> IntensityFunction:
    text = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed intensity JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("intensity JSON must be an object")
    return IntensityFunction.from_dict(doc)


def read_two_line_csv(source) -> TwoLineInstance:
    """CSV with columns ``p1,p2`` (header required)."""
    reader = csv.DictReader(io.StringIO(_read_text(source)))
    if reader.fieldnames is None or not {"p1", "p2"} <= {f.strip() for f in reader.fieldnames}:
        raise ValidationError("two-line CSV needs a header with columns p1,p2")
    p1, p2 = [], []
    for lineno, row in enumerate(reader, start=2):
        row = {k.strip(): v for k, v in row.items()}
        try:
            p1.append(float(row["p1"]))
            p2.append(float(row["p2"]))
        except (TypeError, ValueError):
            raise ValidationError(f"line {lineno}: expected two numbers") from None
    return TwoLineInstance(tuple(p1), tuple(p2))


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(dict.fromkeys(k for row in rows for k in row))
    writer = csv.DictWriter(buf, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()
