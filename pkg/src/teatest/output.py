"""Deterministic machine-readable output.

Floats are rendered with 17 significant digits (round-trip exact for IEEE
doubles), integers as integers, and containers in insertion order, so a
run's output is byte-identical across invocations. CSV output uses RFC
4180 quoting with a header row and '.' as the decimal separator.
"""

from __future__ import annotations

import csv
import io
import json
import math


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"refusing to serialize non-finite float {value}")
    text = format(value, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _render(value, indent, level):
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_render(v, indent, level + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{closing_pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{_render(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{closing_pad}]"
    raise TypeError(f"cannot serialize value of type {type(value).__name__}")


def to_json(value, indent: int = 2) -> str:
    return _render(value, indent, 0)


def rows_to_csv(fieldnames, rows) -> str:
    """RFC 4180 table: header row, CRLF line endings, minimal quoting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(fieldnames)
    for row in rows:
        rendered = []
        for name in fieldnames:
            value = row[name]
            if value is None:
                rendered.append("")
            elif isinstance(value, bool):
                rendered.append("true" if value else "false")
            elif isinstance(value, float):
                rendered.append(format_float(value))
            else:
                rendered.append(str(value))
        writer.writerow(rendered)
    return buffer.getvalue()
