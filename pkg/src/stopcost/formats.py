"""Number formatting plus CSV/JSON writers and the matching readers."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from numbers import Integral

SIG_DIGITS = 12


def format_number(v) -> str:
    """Fractions as reduced ``p/q``, integers as is, floats to 12 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Integral):
        return str(int(v))
    return format(float(v), f".{SIG_DIGITS}g")


def parse_number(text: str):
    text = text.strip()
    if text in ("true", "false"):
        return text == "true"
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format_number(v)


def write_csv(rows: list[dict], columns: list[str], meta: dict | None = None) -> str:
    buf = io.StringIO()
    for key, val in (meta or {}).items():
        buf.write(f"# {key}={val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return [
        {k: parse_number(v) if v != "" else None for k, v in row.items()}
        for row in csv.DictReader(lines)
    ]


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, Integral):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return float(format_number(v))


def to_json(obj, meta: dict | None = None) -> str:
    out = _json_value(obj)
    if meta:
        out = {"meta": meta, **out} if isinstance(out, dict) else {"meta": meta, "rows": out}
    return json.dumps(out, indent=2) + "\n"


def _restore(v):
    if isinstance(v, str) and "/" in v:
        try:
            return Fraction(v)
        except ValueError:
            return v
    if isinstance(v, dict):
        return {k: _restore(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_restore(x) for x in v]
    return v


def read_json(text: str):
    """Inverse of :func:`to_json`: ``"p/q"`` strings come back as fractions."""
    return _restore(json.loads(text))
