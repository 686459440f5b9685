"""Plain-text CSV/JSON output with fixed numeric formatting.

All numbers go through :func:`fmt` so identical inputs produce
byte-identical files.
"""

import json
import math
from pathlib import Path

SIGNIFICANT_DIGITS = 12


def fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if value == 0.0:
            return "0"
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def format_csv(header, rows, metadata=None):
    lines = [f"# {key}={fmt(val)}" for key, val in (metadata or {}).items()]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows, metadata=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(header, rows, metadata), encoding="utf-8")
    return path


def read_csv(path):
    """Return ``(metadata, header, rows)`` with rows parsed as floats."""
    metadata, header, rows = {}, None, []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line.lstrip("# ").partition("=")
            metadata[key.strip()] = val.strip()
        elif header is None:
            header = [h.strip() for h in line.split(",")]
        else:
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: missing CSV header")
    return metadata, header, rows


def _round_floats(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    value = float(obj)
    if not math.isfinite(value):
        return None
    return float(fmt(value))


def dumps_json(obj):
    return json.dumps(_round_floats(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(obj), encoding="utf-8")
    return path
