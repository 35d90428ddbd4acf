"""
Dataset store.

Sweeps are written as flat files, selected by format:
  csv   →  a ``#``-prefixed JSON header with the resolved run configuration,
           then the table (pandas, fixed float format)
  json  →  {"config": {...}, "rows": [...]}

Both writers are deterministic: identical frames and headers give identical
bytes. ``read_dataset`` returns (header, frame) for either format.
"""
import io
import json
from pathlib import Path

import pandas as pd

from app.config import get_settings

HEADER_PREFIX = "# "
FORMATS = ("csv", "json")


def render_dataset(frame: pd.DataFrame, header: dict, fmt: str = "csv", float_format: str | None = None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format '{fmt}', expected csv or json")
    if fmt == "json":
        rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        return json.dumps({"config": header, "rows": rows}, indent=2, sort_keys=True) + "\n"

    buffer = io.StringIO()
    buffer.write(HEADER_PREFIX + json.dumps(header, sort_keys=True) + "\n")
    frame.to_csv(
        buffer,
        index=False,
        float_format=float_format or get_settings().float_format,
        lineterminator="\n",
    )
    return buffer.getvalue()


def save_dataset(
    frame: pd.DataFrame, header: dict, path: str | Path, fmt: str = "csv", float_format: str | None = None
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_dataset(frame, header, fmt, float_format), encoding="utf-8")
    return path


def read_dataset(path: str | Path) -> tuple[dict, pd.DataFrame]:
    text = Path(path).read_text(encoding="utf-8")
    if text.startswith(HEADER_PREFIX):
        first, _, body = text.partition("\n")
        header = json.loads(first[len(HEADER_PREFIX):])
        return header, pd.read_csv(io.StringIO(body))
    payload = json.loads(text)
    return payload["config"], pd.DataFrame(payload["rows"])
