"""JSON and CSV formats shared by the CLI."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .dynamics import DynamicsTrace
from .errors import InvalidInputError


class InputFileError(InvalidInputError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputFileError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_text(text: str, path: Optional[str | Path]) -> None:
    if path is None:
        print(text, end="")
    else:
        Path(path).write_text(text)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def trace_csv(trace: DynamicsTrace) -> str:
    header = ["m", *(f"P_{f}" for f in range(1, trace.n + 1)), "T"]
    rows = (
        [float(t), *(float(p) for p in probs), float(T)]
        for t, probs, T in zip(trace.times, trace.probabilities, trace.tangle)
    )
    return csv_text(header, rows)


def read_trace_csv(path: str | Path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols: dict[str, list[float]] = {name: [] for name in reader.fieldnames or []}
        for row in reader:
            for k, v in row.items():
                cols[k].append(float(v))
    return cols


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")
