"""CSV loading with strict schema validation.

The simulator's files carry one comment line with the resolved run
configuration, then a header row, then data. Loading is strictly
read-only; a schema mismatch reports the exact column diff.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .spec import EXPECTED_COLUMNS, SchemaError

__all__ = ["FigureData", "load_csv"]


@dataclass(frozen=True)
class FigureData:
    config_line: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def numeric(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [float(r[i]) for r in self.rows]

    def text(self, name: str) -> list[str]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def load_csv(path: Path, kind: str) -> FigureData:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith("# "):
            raise SchemaError(f"{path}: missing the leading config comment line")
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{path}: missing header row") from None
        expected = EXPECTED_COLUMNS[kind]
        if header != expected:
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected]
            raise SchemaError(
                f"{path}: columns do not match kind {kind!r}; "
                f"missing={missing} unexpected={extra} "
                f"(got {list(header)}, expected {list(expected)})"
            )
        rows = tuple(tuple(r) for r in reader if r)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return FigureData(config_line=first.lstrip("# "), columns=header, rows=rows)
