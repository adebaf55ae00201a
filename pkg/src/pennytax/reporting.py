"""Aligned-text and CSV report tables plus the run manifest."""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence


def fmt_fraction(x: Fraction | int, places: int) -> str:
    """Decimal rendering of an exact rational, half to even."""
    n = round(Fraction(x) * 10**places)
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def fmt_int(n: int) -> str:
    return f"{n:,}"


@dataclass
class Table:
    title: str
    columns: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, *row: Any) -> None:
        self.rows.append([str(c) for c in row])

    def render(self) -> str:
        cells = [list(self.columns)] + [list(r) for r in self.rows]
        widths = [max(len(str(r[i])) for r in cells) for i in range(len(self.columns))]
        lines = [self.title, "=" * len(self.title)]
        for n, r in enumerate(cells):
            parts = [str(c).ljust(widths[0]) if i == 0 else str(c).rjust(widths[i]) for i, c in enumerate(r)]
            lines.append("  ".join(parts).rstrip())
            if n == 0:
                lines.append("  ".join("-" * w for w in widths))
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


@dataclass
class Report:
    name: str
    tables: list[Table] = field(default_factory=list)
    records: list[dict[str, Any]] = field(default_factory=list)

    def text(self) -> str:
        return "\n".join(t.render() for t in self.tables)

    def csv(self) -> str:
        if not self.records:
            return ""
        keys: list[str] = []
        for r in self.records:
            for k in r:
                if k not in keys:
                    keys.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n", restval="")
        w.writeheader()
        for r in self.records:
            w.writerow(r)
        return buf.getvalue()

    def write(self, out_dir: Path) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [out_dir / f"{self.name}.txt", out_dir / f"{self.name}.csv"]
        paths[0].write_text(self.text(), encoding="utf-8")
        paths[1].write_text(self.csv(), encoding="utf-8")
        return paths


def write_manifest(out_dir: Path, command: str, config: dict[str, Any], outputs: Sequence[Path], version: str,
                   accel: bool) -> Path:
    manifest = {
        "tool": "pennytax",
        "version": version,
        "command": command,
        "created": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "python": platform.python_version(),
        "numba": accel,
        "config": {k: (str(v) if isinstance(v, (Path, Fraction)) else v) for k, v in sorted(config.items())},
        "outputs": [p.name for p in outputs],
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path
