"""Report serialization: CSV and JSON tables of evaluation results."""

from __future__ import annotations

import json
from pathlib import Path

from ..metrics import EvalReport

_COLUMNS = ("strategy", "k", "n_instances", "em_pct", "es_pct", "bleu_pct")
_FORMATS = ("csv", "json")


def emit_report(
    reports: list[EvalReport],
    out_dir: str | Path,
    formats: tuple[str, ...] = ("csv", "json"),
    basename: str = "report",
) -> list[Path]:
    """Write sorted report tables; floats rendered at two decimals."""
    if not reports:
        raise ValueError("no reports to emit")
    unknown = set(formats) - set(_FORMATS)
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [_row(r) for r in sorted(reports, key=lambda r: (r.strategy, r.k))]

    written = []
    if "csv" in formats:
        path = out_dir / f"{basename}.csv"
        lines = [",".join(_COLUMNS)]
        lines.extend(
            ",".join(_render_csv_value(row[col]) for col in _COLUMNS) for row in rows
        )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        written.append(path)
    if "json" in formats:
        path = out_dir / f"{basename}.json"
        path.write_text(
            json.dumps(rows, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n",
            encoding="utf-8",
            newline="\n",
        )
        written.append(path)
    return written


def _row(report: EvalReport) -> dict:
    return {
        "strategy": report.strategy,
        "k": report.k,
        "n_instances": report.n_instances,
        "em_pct": round(report.em_pct, 2),
        "es_pct": round(report.es_pct, 2),
        "bleu_pct": round(report.bleu_pct, 2),
    }


def _render_csv_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)
