"""Plot-ready output files: runs table, per-cell summary and manifest."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .config import case_short, heuristic_short
from .harness import CellResult

RUNS_FILE = "runs.csv"
SUMMARY_FILE = "summary.json"
MANIFEST_FILE = "manifest.json"

RUN_COLUMNS = (
    "heuristic", "case", "run_index", "seed", "content_removed", "percent_removed",
    "invite_ticks", "cost", "nu", "final_tick",
)


def _num(x: Optional[float]) -> str:
    if x is None:
        return "undefined"
    return repr(float(x)) if isinstance(x, float) else str(x)


def _undefined(d: dict) -> dict:
    return {k: _undefined(v) if isinstance(v, dict) else ("undefined" if v is None else v) for k, v in d.items()}


def run_rows(results: Sequence[CellResult]) -> list[list[str]]:
    rows = []
    for cell in results:
        for i, r in enumerate(cell.records):
            rows.append([
                heuristic_short(cell.heuristic),
                case_short(cell.spawn_case),
                str(i),
                str(r.seed),
                str(r.content_removed),
                _num(r.percent_removed),
                str(r.invite_ticks),
                _num(r.cost),
                _num(r.nu),
                str(r.final_tick),
            ])
    return rows


def export_runs(
    results: Sequence[CellResult],
    destination: str | Path,
    manifest: Optional[dict[str, Any]] = None,
) -> dict[str, Path]:
    """Write runs.csv, summary.json and (optionally) manifest.json into ``destination``.

    Rows come out sorted by (heuristic, case, run index) as the harness
    collates them; OSError propagates when the directory is unwritable.
    """
    if not results or not any(c.records for c in results):
        raise ValueError("nothing to export")
    out = Path(destination)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"runs": out / RUNS_FILE, "summary": out / SUMMARY_FILE}

    with open(paths["runs"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
        writer.writerows(run_rows(results))

    summary = {
        "cells": [
            {
                "heuristic": heuristic_short(c.heuristic),
                "case": case_short(c.spawn_case),
                "config_digest": c.records[0].config_digest,
                **_undefined(c.stats.to_dict()),
            }
            for c in results
        ]
    }
    paths["summary"].write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")

    if manifest is not None:
        paths["manifest"] = out / MANIFEST_FILE
        body = {"tool": "forage", "version": __version__, **manifest}
        paths["manifest"].write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths
