"""Deterministic CSV/JSON serialization and run manifests.

Numbers leave the toolkit as decimal strings printed from enclosures, never
as bare floats, so a value read back from a file still contains the true
quantity. Wall time lives only in the manifest sidecar; the data files are
byte-identical across runs with the same arguments.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import __version__
from .enclosure import Enclosure, decimal_down, decimal_up
from .sigma import SigmaTrace

TRACE_FIELDS = ["n", "nearest", "distance", "sigma_lo", "sigma_hi", "route", "exact_hit"]
FAMILY_FIELDS = ["k", "M", "N", "eps", "zeta", "f", "unit", "bound_remark", "sigma_window_lo", "sigma_window_hi", "n0"]
FD_FIELDS = ["n", "sigma_lo", "sigma_hi", "exact_hit", "gap_to_prev"]


def trace_rows(tr: SigmaTrace) -> Iterable[dict]:
    for s in tr.samples:
        row = {"n": s.n, "route": s.route, "exact_hit": int(s.status == "exact_hit")}
        if s.status == "exact_hit":
            row.update(nearest=s.nearest, distance="0", sigma_lo="inf", sigma_hi="inf")
        elif s.status == "skipped":
            row.update(nearest="" if s.nearest is None else s.nearest, distance="", sigma_lo="", sigma_hi="")
        else:
            row.update(
                nearest=s.nearest,
                distance=s.distance.format(),
                sigma_lo=decimal_down(s.sigma.lo, 17),
                sigma_hi=decimal_up(s.sigma.hi, 17),
            )
        yield row


def csv_text(fields: list[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=_default) + "\n"


def _default(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Enclosure):
        return x.format(20)
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@dataclass
class RunManifest:
    command: str
    arguments: dict
    precision: dict
    seed: int | None = None
    version: str = __version__
    wall_time: float | None = None
    outputs: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "arguments": self.arguments,
            "precision": self.precision,
            "seed": self.seed,
            "version": self.version,
            "wall_time_s": None if self.wall_time is None else round(self.wall_time, 3),
            "outputs": self.outputs,
        }


def manifest_path(out: str | Path) -> Path:
    p = Path(out)
    return p.with_name(p.name + ".manifest.json")


def emit(text: str, out: str | None, manifest: RunManifest | None = None) -> None:
    """Write ``text`` to ``out`` (stdout when None) plus the manifest sidecar."""
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")
    if manifest is not None:
        manifest.outputs = [str(out)]
        manifest_path(out).write_text(json_text(manifest.to_json()), encoding="utf-8")
