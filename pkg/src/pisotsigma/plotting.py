"""SVG figures from the CSV outputs: sigma traces and density scatters."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .enclosure import parse_enclosure  # noqa: E402
from .errors import InputError  # noqa: E402
from .report import FAMILY_FIELDS, TRACE_FIELDS, read_csv  # noqa: E402

# fixed id salt and no timestamp: identical inputs give identical SVG bytes
_RC = {"svg.hashsalt": "pisotsigma", "svg.fonttype": "path", "figure.figsize": (7.0, 4.2)}


def _check_schema(rows: list[dict], fields: list[str], kind: str) -> None:
    if not rows:
        raise InputError(f"{kind} CSV has no rows")
    missing = [f for f in fields if f not in rows[0]]
    if missing:
        raise InputError(f"CSV does not match the {kind} schema, missing {missing}")


def _mid(lo: str, hi: str) -> float:
    return (float(lo) + float(hi)) / 2


def _bound_lines(bound_json: str | Path | None) -> list[tuple[str, float]]:
    if bound_json is None:
        return []
    data = json.loads(Path(bound_json).read_text())
    out = []
    for b in data.get("bounds", []):
        if b["name"] in ("inf_reciprocal_degree", "sup_degree") and b.get("applicable") and b.get("hi") not in (None, "inf"):
            out.append((b["name"], float(b["hi"])))
    return out


def plot_trace(rows: list[dict], ax, bounds: list[tuple[str, float]]) -> None:
    _check_schema(rows, TRACE_FIELDS, "trace")
    ok = [(int(r["n"]), _mid(r["sigma_lo"], r["sigma_hi"])) for r in rows if r["sigma_lo"] not in ("", "inf")]
    hits = [int(r["n"]) for r in rows if r["exact_hit"] == "1"]
    if ok:
        ax.plot([n for n, _ in ok], [s for _, s in ok], ".", ms=2.5, color="tab:blue", label="sigma_n")
    top = max([s for _, s in ok] + [v for _, v in bounds] + [1.0]) * 1.1
    if hits:
        ax.plot(hits, [top] * len(hits), "^", ms=5, color="tab:red", label="exact hit (sigma = inf)")
    styles = {"inf_reciprocal_degree": ("--", "1/(k-1)"), "sup_degree": (":", "k-1")}
    for name, v in bounds:
        ls, lab = styles[name]
        ax.axhline(v, ls=ls, lw=1, color="0.3", label=lab)
    ax.set_xlabel("n")
    ax.set_ylabel("sigma_n")


def plot_density(rows: list[dict], ax) -> None:
    _check_schema(rows, FAMILY_FIELDS, "density")
    xs, ys = [], []
    for r in rows:
        if r["sigma_window_lo"] in ("", "inf"):
            continue
        lo, hi = parse_enclosure(r["bound_remark"])
        xs.append(float((lo + hi) / 2))
        lo, hi = parse_enclosure(r["sigma_window_lo"])
        ys.append(float((lo + hi) / 2))
    if not xs:
        raise InputError("density CSV has no measured windows")
    ax.scatter(xs, ys, s=10, color="tab:blue", label="members")
    m = max(xs + ys)
    ax.plot([0, m], [0, m], lw=0.8, color="0.5", label="diagonal")
    ax.set_xlabel("-log f / log zeta")
    ax.set_ylabel("window liminf of sigma_n")


def plot(csv_path: str | Path, kind: str, out_path: str | Path, bound_json: str | Path | None = None) -> Path:
    """Render ``csv_path`` as an SVG at ``out_path``."""
    if kind not in ("trace", "density"):
        raise InputError(f"unknown plot kind {kind!r}")
    rows = read_csv(csv_path)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            if kind == "trace":
                plot_trace(rows, ax, _bound_lines(bound_json))
            else:
                plot_density(rows, ax)
            ax.legend(loc="best", fontsize=8)
            fig.tight_layout()
            fig.savefig(out_path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return Path(out_path)
