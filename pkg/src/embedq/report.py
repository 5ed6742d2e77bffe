"""Score reports: JSON/CSV serialization and a bare-bones SVG scatter."""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import asdict, dataclass, field

REPORT_KEYS = (
    "dataset", "embedding", "mode", "c", "n", "p", "q", "cmet_local", "cmet_global",
    "baselines", "k", "times_ms", "peak_memory_bytes", "seed",
)


@dataclass
class ScoreReport:
    dataset: str
    embedding: str
    mode: str | None
    c: int | None
    n: int
    p: int
    q: int
    cmet_local: float | None = None
    cmet_global: float | None = None
    baselines: dict | None = None
    k: int | None = None
    times_ms: dict = field(default_factory=dict)
    peak_memory_bytes: int = 0
    seed: int = 42

    def as_dict(self):
        return asdict(self)


def _float17(v):
    s = format(v, ".17g")
    if math.isfinite(v) and not any(ch in s for ch in ".e"):
        s += ".0"
    return s


_TOKEN = re.compile(r'"@@f:([^"]*)@@"')


def _tag_floats(obj):
    if isinstance(obj, float):
        return f"@@f:{_float17(obj)}@@"
    if isinstance(obj, dict):
        return {k: _tag_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tag_floats(v) for v in obj]
    return obj


def dumps(obj, indent=2):
    """JSON with every float written to 17 significant digits."""
    return _TOKEN.sub(r"\1", json.dumps(_tag_floats(obj), indent=indent))


def to_json(reports):
    if isinstance(reports, ScoreReport):
        return dumps(reports.as_dict())
    return dumps([r.as_dict() for r in reports])


def _flat(report):
    row = report.as_dict()
    baselines = row.pop("baselines") or {}
    times = row.pop("times_ms") or {}
    for name in ("trustworthiness", "continuity", "lcmc"):
        row[name] = baselines.get(name)
    for name, t in times.items():
        row[f"time_ms_{name}"] = t
    return row


def to_csv(reports):
    if isinstance(reports, ScoreReport):
        reports = [reports]
    rows = [_flat(r) for r in reports]
    columns = list(rows[0])
    for row in rows[1:]:
        columns += [c for c in row if c not in columns]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (_float17(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def scatter_svg(points, labels, size=480, margin=20, radius=1.5):
    """Static SVG of the first two columns of ``points`` coloured by cluster id."""
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) if len(p) > 1 else 0.0 for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = (size - 2 * margin) / span
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    for x, y, lab in zip(xs, ys, labels):
        cx = margin + (x - x0) * scale
        cy = size - margin - (y - y0) * scale
        colour = _PALETTE[int(lab) % len(_PALETTE)]
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius}" fill="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
