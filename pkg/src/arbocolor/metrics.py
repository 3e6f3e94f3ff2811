"""Per-update measurements and their aggregation."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional

from .errors import InvalidArgument


@dataclass(frozen=True)
class MetricsRow:
    """One processed update.

    ``recolored`` counts color assignments (the inserted edge included),
    ``uncolored`` is the size of the uncolored set handed to the recoloring
    cascade, and ``levels_changed`` the number of edges whose level moved in
    some layer.
    """

    step: int
    op: str
    recolored: int
    uncolored: int
    levels_changed: int
    max_color: int
    delta_t: int
    alpha_cert: Optional[int]
    wall_nanos: int


FIELDS = [f.name for f in fields(MetricsRow)]


def rows_to_csv(rows: Iterable[MetricsRow], timing: bool = True) -> str:
    cols = FIELDS if timing else [c for c in FIELDS if c != "wall_nanos"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        record = asdict(row)
        if record["alpha_cert"] is None:
            record["alpha_cert"] = ""
        writer.writerow(record)
    return buf.getvalue()


def rows_from_csv(text: str) -> list[MetricsRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            MetricsRow(
                step=int(rec["step"]),
                op=rec["op"],
                recolored=int(rec["recolored"]),
                uncolored=int(rec["uncolored"]),
                levels_changed=int(rec["levels_changed"]),
                max_color=int(rec["max_color"]),
                delta_t=int(rec["delta_t"]),
                alpha_cert=int(rec["alpha_cert"]) if rec.get("alpha_cert") else None,
                wall_nanos=int(rec.get("wall_nanos") or 0),
            )
        )
    return rows


@dataclass(frozen=True)
class Summary:
    updates: int
    insertions: int
    deletions: int
    total_recolored: int
    total_uncolored: int
    total_levels_changed: int
    avg_recolored: float
    avg_uncolored: float
    avg_levels_changed: float
    max_recolored: int
    peak_color: int
    peak_delta: int
    total_wall_nanos: int


def summarize(rows: list[MetricsRow]) -> Summary:
    if not rows:
        raise InvalidArgument("cannot summarize an empty run")
    t = len(rows)
    rec = sum(r.recolored for r in rows)
    unc = sum(r.uncolored for r in rows)
    lev = sum(r.levels_changed for r in rows)
    return Summary(
        updates=t,
        insertions=sum(1 for r in rows if r.op == "I"),
        deletions=sum(1 for r in rows if r.op == "D"),
        total_recolored=rec,
        total_uncolored=unc,
        total_levels_changed=lev,
        avg_recolored=rec / t,
        avg_uncolored=unc / t,
        avg_levels_changed=lev / t,
        max_recolored=max(r.recolored for r in rows),
        peak_color=max(r.max_color for r in rows),
        peak_delta=max(r.delta_t for r in rows),
        total_wall_nanos=sum(r.wall_nanos for r in rows),
    )
