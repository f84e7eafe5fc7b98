"""Top-k accuracy over prediction records and degradation curves."""

from __future__ import annotations

import csv
import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corruptions import CorruptionKind

CLEAN = "clean"

_MAX_LISTED_OFFENDERS = 10


@dataclass(frozen=True)
class PredictionRecord:
    """Ranked top-5 labels a model emitted for one (image, corruption, level)."""

    image_id: str
    model: str
    corruption: str  # a CorruptionKind value, or "clean"
    level: int
    top5: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "top5", tuple(int(c) for c in self.top5))
        if len(self.top5) != 5:
            raise ValueError(f"top5 must hold exactly 5 labels, got {len(self.top5)}")
        if len(set(self.top5)) != 5:
            raise ValueError(f"top5 labels must be distinct, got {self.top5}")
        if self.corruption == CLEAN:
            if self.level != 0:
                raise ValueError(f"clean records must have level 0, got {self.level}")
        else:
            CorruptionKind.parse(self.corruption)
            if not 1 <= self.level <= 10:
                raise ValueError(
                    f"corrupted records must have level in [1, 10], got {self.level}"
                )

    @property
    def key(self) -> tuple[str, str, str, int]:
        return (self.image_id, self.model, self.corruption, self.level)


def parse_record(obj: Mapping) -> PredictionRecord:
    try:
        return PredictionRecord(
            image_id=str(obj["image_id"]),
            model=str(obj["model"]),
            corruption=str(obj["corruption"]),
            level=int(obj["level"]),
            top5=tuple(obj["top5"]),
        )
    except KeyError as exc:
        raise ValueError(f"prediction record missing field {exc.args[0]!r}: {obj!r}") from None


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    """Read a JSON Lines prediction file, one record object per line."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                records.append(parse_record(obj))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return records


def _listed(ids: Iterable[str]) -> str:
    ids = sorted(set(ids))
    shown = ", ".join(repr(i) for i in ids[:_MAX_LISTED_OFFENDERS])
    if len(ids) > _MAX_LISTED_OFFENDERS:
        shown += f", ... ({len(ids)} total)"
    return shown


def _check_records(records: Sequence[PredictionRecord], truth: Mapping[str, int]) -> None:
    unknown = [r.image_id for r in records if r.image_id not in truth]
    if unknown:
        raise ValueError(f"records reference image_ids missing from the manifest: {_listed(unknown)}")
    seen: set[tuple] = set()
    dupes = []
    for r in records:
        if r.key in seen:
            dupes.append("/".join(map(str, r.key)))
        seen.add(r.key)
    if dupes:
        raise ValueError(f"duplicate (image_id, model, corruption, level) records: {_listed(dupes)}")


def topk_accuracy(records: Sequence[PredictionRecord], truth: Mapping[str, int], k: int) -> float:
    """Fraction of records whose top-k prefix contains the true label."""
    if not 1 <= k <= 5:
        raise ValueError(f"k must be in [1, 5], got {k}")
    if not records:
        raise ValueError("cannot compute accuracy over zero records")
    _check_records(records, truth)
    hits = sum(1 for r in records if truth[r.image_id] in r.top5[:k])
    return hits / len(records)


@dataclass(frozen=True)
class CurvePoint:
    level: int
    top1: float
    top5: float
    n: int


@dataclass(frozen=True)
class AccuracyCurve:
    """Accuracy by severity level for one (model, corruption) pair.

    Level 0 is the clean baseline and is identical across the model's
    curves.
    """

    model: str
    corruption: str
    points: tuple[CurvePoint, ...]


def _point(level: int, cell: Sequence[PredictionRecord], truth: Mapping[str, int]) -> CurvePoint:
    hits1 = sum(1 for r in cell if truth[r.image_id] == r.top5[0])
    hits5 = sum(1 for r in cell if truth[r.image_id] in r.top5)
    n = len(cell)
    return CurvePoint(level=level, top1=hits1 / n, top5=hits5 / n, n=n)


def build_curves(
    records: Sequence[PredictionRecord], truth: Mapping[str, int]
) -> list[AccuracyCurve]:
    """One curve per (model, corruption), prefixed with the clean baseline.

    Absent levels stay absent; a model with corrupted records but no clean
    records is an error.
    """
    _check_records(records, truth)
    clean: dict[str, list[PredictionRecord]] = defaultdict(list)
    cells: dict[tuple[str, str], dict[int, list[PredictionRecord]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for r in records:
        if r.corruption == CLEAN:
            clean[r.model].append(r)
        else:
            cells[(r.model, r.corruption)][r.level].append(r)

    missing = sorted({m for m, _ in cells} - set(clean))
    if missing:
        raise ValueError(f"no clean (level 0) baseline records for models: {_listed(missing)}")

    curves = []
    for (model, corruption) in sorted(cells):
        by_level = cells[(model, corruption)]
        points = [_point(0, clean[model], truth)]
        points += [_point(lv, by_level[lv], truth) for lv in sorted(by_level)]
        curves.append(AccuracyCurve(model=model, corruption=corruption, points=tuple(points)))
    return curves


def _fmt(value: float) -> str:
    return format(value, ".10g")


def emit_report(
    curves: Sequence[AccuracyCurve],
    out_dir: str | Path,
    fmt: str = "both",
    plot_data: bool = False,
) -> list[Path]:
    """Write the degradation report as CSV and/or JSON.

    CSV rows are ``model,corruption,level,top1,top5,n`` sorted by
    (model, corruption, level), so re-emitting the same curves is
    byte-identical. ``plot_data`` adds per-curve x/y files under plots/.
    """
    if not curves:
        raise ValueError("no curves to report")
    if fmt not in ("csv", "json", "both"):
        raise ValueError(f"format must be csv, json, or both, got {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ordered = sorted(curves, key=lambda c: (c.model, c.corruption))
    written = []

    if fmt in ("csv", "both"):
        path = out_dir / "report.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["model", "corruption", "level", "top1", "top5", "n"])
            for curve in ordered:
                for p in curve.points:
                    writer.writerow(
                        [curve.model, curve.corruption, p.level, _fmt(p.top1), _fmt(p.top5), p.n]
                    )
        written.append(path)

    if fmt in ("json", "both"):
        path = out_dir / "report.json"
        payload = [
            {
                "model": c.model,
                "corruption": c.corruption,
                "points": [
                    {"level": p.level, "top1": p.top1, "top5": p.top5, "n": p.n}
                    for p in c.points
                ],
            }
            for c in ordered
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)

    if plot_data:
        plots = out_dir / "plots"
        plots.mkdir(exist_ok=True)
        for curve in ordered:
            path = plots / f"{curve.model}__{curve.corruption}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["level", "top1", "top5"])
                for p in curve.points:
                    writer.writerow([p.level, _fmt(p.top1), _fmt(p.top5)])
            written.append(path)
    return written
