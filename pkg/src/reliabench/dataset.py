"""Dataset manifests and the batch corruption pipeline."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corruptions import MAX_LEVEL, MIN_LEVEL, CorruptionKind, CorruptionSpec, apply
from .image import load_image, save_png

logger = logging.getLogger(__name__)

MANIFEST_FIELDS = ("image_id", "path", "label")

CLEAN_DIR = "clean"


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    path: Path
    label: int


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a CSV manifest with header ``image_id,path,label``.

    Relative image paths resolve against the manifest's directory; labels
    are integer class indices.
    """
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames[:3]) != MANIFEST_FIELDS:
            raise ValueError(
                f"manifest {path} must start with header {','.join(MANIFEST_FIELDS)}, "
                f"got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            image_id = (row["image_id"] or "").strip()
            if not image_id:
                raise ValueError(f"{path}:{lineno}: empty image_id")
            if image_id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
            seen.add(image_id)
            try:
                label = int(row["label"])
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}:{lineno}: label must be an integer class index, got {row['label']!r}"
                ) from None
            img_path = Path(row["path"])
            if not img_path.is_absolute():
                img_path = base / img_path
            entries.append(ManifestEntry(image_id=image_id, path=img_path, label=label))
    return entries


def label_map(entries: Iterable[ManifestEntry]) -> dict[str, int]:
    """Ground-truth lookup: image_id -> class index."""
    return {e.image_id: e.label for e in entries}


def derive_seed(global_seed: int, image_id: str, kind: CorruptionKind, level: int) -> int:
    """Stable per-cell seed so any subset re-run reproduces the full run.

    Defined as the first 8 bytes, big-endian, of
    SHA-256("{global_seed}|{image_id}|{kind}|{level}").
    """
    payload = f"{global_seed}|{image_id}|{kind.value}|{level}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


@dataclass
class RunReport:
    """What a corruption run produced, for the run_report.json artifact."""

    seed: int
    kinds: list[str]
    levels: list[int]
    clean_written: int = 0
    corrupted_written: int = 0
    skipped: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "kinds": self.kinds,
            "levels": self.levels,
            "clean_written": self.clean_written,
            "corrupted_written": self.corrupted_written,
            "skipped": self.skipped,
        }


def corrupt_dataset(
    entries: Sequence[ManifestEntry],
    out_dir: str | Path,
    kinds: Iterable[CorruptionKind] | None = None,
    levels: Iterable[int] | None = None,
    seed: int = 0,
    angle: float = 0.0,
) -> RunReport:
    """Write ``out/{kind}/{level}/{image_id}.png`` for every combination.

    Clean copies always land under ``out/clean/``. Unreadable images are
    skipped with a warning and recorded in the report; output write
    failures abort. The report is also written to ``out/run_report.json``.
    """
    out_dir = Path(out_dir)
    kinds = sorted(set(kinds), key=lambda k: k.value) if kinds is not None else list(CorruptionKind)
    if levels is None:
        levels = range(MIN_LEVEL, MAX_LEVEL + 1)
    levels = sorted(set(int(lv) for lv in levels))
    for lv in levels:
        if not MIN_LEVEL <= lv <= MAX_LEVEL:
            raise ValueError(f"severity level must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {lv}")

    report = RunReport(seed=seed, kinds=[k.value for k in kinds], levels=levels)
    for entry in entries:
        try:
            img = load_image(entry.path)
        except (OSError, ValueError) as exc:
            logger.warning("skipping %s (%s): %s", entry.image_id, entry.path, exc)
            report.skipped.append({"image_id": entry.image_id, "path": str(entry.path), "reason": str(exc)})
            continue
        save_png(img, out_dir / CLEAN_DIR / f"{entry.image_id}.png")
        report.clean_written += 1
        for kind in kinds:
            for level in levels:
                spec = CorruptionSpec(kind, level, derive_seed(seed, entry.image_id, kind, level))
                corrupted = apply(spec, img, angle=angle)
                save_png(corrupted, out_dir / kind.value / str(level) / f"{entry.image_id}.png")
                report.corrupted_written += 1

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "run_report.json", "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report
