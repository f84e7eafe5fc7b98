"""Walk a corrupted-dataset tree and emit prediction files.

The tree layout and the JSON Lines record format are the wire contract
with the evaluation side: ``clean/`` holds level-0 originals and each
``{kind}/{level}/`` directory one severity cell, PNG files named by
image id. One output file per model, lines sorted by (image_id,
corruption, level), plus a ``{model}.meta.json`` sidecar recording the
exact preprocessing recipe.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from PIL import Image

from .models import LoadedModel, ModelSpec, load_keras_model

logger = logging.getLogger(__name__)

CLEAN = "clean"
MIN_LEVEL, MAX_LEVEL = 1, 10
TOP_K = 5

# Corruption directories a well-formed tree may contain.
KNOWN_KINDS = (
    "gaussian_blur",
    "average_blur",
    "motion_blur",
    "gaussian_noise",
    "speckle_noise",
    "salt_pepper_noise",
    "darken",
    "brighten",
    "single_occlusion",
    "multiple_occlusions",
)


@dataclass(frozen=True)
class TreeImage:
    image_id: str
    corruption: str
    level: int
    path: Path

    @property
    def sort_key(self) -> tuple[str, str, int]:
        return (self.image_id, self.corruption, self.level)


def scan_tree(root: str | Path) -> list[TreeImage]:
    """Collect every PNG cell in a corrupt-dataset output tree.

    Unknown directories are an error rather than a silent omission; a
    tree with no clean/ directory is rejected too, since downstream
    scoring needs the level-0 baseline.
    """
    root = Path(root)
    if not root.is_dir():
        raise ValueError(f"dataset root {root} is not a directory")
    images: list[TreeImage] = []
    for entry in sorted(root.iterdir()):
        if entry.is_file():
            continue  # run_report.json and friends
        if entry.name == CLEAN:
            for png in sorted(entry.glob("*.png")):
                images.append(TreeImage(png.stem, CLEAN, 0, png))
            continue
        if entry.name not in KNOWN_KINDS:
            raise ValueError(f"unexpected directory {entry.name!r} under {root}")
        for level_dir in sorted(entry.iterdir()):
            if not level_dir.is_dir() or not level_dir.name.isdigit():
                raise ValueError(f"expected numeric level directory, got {level_dir}")
            level = int(level_dir.name)
            if not MIN_LEVEL <= level <= MAX_LEVEL:
                raise ValueError(f"level {level} out of range in {level_dir}")
            for png in sorted(level_dir.glob("*.png")):
                images.append(TreeImage(png.stem, entry.name, level, png))
    if not any(img.corruption == CLEAN for img in images):
        raise ValueError(f"tree {root} has no clean/ images")
    return sorted(images, key=lambda im: im.sort_key)


def _load_pixels(path: Path, size: int) -> np.ndarray | None:
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB").resize((size, size), Image.BILINEAR)
    except OSError as exc:
        logger.warning("skipping undecodable image %s: %s", path, exc)
        return None
    return np.asarray(rgb, dtype=np.float32)


def top5_labels(scores: np.ndarray) -> list[int]:
    """Indices of the five best scores, descending; ties go to the
    smaller class index."""
    order = np.argsort(-scores, kind="stable")
    return [int(i) for i in order[:TOP_K]]


def _batches(items: Sequence, size: int) -> Iterable[Sequence]:
    for start in range(0, len(items), size):
        yield items[start : start + size]


def predict_tree(
    models: Sequence[ModelSpec],
    dataset_root: str | Path,
    out_dir: str | Path,
    batch_size: int = 32,
    loader: Callable[[ModelSpec], LoadedModel] = load_keras_model,
) -> list[Path]:
    """Run every model over every image cell; one JSON Lines file per model.

    Returns the written prediction file paths (sidecars not included).
    """
    if not models:
        raise ValueError("no models requested")
    if batch_size < 1:
        raise ValueError(f"batch size must be >= 1, got {batch_size}")
    images = scan_tree(dataset_root)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    written = []
    for spec in models:
        loaded = loader(spec)
        out_path = out_dir / f"{spec.name}.jsonl"
        n_records = 0
        with open(out_path, "w", encoding="utf-8") as fh:
            for chunk in _batches(images, batch_size):
                pixels = [(im, _load_pixels(im.path, spec.input_size)) for im in chunk]
                kept = [(im, px) for im, px in pixels if px is not None]
                if not kept:
                    continue
                batch = loaded.preprocess(np.stack([px for _, px in kept]))
                scores = loaded.predict(batch)
                if scores.shape[0] != len(kept):
                    raise RuntimeError(
                        f"{spec.name} returned {scores.shape[0]} rows for {len(kept)} images"
                    )
                for (im, _), row in zip(kept, scores):
                    record = {
                        "image_id": im.image_id,
                        "model": spec.name,
                        "corruption": im.corruption,
                        "level": im.level,
                        "top5": top5_labels(row),
                    }
                    fh.write(json.dumps(record) + "\n")
                    n_records += 1
        meta = {
            "model": spec.name,
            "weights": "imagenet",
            "input_size": spec.input_size,
            "preprocessing": spec.preprocessing,
            "records": n_records,
        }
        with open(out_dir / f"{spec.name}.meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(out_path)
        logger.info("%s: %d records -> %s", spec.name, n_records, out_path)
    return written
