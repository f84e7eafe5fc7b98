"""8-bit RGB image loading, validation, and PNG output."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check that ``img`` is a non-empty (H, W, 3) uint8 array and return it."""
    if not isinstance(img, np.ndarray):
        raise TypeError(f"expected a numpy array, got {type(img).__name__}")
    if img.dtype != np.uint8:
        raise ValueError(f"expected uint8 intensities, got dtype {img.dtype}")
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must contain at least one pixel")
    return img


def load_image(path: str | Path) -> np.ndarray:
    """Decode a PNG or JPEG file to 8-bit RGB (grayscale is promoted)."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_png(img: np.ndarray, path: str | Path) -> None:
    """Write an image as lossless PNG, creating parent directories."""
    validate_image(img)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img, mode="RGB").save(path, format="PNG")
