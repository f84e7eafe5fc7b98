import csv
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance-gate pass/fail lines where they stay visible."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def small_image(rng):
    """Random 24 x 32 RGB image avoiding pure black/white pixels."""
    return rng.integers(1, 255, size=(24, 32, 3), dtype=np.uint8)


@pytest.fixture
def make_dataset(tmp_path, rng):
    """Write n random PNGs plus a manifest; returns the manifest path."""

    def build(n=3, size=(24, 32), labels=None):
        manifest = tmp_path / "manifest.csv"
        with open(manifest, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["image_id", "path", "label"])
            for i in range(n):
                img = rng.integers(0, 256, size=(*size, 3), dtype=np.uint8)
                name = f"img{i:03d}.png"
                Image.fromarray(img).save(tmp_path / name)
                label = labels[i] if labels else i % 10
                writer.writerow([f"img{i:03d}", name, label])
        return manifest

    return build
