import numpy as np
import pytest
from PIL import Image

from reliabench_adapter.models import LoadedModel


@pytest.fixture
def make_tree(tmp_path):
    """Build a corrupt-dataset style tree with random PNGs.

    cells maps corruption name -> list of levels (clean is implicit).
    Returns (root, image_ids).
    """

    def build(n_images=3, cells=None, size=24):
        rng = np.random.default_rng(77)
        cells = cells if cells is not None else {"darken": [1, 2], "gaussian_noise": [1, 2]}
        root = tmp_path / "tree"
        ids = [f"img{i:03d}" for i in range(n_images)]
        for image_id in ids:
            base = rng.integers(0, 256, (size, size, 3), dtype=np.uint8)
            path = root / "clean" / f"{image_id}.png"
            path.parent.mkdir(parents=True, exist_ok=True)
            Image.fromarray(base).save(path)
            for kind, levels in cells.items():
                for level in levels:
                    noisy = rng.integers(0, 256, (size, size, 3), dtype=np.uint8)
                    path = root / kind / str(level) / f"{image_id}.png"
                    path.parent.mkdir(parents=True, exist_ok=True)
                    Image.fromarray(noisy).save(path)
        (root / "run_report.json").write_text("{}\n")
        return root, ids

    return build


def brightness_stub(spec):
    """Fake classifier: the class index is the mean image brightness.

    Deterministic in the pixels alone, so reruns are byte-identical.
    """

    def predict(batch):
        scores = np.zeros((batch.shape[0], 1000), dtype=np.float32)
        for row, image in enumerate(batch):
            scores[row, int(image.mean()) % 1000] = 1.0
        return scores

    return LoadedModel(spec=spec, predict=predict, preprocess=lambda x: x)


def constant_stub(spec):
    """Fake classifier that ties every class at score zero."""

    def predict(batch):
        return np.zeros((batch.shape[0], 1000), dtype=np.float32)

    return LoadedModel(spec=spec, predict=predict, preprocess=lambda x: x)
