"""The five supported architectures and their canonical input recipes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MODEL_NAMES = ("vgg16", "vgg19", "inception_v3", "xception", "resnet50")

# Published single-crop ImageNet validation top-1 accuracy per architecture.
PUBLISHED_TOP1 = {
    "vgg16": 0.713,
    "vgg19": 0.713,
    "inception_v3": 0.779,
    "xception": 0.790,
    "resnet50": 0.749,
}

# Input edge length and preprocessing recipe identifier. The recipe string
# is recorded next to every prediction file so results stay attributable
# to the exact pixel pipeline that produced them.
_RECIPES = {
    "vgg16": (224, "resize-224x224-bilinear;caffe-bgr-mean-subtract"),
    "vgg19": (224, "resize-224x224-bilinear;caffe-bgr-mean-subtract"),
    "resnet50": (224, "resize-224x224-bilinear;caffe-bgr-mean-subtract"),
    "inception_v3": (299, "resize-299x299-bilinear;tf-scale-minus1-to-1"),
    "xception": (299, "resize-299x299-bilinear;tf-scale-minus1-to-1"),
}


@dataclass(frozen=True)
class ModelSpec:
    """One of the five supported architectures."""

    name: str

    def __post_init__(self) -> None:
        if self.name not in MODEL_NAMES:
            raise ValueError(
                f"unknown model {self.name!r}; expected one of: {', '.join(MODEL_NAMES)}"
            )

    @property
    def input_size(self) -> int:
        return _RECIPES[self.name][0]

    @property
    def preprocessing(self) -> str:
        return _RECIPES[self.name][1]


def parse_models(text: str) -> list[ModelSpec]:
    """Comma list of model names, or "all" for the full set."""
    if text == "all":
        return [ModelSpec(name) for name in MODEL_NAMES]
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ValueError("empty model list")
    seen = set()
    specs = []
    for name in names:
        if name in seen:
            raise ValueError(f"model {name!r} listed twice")
        seen.add(name)
        specs.append(ModelSpec(name))
    return specs


@dataclass(frozen=True)
class LoadedModel:
    """A ready-to-run classifier: maps preprocessed batches to class scores.

    ``predict`` takes a float32 array of shape (N, size, size, 3) already
    run through ``preprocess`` and returns (N, n_classes) scores.
    """

    spec: ModelSpec
    predict: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    preprocess: Callable[[np.ndarray], np.ndarray] = field(compare=False)


def load_keras_model(spec: ModelSpec) -> LoadedModel:
    """Build the pretrained keras model for ``spec``.

    Imports tensorflow lazily so stub-backed runs never touch it. Missing
    or undownloadable weights surface as a RuntimeError.
    """
    from tensorflow import keras  # deferred: heavyweight, optional

    builders = {
        "vgg16": (keras.applications.VGG16, keras.applications.vgg16.preprocess_input),
        "vgg19": (keras.applications.VGG19, keras.applications.vgg19.preprocess_input),
        "inception_v3": (
            keras.applications.InceptionV3,
            keras.applications.inception_v3.preprocess_input,
        ),
        "xception": (
            keras.applications.Xception,
            keras.applications.xception.preprocess_input,
        ),
        "resnet50": (
            keras.applications.ResNet50,
            keras.applications.resnet50.preprocess_input,
        ),
    }
    builder, preprocess = builders[spec.name]
    try:
        model = builder(weights="imagenet")
    except Exception as exc:
        raise RuntimeError(f"could not load pretrained weights for {spec.name}: {exc}") from exc

    def predict(batch: np.ndarray) -> np.ndarray:
        return np.asarray(model.predict(batch, verbose=0))

    return LoadedModel(spec=spec, predict=predict, preprocess=preprocess)
