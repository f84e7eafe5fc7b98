"""Runs pretrained ImageNet classifiers over clean and corrupted image
trees, emitting the JSON Lines prediction files the evaluation side
consumes."""

from .models import (
    MODEL_NAMES,
    PUBLISHED_TOP1,
    LoadedModel,
    ModelSpec,
    load_keras_model,
    parse_models,
)
from .predict import TreeImage, predict_tree, scan_tree, top5_labels

__version__ = "0.1.0"

__all__ = [
    "MODEL_NAMES",
    "PUBLISHED_TOP1",
    "LoadedModel",
    "ModelSpec",
    "TreeImage",
    "load_keras_model",
    "parse_models",
    "predict_tree",
    "scan_tree",
    "top5_labels",
]
