"""Robustness benchmarking of image classifiers under parameterized
corruption, with word-error-rate scoring and safety-integrity-level
mapping for the resulting failure rates."""

from .corruptions import CorruptionKind, CorruptionSpec, apply, magnitude
from .dataset import ManifestEntry, corrupt_dataset, derive_seed, read_manifest
from .evaluation import (
    AccuracyCurve,
    PredictionRecord,
    build_curves,
    emit_report,
    read_predictions,
    topk_accuracy,
)
from .ood import (
    DiscreteDistribution,
    GaussianSummary,
    OodLadderConfig,
    OodLevel,
    bin_ood_level,
    hausdorff,
    kl_divergence,
    mahalanobis,
)
from .sil import (
    Controllability,
    Exposure,
    FailureRate,
    Industry,
    OodProfile,
    RateBasis,
    RiskFactors,
    Severity,
    SilAssignment,
    asil_decompositions,
    asil_from_risk,
    min_interval_for_sil,
    ood_weighted_failure,
    rate_to_sil,
    required_accuracy,
    sil_to_max_rate,
)
from .wer import TranscriptPair, corpus_wer, read_transcripts, wer, word_errors

__version__ = "0.1.0"

__all__ = [
    "AccuracyCurve",
    "Controllability",
    "CorruptionKind",
    "CorruptionSpec",
    "DiscreteDistribution",
    "Exposure",
    "FailureRate",
    "GaussianSummary",
    "Industry",
    "ManifestEntry",
    "OodLadderConfig",
    "OodLevel",
    "OodProfile",
    "PredictionRecord",
    "RateBasis",
    "RiskFactors",
    "Severity",
    "SilAssignment",
    "TranscriptPair",
    "apply",
    "asil_decompositions",
    "asil_from_risk",
    "bin_ood_level",
    "build_curves",
    "corpus_wer",
    "corrupt_dataset",
    "derive_seed",
    "emit_report",
    "hausdorff",
    "kl_divergence",
    "magnitude",
    "mahalanobis",
    "min_interval_for_sil",
    "ood_weighted_failure",
    "rate_to_sil",
    "read_manifest",
    "read_predictions",
    "read_transcripts",
    "required_accuracy",
    "sil_to_max_rate",
    "topk_accuracy",
    "wer",
    "word_errors",
]
