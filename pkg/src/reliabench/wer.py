"""Word error rate via word-level edit distance."""

from __future__ import annotations

import csv
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

TRANSCRIPT_FIELDS = ("utterance_id", "reference", "hypothesis")

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace."""
    return text.lower().translate(_PUNCT_TABLE).split()


def word_errors(reference: Sequence[str], hypothesis: Sequence[str]) -> int:
    """Minimum substitutions + deletions + insertions turning reference
    into hypothesis (unit costs)."""
    ref = list(reference)
    hyp = list(hypothesis)
    if not ref:
        return len(hyp)
    if not hyp:
        return len(ref)
    prev = list(range(len(hyp) + 1))
    for i, rw in enumerate(ref, start=1):
        cur = [i] + [0] * len(hyp)
        for j, hw in enumerate(hyp, start=1):
            cur[j] = min(
                prev[j] + 1,  # deletion
                cur[j - 1] + 1,  # insertion
                prev[j - 1] + (rw != hw),  # substitution / match
            )
        prev = cur
    return prev[-1]


def wer(reference: str, hypothesis: str) -> float:
    """Word error rate in percent: 100 * (S + D + I) / reference length.

    Both strings are tokenized first. An empty reference is an error, the
    rate is undefined there.
    """
    ref = tokenize(reference)
    hyp = tokenize(hypothesis)
    if not ref:
        raise ValueError("reference tokenizes to zero words, WER is undefined")
    return 100.0 * word_errors(ref, hyp) / len(ref)


@dataclass(frozen=True)
class TranscriptPair:
    utterance_id: str
    reference: str
    hypothesis: str


@dataclass(frozen=True)
class WerResult:
    utterance_id: str
    errors: int
    reference_words: int
    wer: float


def score_pair(pair: TranscriptPair) -> WerResult:
    ref = tokenize(pair.reference)
    hyp = tokenize(pair.hypothesis)
    if not ref:
        raise ValueError(
            f"utterance {pair.utterance_id!r}: reference tokenizes to zero words"
        )
    errors = word_errors(ref, hyp)
    return WerResult(
        utterance_id=pair.utterance_id,
        errors=errors,
        reference_words=len(ref),
        wer=100.0 * errors / len(ref),
    )


def corpus_wer(pairs: Sequence[TranscriptPair]) -> float:
    """Pooled rate: total errors over total reference words, in percent.

    Not the mean of per-utterance rates; long utterances weigh more.
    """
    if not pairs:
        raise ValueError("cannot compute corpus WER over zero utterances")
    results = [score_pair(p) for p in pairs]
    total_errors = sum(r.errors for r in results)
    total_words = sum(r.reference_words for r in results)
    return 100.0 * total_errors / total_words


def read_transcripts(path: str | Path) -> list[TranscriptPair]:
    """Read a transcript CSV with header utterance_id,reference,hypothesis."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty transcript file")
        if tuple(reader.fieldnames) != TRANSCRIPT_FIELDS:
            raise ValueError(
                f"{path}: expected header {','.join(TRANSCRIPT_FIELDS)}, "
                f"got {','.join(reader.fieldnames)}"
            )
        pairs = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            uid = (row["utterance_id"] or "").strip()
            if not uid:
                raise ValueError(f"{path}:{lineno}: empty utterance_id")
            if uid in seen:
                raise ValueError(f"{path}:{lineno}: duplicate utterance_id {uid!r}")
            seen.add(uid)
            pairs.append(
                TranscriptPair(
                    utterance_id=uid,
                    reference=row["reference"] or "",
                    hypothesis=row["hypothesis"] or "",
                )
            )
    if not pairs:
        raise ValueError(f"{path}: transcript file has a header but no rows")
    return pairs
