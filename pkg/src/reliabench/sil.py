"""Safety-integrity-level tables, the automotive risk matrix, and the
rate arithmetic tying classifier accuracy to tolerable failure rates."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional

from .ood import OOD_LEVELS, OodLevel


class Industry(Enum):
    AUTOMOTIVE = "automotive"
    AVIATION = "aviation"
    CNS_ATM = "cns-atm"
    IEC_61508 = "iec-61508"

    @classmethod
    def parse(cls, name: str) -> "Industry":
        for member in cls:
            if member.value == name:
                return member
        known = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown industry {name!r}; expected one of: {known}")


class RateBasis(Enum):
    PER_HOUR = "hour"
    PER_USE = "use"


@dataclass(frozen=True)
class FailureRate:
    """Probability of dangerous failure, per hour of operation or per use."""

    value: float
    basis: RateBasis = RateBasis.PER_HOUR

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"failure rate must be finite and >= 0, got {value!r}")
        if self.basis is RateBasis.PER_USE and value > 1:
            raise ValueError(f"per-use failure rate must be <= 1, got {value!r}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class SilAssignment:
    industry: Industry
    label: str
    max_rate: Optional[FailureRate]
    co_resident: Optional[str] = None

    @property
    def labels(self) -> tuple[str, ...]:
        """The label plus any co-resident sharing the same table cell."""
        if self.co_resident is None:
            return (self.label,)
        return (self.label, self.co_resident)


# Hourly ladders, most demanding level first. Third element marks a label
# sharing the cell (automotive C/B both sit at 1e-7/h; C is returned, B
# noted as co-resident). The final entry is the label for rates worse
# than every threshold; None means no level applies there.
_HOURLY_TABLES: dict[Industry, tuple[tuple[tuple[float, str, Optional[str]], ...], Optional[str]]] = {
    Industry.AUTOMOTIVE: (
        ((1e-8, "D", None), (1e-7, "C", "B"), (1e-6, "A", None)),
        None,
    ),
    Industry.AVIATION: (
        ((1e-9, "A", None), (1e-7, "B", None), (1e-5, "C", None), (1e-3, "D", None)),
        "E",
    ),
    Industry.CNS_ATM: (
        (
            (1e-9, "AL1", None),
            (1e-7, "AL2", None),
            (1e-5, "AL3", None),
            (1e-4, "AL4", None),
            (1e-3, "AL5", None),
        ),
        "AL6",
    ),
    Industry.IEC_61508: (
        ((1e-8, "SIL 4", None), (1e-7, "SIL 3", None), (1e-6, "SIL 2", None), (1e-5, "SIL 1", None)),
        None,
    ),
}

# IEC 61508 low-demand mode: probability of failure per use.
_PER_USE_TABLE: tuple[tuple[float, str], ...] = (
    (1e-4, "SIL 4"),
    (1e-3, "SIL 3"),
    (1e-2, "SIL 2"),
    (1e-1, "SIL 1"),
)

NO_LEVEL = "none"


def rate_to_sil(industry: Industry, rate: FailureRate) -> SilAssignment:
    """Most demanding level whose maximum tolerable rate the given rate
    meets (rate <= threshold qualifies).

    Rates worse than the weakest row fall to the industry's catch-all
    level where one exists (aviation E, CNS/ATM AL6) and to "none"
    otherwise. Per-use rates are only meaningful for IEC 61508
    low-demand mode.
    """
    if rate.basis is RateBasis.PER_USE:
        if industry is not Industry.IEC_61508:
            raise ValueError(
                f"per-use rates apply only to {Industry.IEC_61508.value} "
                f"low-demand mode, not {industry.value}"
            )
        for threshold, label in _PER_USE_TABLE:
            if rate.value <= threshold:
                return SilAssignment(
                    industry=industry,
                    label=label,
                    max_rate=FailureRate(threshold, RateBasis.PER_USE),
                )
        return SilAssignment(industry=industry, label=NO_LEVEL, max_rate=None)

    rows, floor_label = _HOURLY_TABLES[industry]
    for threshold, label, co_resident in rows:
        if rate.value <= threshold:
            return SilAssignment(
                industry=industry,
                label=label,
                max_rate=FailureRate(threshold, RateBasis.PER_HOUR),
                co_resident=co_resident,
            )
    if floor_label is not None:
        return SilAssignment(industry=industry, label=floor_label, max_rate=None)
    return SilAssignment(industry=industry, label=NO_LEVEL, max_rate=None)


def sil_to_max_rate(industry: Industry, label: str, basis: RateBasis = RateBasis.PER_HOUR) -> FailureRate:
    """Maximum tolerable failure rate for a level, straight from the table.

    Catch-all levels (aviation E, CNS/ATM AL6, "none") have no maximum and
    are rejected.
    """
    if basis is RateBasis.PER_USE:
        if industry is not Industry.IEC_61508:
            raise ValueError(
                f"per-use rates apply only to {Industry.IEC_61508.value} low-demand mode"
            )
        for threshold, row_label in _PER_USE_TABLE:
            if row_label == label:
                return FailureRate(threshold, RateBasis.PER_USE)
        known = ", ".join(l for _, l in _PER_USE_TABLE)
        raise ValueError(f"unknown per-use level {label!r}; expected one of: {known}")

    rows, floor_label = _HOURLY_TABLES[industry]
    for threshold, row_label, co_resident in rows:
        if label == row_label or label == co_resident:
            return FailureRate(threshold, RateBasis.PER_HOUR)
    if label == floor_label or label == NO_LEVEL:
        raise ValueError(f"level {label!r} has no maximum rate in the {industry.value} table")
    known = [l for _, l, _ in rows]
    known += [c for _, _, c in rows if c is not None]
    raise ValueError(
        f"unknown {industry.value} level {label!r}; expected one of: {', '.join(known)}"
    )


class Severity(Enum):
    S1 = 1
    S2 = 2
    S3 = 3


class Exposure(Enum):
    E1 = 1
    E2 = 2
    E3 = 3
    E4 = 4


class Controllability(Enum):
    C1 = 1
    C2 = 2
    C3 = 3


@dataclass(frozen=True)
class RiskFactors:
    severity: Severity
    exposure: Exposure
    controllability: Controllability


ASIL_LABELS = (NO_LEVEL, "A", "B", "C", "D")

# Risk matrix: (severity, exposure) -> labels for C1, C2, C3.
_ASIL_MATRIX: dict[tuple[Severity, Exposure], tuple[str, str, str]] = {
    (Severity.S1, Exposure.E1): (NO_LEVEL, NO_LEVEL, NO_LEVEL),
    (Severity.S1, Exposure.E2): (NO_LEVEL, NO_LEVEL, NO_LEVEL),
    (Severity.S1, Exposure.E3): (NO_LEVEL, NO_LEVEL, "A"),
    (Severity.S1, Exposure.E4): (NO_LEVEL, "A", "B"),
    (Severity.S2, Exposure.E1): (NO_LEVEL, NO_LEVEL, NO_LEVEL),
    (Severity.S2, Exposure.E2): (NO_LEVEL, NO_LEVEL, "A"),
    (Severity.S2, Exposure.E3): (NO_LEVEL, "A", "B"),
    (Severity.S2, Exposure.E4): ("A", "B", "C"),
    (Severity.S3, Exposure.E1): (NO_LEVEL, NO_LEVEL, "A"),
    (Severity.S3, Exposure.E2): (NO_LEVEL, "A", "B"),
    (Severity.S3, Exposure.E3): ("A", "B", "C"),
    (Severity.S3, Exposure.E4): ("B", "C", "D"),
}


def asil_from_risk(factors: RiskFactors) -> str:
    """Look up the automotive level for a severity/exposure/controllability
    combination."""
    row = _ASIL_MATRIX[(factors.severity, factors.exposure)]
    return row[factors.controllability.value - 1]


def asil_ordinal(label: str) -> int:
    try:
        return ASIL_LABELS.index(label)
    except ValueError:
        raise ValueError(
            f"unknown ASIL label {label!r}; expected one of: {', '.join(ASIL_LABELS)}"
        ) from None


def asil_decompositions(label: str) -> set[tuple[str, str]]:
    """Unordered pairs of levels that jointly cover the given level under
    the additive rule: ordinals (none=0, A=1 .. D=4) must sum to at least
    the target's ordinal. Pairs come back (stronger, weaker)."""
    target = asil_ordinal(label)
    if target == 0:
        raise ValueError("decomposition applies to levels A through D, not 'none'")
    pairs = set()
    for i, first in enumerate(ASIL_LABELS):
        for second in ASIL_LABELS[: i + 1]:
            if asil_ordinal(first) + asil_ordinal(second) >= target:
                pairs.add((first, second))
    return pairs


def required_accuracy(demand_rate: float, target: FailureRate) -> float:
    """Accuracy a classifier must sustain so that errors at the given
    demand rate (uses per hour) stay within the hourly failure target.

    Equals 1 - target/demand, floored at zero. A target above the demand
    rate means any accuracy suffices; that degenerate case returns 0 with
    a warning.
    """
    if not (math.isfinite(demand_rate) and demand_rate > 0):
        raise ValueError(f"demand rate must be positive and finite, got {demand_rate!r}")
    if target.basis is not RateBasis.PER_HOUR:
        raise ValueError("target must be a per-hour rate")
    budget = target.value / demand_rate
    if budget > 1:
        warnings.warn(
            f"target rate {target.value}/h exceeds demand rate {demand_rate}/h; "
            "even an always-wrong classifier meets it",
            stacklevel=2,
        )
        return 0.0
    return 1.0 - budget


def per_use_budget(demand_rate: float, target: FailureRate) -> float:
    """Per-use failure probability implied by an hourly target at a given
    demand rate."""
    if not (math.isfinite(demand_rate) and demand_rate > 0):
        raise ValueError(f"demand rate must be positive and finite, got {demand_rate!r}")
    if target.basis is not RateBasis.PER_HOUR:
        raise ValueError("target must be a per-hour rate")
    return target.value / demand_rate


def min_interval_for_sil(per_use_failure: float, target: FailureRate) -> float:
    """Hours that must separate uses for a given per-use failure
    probability to stay within an hourly target."""
    if not (0 < per_use_failure <= 1):
        raise ValueError(f"per-use failure must be in (0, 1], got {per_use_failure!r}")
    if target.basis is not RateBasis.PER_HOUR:
        raise ValueError("target must be a per-hour rate")
    if target.value == 0:
        raise ValueError("target rate 0 admits no finite interval")
    return per_use_failure / target.value


@dataclass(frozen=True)
class OodProfile:
    """Encounter frequency and per-use failure rate for each qualitative
    OOD level. Frequencies cover all inputs, so they sum to one."""

    entries: Mapping[OodLevel, tuple[float, float]]

    def __post_init__(self) -> None:
        entries = dict(self.entries)
        missing = [lv.value for lv in OOD_LEVELS if lv not in entries]
        if missing:
            raise ValueError(f"profile missing levels: {', '.join(missing)}")
        extra = set(entries) - set(OOD_LEVELS)
        if extra:
            raise ValueError(f"profile has unknown levels: {sorted(extra)!r}")
        fixed = {}
        for level in OOD_LEVELS:
            freq, fail = entries[level]
            freq = float(freq)
            fail = float(fail)
            if not (0 <= freq <= 1):
                raise ValueError(f"{level.value}: frequency must be in [0, 1], got {freq!r}")
            if not (0 <= fail <= 1):
                raise ValueError(f"{level.value}: failure rate must be in [0, 1], got {fail!r}")
            fixed[level] = (freq, fail)
        total = math.fsum(freq for freq, _ in fixed.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"frequencies must sum to 1, got {total!r}")
        object.__setattr__(self, "entries", fixed)

    @classmethod
    def from_dict(cls, obj: Mapping) -> "OodProfile":
        entries = {}
        for name, cell in obj.items():
            level = OodLevel.parse(str(name))
            try:
                entries[level] = (cell["frequency"], cell["failure_rate"])
            except (TypeError, KeyError):
                raise ValueError(
                    f"{name}: expected an object with frequency and failure_rate"
                ) from None
        return cls(entries=entries)

    @classmethod
    def from_json(cls, path: str | Path) -> "OodProfile":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        if not isinstance(obj, dict):
            raise ValueError(f"{path}: profile must be a JSON object keyed by level name")
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {
            level.value: {"frequency": freq, "failure_rate": fail}
            for level, (freq, fail) in self.entries.items()
        }


def ood_weighted_failure(profile: OodProfile, demand_rate: float) -> FailureRate:
    """Hourly failure rate from mixing per-level failure rates by how
    often each level is encountered, at the given demand rate."""
    if not (math.isfinite(demand_rate) and demand_rate > 0):
        raise ValueError(f"demand rate must be positive and finite, got {demand_rate!r}")
    mean_failure = math.fsum(freq * fail for freq, fail in profile.entries.values())
    return FailureRate(demand_rate * mean_failure, RateBasis.PER_HOUR)
