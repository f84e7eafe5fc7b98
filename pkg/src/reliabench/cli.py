"""Command-line entry points."""

from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from . import dataset, evaluation, ood, sil
from .corruptions import MAX_LEVEL, MIN_LEVEL, CorruptionKind
from .wer import read_transcripts, score_pair

_ALL_KINDS = ", ".join(k.value for k in CorruptionKind)


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _parse_kinds(text: str) -> list[CorruptionKind] | None:
    if text == "all":
        return None
    try:
        return [CorruptionKind.parse(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _fail(exc) from None


def _parse_levels(text: str) -> list[int] | None:
    if text == "all":
        return None
    try:
        levels = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.ClickException(f"levels must be integers, got {text!r}") from None
    if not levels:
        raise click.ClickException("empty level list")
    bad = [lv for lv in levels if not MIN_LEVEL <= lv <= MAX_LEVEL]
    if bad:
        raise click.ClickException(
            f"levels must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {bad}"
        )
    return levels


@click.group()
def main() -> None:
    """Image-corruption robustness benchmark with safety-level mapping."""


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--kinds", default="all", show_default=True, help=f"Comma list from: {_ALL_KINDS}; or 'all'.")
@click.option("--levels", default="all", show_default=True, help="Comma list of levels 1-10, or 'all'.")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--angle", default=0.0, show_default=True, type=float, help="Motion-blur direction in degrees.")
def corrupt(manifest: str, out: str, kinds: str, levels: str, seed: int, angle: float) -> None:
    """Write corrupted copies of every manifest image at each severity level."""
    kind_list = _parse_kinds(kinds)
    level_list = _parse_levels(levels)
    try:
        entries = dataset.read_manifest(manifest)
        report = dataset.corrupt_dataset(
            entries, out, kinds=kind_list, levels=level_list, seed=seed, angle=angle
        )
    except (ValueError, OSError) as exc:
        raise _fail(exc) from None
    click.echo(f"clean images written: {report.clean_written}")
    click.echo(f"corrupted images written: {report.corrupted_written}")
    if report.skipped:
        click.echo(f"skipped (unreadable): {len(report.skipped)}")
    click.echo(f"report: {Path(out) / 'run_report.json'}")


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions", required=True, multiple=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--format", "fmt", default="both", show_default=True, type=click.Choice(["csv", "json", "both"]))
@click.option("--plot-data", is_flag=True, help="Also write per-curve level/accuracy files under plots/.")
def evaluate(manifest: str, predictions: tuple[str, ...], out: str, fmt: str, plot_data: bool) -> None:
    """Score prediction files against manifest labels and write accuracy curves."""
    try:
        entries = dataset.read_manifest(manifest)
        truth = dataset.label_map(entries)
        records: list[evaluation.PredictionRecord] = []
        for path in predictions:
            records.extend(evaluation.read_predictions(path))
        curves = evaluation.build_curves(records, truth)
        written = evaluation.emit_report(curves, out, fmt=fmt, plot_data=plot_data)
    except (ValueError, OSError) as exc:
        raise _fail(exc) from None
    click.echo(f"records scored: {len(records)}")
    click.echo(f"curves: {len(curves)}")
    for path in written:
        click.echo(f"wrote {path}")


@main.command("wer")
@click.option("--transcripts", required=True, type=click.Path(exists=True, dir_okay=False))
def wer_command(transcripts: str) -> None:
    """Word error rate per utterance and pooled over the whole file."""
    try:
        pairs = read_transcripts(transcripts)
        results = [score_pair(p) for p in pairs]
    except ValueError as exc:
        raise _fail(exc) from None
    for res in results:
        click.echo(
            f"{res.utterance_id}: {res.wer:.10g}% "
            f"({res.errors} errors / {res.reference_words} words)"
        )
    total_errors = sum(r.errors for r in results)
    total_words = sum(r.reference_words for r in results)
    click.echo(f"corpus: {100.0 * total_errors / total_words:.10g}%")


@main.group("sil")
def sil_group() -> None:
    """Safety-integrity-level tables and rate arithmetic."""


_INDUSTRIES = [i.value for i in sil.Industry]


@sil_group.command("rate-to-level")
@click.option("--industry", required=True, type=click.Choice(_INDUSTRIES))
@click.option("--rate", required=True, type=float, help="Probability of dangerous failure.")
@click.option("--basis", default="hour", show_default=True, type=click.Choice(["hour", "use"]))
def rate_to_level(industry: str, rate: float, basis: str) -> None:
    """Most demanding level whose threshold the failure rate meets."""
    try:
        assignment = sil.rate_to_sil(
            sil.Industry.parse(industry),
            sil.FailureRate(rate, sil.RateBasis(basis)),
        )
    except ValueError as exc:
        raise _fail(exc) from None
    click.echo(assignment.label)
    if assignment.max_rate is not None:
        click.echo(f"max rate: {assignment.max_rate.value:g} per {assignment.max_rate.basis.value}")
    if assignment.co_resident is not None:
        click.echo(f"co-resident level: {assignment.co_resident}")


@sil_group.command("required-accuracy")
@click.option("--demand-per-hour", required=True, type=float)
@click.option("--target-rate", required=True, type=float, help="Tolerable failures per hour.")
def required_accuracy_command(demand_per_hour: float, target_rate: float) -> None:
    """Accuracy needed to keep hourly failures within target at a demand rate."""
    try:
        target = sil.FailureRate(target_rate)
        accuracy = sil.required_accuracy(demand_per_hour, target)
        budget = sil.per_use_budget(demand_per_hour, target)
    except ValueError as exc:
        raise _fail(exc) from None
    click.echo(f"{accuracy:.10g}")
    click.echo(f"per-use failure budget: {budget:.10g}")


def _parse_factor(text: str, prefix: str, enum_cls):
    cleaned = text.strip().upper()
    if cleaned.startswith(prefix):
        cleaned = cleaned[len(prefix):]
    try:
        return enum_cls(int(cleaned))
    except (ValueError, KeyError):
        legal = ", ".join(f"{prefix}{m.value}" for m in enum_cls)
        raise click.ClickException(f"bad factor {text!r}; expected one of: {legal}") from None


@sil_group.command("asil")
@click.option("--s", "severity", required=True, help="Severity S1-S3.")
@click.option("--e", "exposure", required=True, help="Exposure E1-E4.")
@click.option("--c", "controllability", required=True, help="Controllability C1-C3.")
def asil_command(severity: str, exposure: str, controllability: str) -> None:
    """Automotive level from the severity/exposure/controllability matrix."""
    factors = sil.RiskFactors(
        severity=_parse_factor(severity, "S", sil.Severity),
        exposure=_parse_factor(exposure, "E", sil.Exposure),
        controllability=_parse_factor(controllability, "C", sil.Controllability),
    )
    click.echo(sil.asil_from_risk(factors))


@sil_group.command("ood-assess")
@click.option("--profile", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--demand-per-hour", required=True, type=float)
def ood_assess(profile: str, demand_per_hour: float) -> None:
    """Hourly failure rate implied by an OOD encounter profile, and the
    level it earns in each industry."""
    try:
        prof = sil.OodProfile.from_json(profile)
        rate = sil.ood_weighted_failure(prof, demand_per_hour)
    except ValueError as exc:
        raise _fail(exc) from None
    click.echo(f"{rate.value:.10g}")
    for industry in sil.Industry:
        click.echo(f"{industry.value}: {sil.rate_to_sil(industry, rate).label}")


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"{path}: {exc}") from None


def _ladder_config(path: str) -> ood.OodLadderConfig:
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("thresholds")
    if not isinstance(obj, list):
        raise click.ClickException(
            f"{path}: expected a JSON array of 4 thresholds "
            '(or {"thresholds": [...]})'
        )
    try:
        return ood.OodLadderConfig(thresholds=tuple(obj))
    except (TypeError, ValueError) as exc:
        raise _fail(exc) from None


@main.command("ood-distance")
@click.option("--metric", required=True, type=click.Choice(["mahalanobis", "kl", "hausdorff"]))
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--sample", "sample_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ladder", "ladder_path", type=click.Path(exists=True, dir_okay=False), help="Threshold file; adds the qualitative level to the output.")
def ood_distance(metric: str, ref_path: str, sample_path: str, ladder_path: str | None) -> None:
    """Distance from a sample to a reference.

    mahalanobis: ref is {"mean": [...], "covariance": [[...]]}, sample a
    vector. kl: both are probability arrays, reporting KL(sample, ref).
    hausdorff: both are arrays of points.
    """
    ref = _load_json(ref_path)
    sample = _load_json(sample_path)
    try:
        if metric == "mahalanobis":
            if not isinstance(ref, dict) or "mean" not in ref or "covariance" not in ref:
                raise ValueError(
                    f'{ref_path}: mahalanobis reference must be {{"mean": [...], "covariance": [[...]]}}'
                )
            summary = ood.GaussianSummary(
                mean=np.asarray(ref["mean"], dtype=np.float64),
                covariance=np.asarray(ref["covariance"], dtype=np.float64),
            )
            distance = ood.mahalanobis(sample, summary)
        elif metric == "kl":
            distance = ood.kl_divergence(
                ood.DiscreteDistribution(np.asarray(sample, dtype=np.float64)),
                ood.DiscreteDistribution(np.asarray(ref, dtype=np.float64)),
            )
        else:
            distance = ood.hausdorff(sample, ref)
    except ValueError as exc:
        raise _fail(exc) from None
    click.echo(f"{distance:.10g}")
    if ladder_path is not None:
        cfg = _ladder_config(ladder_path)
        click.echo(ood.bin_ood_level(distance, cfg).value)


if __name__ == "__main__":
    main()
