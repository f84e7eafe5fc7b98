"""Command-line entry point."""

from __future__ import annotations

import logging

import click

from .models import MODEL_NAMES, parse_models
from .predict import predict_tree


@click.group()
def main() -> None:
    """Run pretrained ImageNet classifiers over corrupted dataset trees."""


@main.command()
@click.option("--models", default="all", show_default=True,
              help=f"Comma list from: {', '.join(MODEL_NAMES)}; or 'all'.")
@click.option("--dataset", required=True, type=click.Path(exists=True, file_okay=False),
              help="Root of a corrupted-dataset tree (clean/ plus kind/level dirs).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--batch-size", default=32, show_default=True, type=click.IntRange(min=1))
def predict(models: str, dataset: str, out: str, batch_size: int) -> None:
    """Emit one JSON Lines prediction file per model."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        specs = parse_models(models)
        written = predict_tree(specs, dataset, out, batch_size=batch_size)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc)) from None
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
