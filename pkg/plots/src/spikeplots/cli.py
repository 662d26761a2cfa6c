"""Command-line entry point: render a PlotSpec JSON file to an image."""

import sys

import click

from spikeplots.render import PlotSpec, SchemaError, render


@click.group()
def main():
    """Figure rendering for spikestab experiment CSVs."""


@main.command("render")
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True,
              help="PlotSpec JSON file.")
@click.option("--out", type=click.Path(), default=None,
              help="Override the output image path.")
def render_cmd(spec_path, out):
    """Render one figure from a PlotSpec JSON description."""
    try:
        spec = PlotSpec.from_json(spec_path)
        if out is not None:
            spec = PlotSpec(spec.kind, spec.csv, out, spec.log_x, spec.log_y, spec.overlay_C)
    except (ValueError, TypeError, KeyError) as exc:
        click.echo(f"spec error: {exc}", err=True)
        sys.exit(2)
    try:
        path = render(spec)
    except SchemaError as exc:
        click.echo(f"schema error: {exc}", err=True)
        sys.exit(2)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
