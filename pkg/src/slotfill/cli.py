"""Command-line interface: one subcommand per pipeline stage.

    slotfill -c demo/config.yaml generate
    slotfill -c demo/config.yaml tune
    slotfill -c demo/config.yaml select --mechanism top_k --split test
    slotfill -c demo/config.yaml evaluate --split test
    slotfill -c demo/config.yaml calibrate --method subset --split test
    slotfill -c demo/config.yaml report --split test

Global flags override the corresponding config keys; the scorer URL can also
come from the SLOTFILL_SCORER_URL environment variable.
"""

from __future__ import annotations

import dataclasses
import logging
import sys
from pathlib import Path

import click

from . import pipeline
from .model import SlotfillError, Split
from .relconfig import load_run_config


def _apply_overrides(config, scorer_url, fixtures, jobs, seed, out):
    scorer = config.scorer
    if scorer_url:
        scorer = dataclasses.replace(scorer, mode="http", url=scorer_url)
    if fixtures:
        scorer = dataclasses.replace(scorer, mode="fixture", fixtures=Path(fixtures).resolve())
    updates = {"scorer": scorer}
    if jobs is not None:
        updates["jobs"] = jobs
    if seed is not None:
        updates["seed"] = seed
    if out is not None:
        updates["out_dir"] = Path(out).resolve()
    return dataclasses.replace(config, **updates)


@click.group()
@click.option("--config", "-c", "config_path", required=True, type=click.Path(exists=True),
              help="Run configuration file.")
@click.option("--scorer-url", default=None, help="HTTP scorer base URL (switches mode to http).")
@click.option("--fixtures", default=None, type=click.Path(exists=True),
              help="Fixture directory (switches mode to fixture).")
@click.option("--jobs", default=None, type=int, help="Parallel workers within a stage.")
@click.option("--seed", default=None, type=int, help="Run seed recorded in the manifest.")
@click.option("--out", default=None, type=click.Path(), help="Output directory override.")
@click.option("--verbose", "-v", is_flag=True, help="Log at INFO level.")
@click.pass_context
def main(ctx, config_path, scorer_url, fixtures, jobs, seed, out, verbose):
    """Probe masked-LM scorers for multi-valued relations: generate ranked
    candidates, select objects, tune parameters and evaluate."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    config = _apply_overrides(load_run_config(config_path), scorer_url, fixtures, jobs, seed, out)
    ctx.obj = config


def _run(config) -> pipeline.Run:
    return pipeline.Run(config)


def _fail(error: Exception) -> None:
    click.echo(f"error: {error}", err=True)
    sys.exit(1)


split_option = click.option(
    "--split", default="test", type=click.Choice([s.value for s in Split]),
    help="Dataset split to operate on.",
)


@main.command()
@click.pass_obj
def generate(config):
    """Probe the scorer and write post-processed candidate lists."""
    try:
        written = pipeline.stage_generate(_run(config))
    except SlotfillError as error:
        _fail(error)
    click.echo(f"generate: wrote {len(written)} files under {config.out_dir}")


def _parse_grid_overrides(specs):
    from .model import ConfigError, Mechanism

    grids = {}
    for spec in specs:
        name, _, values = spec.partition("=")
        if not values:
            raise ConfigError(f"--grid expects MECHANISM=v1,v2,..., got {spec!r}")
        mechanism = Mechanism(name.strip())
        parsed = [
            int(v) if mechanism is Mechanism.TOP_K else float(v)
            for v in values.split(",") if v.strip()
        ]
        if not parsed:
            raise ConfigError(f"--grid for {name} has no values")
        grids[mechanism] = tuple(parsed)
    return grids


@main.command()
@click.option("--split", default="train", type=click.Choice([s.value for s in Split]),
              help="Must be the train split; anything else is a purity error.")
@click.option("--grid", "grid_specs", multiple=True, metavar="MECHANISM=V1,V2,...",
              help="Override a mechanism's search grid, e.g. --grid top_k=1,2,3.")
@click.pass_obj
def tune(config, split, grid_specs):
    """Learn per-relation mechanism parameters on the train split."""
    try:
        if grid_specs:
            overrides = _parse_grid_overrides(grid_specs)
            config = dataclasses.replace(config, grids={**config.grids, **overrides})
        written = pipeline.stage_tune(_run(config), Split(split))
    except (SlotfillError, ValueError) as error:
        _fail(error)
    click.echo(f"tune: wrote {len(written)} parameter files")


@main.command()
@click.option("--mechanism", default="all", help="Mechanism name, comma list, or 'all'.")
@split_option
@click.pass_obj
def select(config, mechanism, split):
    """Apply selection mechanisms and export the accepted objects."""
    try:
        mechanisms = pipeline.parse_mechanisms(mechanism)
        written = pipeline.stage_select(_run(config), mechanisms, Split(split))
    except SlotfillError as error:
        _fail(error)
    click.echo(f"select: wrote {len(written)} selection files")


@main.command()
@click.option("--mechanism", default="all", help="Mechanism name, comma list, or 'all'.")
@split_option
@click.pass_obj
def evaluate(config, mechanism, split):
    """Score mechanisms against ground truth and write the evaluation JSON."""
    try:
        run = _run(config)
        mechanisms = pipeline.parse_mechanisms(mechanism)
        path = pipeline.stage_evaluate(run, Split(split), mechanisms)
    except SlotfillError as error:
        _fail(error)
    click.echo(f"evaluate: wrote {path}")


@main.command()
@click.option("--method", required=True, type=click.Choice(["subset", "rerank"]),
              help="Hit-rate calibration rule.")
@split_option
@click.pass_obj
def calibrate(config, method, split):
    """Calibrate candidate lists using external hit counts and rescore."""
    try:
        written, report_path = pipeline.stage_calibrate(_run(config), method, Split(split))
    except SlotfillError as error:
        _fail(error)
    click.echo(f"calibrate: wrote {len(written)} calibrated files and {report_path}")


@main.command()
@split_option
@click.pass_obj
def report(config, split):
    """Render tables, CSVs and figures; verifies manifest checksums first."""
    try:
        run = _run(config)
        txt_path = pipeline.stage_report(run, Split(split))
        manifest = run.manifest()
        orphans = manifest.orphans(config.out_dir)
    except SlotfillError as error:
        _fail(error)
    click.echo(txt_path.read_text(), nl=False)
    if orphans:
        click.echo(f"warning: {len(orphans)} file(s) under {config.out_dir} "
                   "are not tracked by the manifest:", err=True)
        for orphan in orphans:
            click.echo(f"  {orphan}", err=True)
    click.echo(f"report: wrote {txt_path.parent}")


if __name__ == "__main__":
    main()
