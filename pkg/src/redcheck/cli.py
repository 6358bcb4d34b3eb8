"""Command line harness: ``redcheck verify | report | cache``."""

from __future__ import annotations

import logging
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import cache as cache_mod
from .suites import SUITES, GridError, GridSpec, load_records, run_suite, summary_csv, summary_rows, write_reports

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log cache activity.")
def main(verbose: bool) -> None:
    """Exact finite checks of point counts, cohomology predictions, groups and series identities."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@main.command()
@click.argument("suite", type=click.Choice(SUITES + ("all",)), default="all")
@click.option("--grid", "grid_path", type=click.Path(dir_okay=False), help="JSON grid file.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="redcheck-out", show_default=True)
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True)
@click.option("--seed", type=int, help="Overrides the grid seed.")
@click.option("--budget", type=float, help="Overrides the grid budget (points per count).")
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Defaults to <out>/cache.")
@click.option("--no-cache", is_flag=True, help="Recompute every count.")
def verify(suite, grid_path, out_dir, jobs, seed, budget, cache_dir, no_cache):
    """Run SUITE over the grid; exit 0 if everything passes, 1 on any failure, 2 on a bad grid."""
    try:
        grid = GridSpec.load(grid_path) if grid_path else GridSpec()
        if suite != "all":
            grid = replace(grid, suites=(suite,))
        if seed is not None:
            grid = replace(grid, seed=seed)
        if budget is not None:
            grid = replace(grid, budget=budget)
    except GridError as ex:
        click.echo(f"configuration error: {ex}", err=True)
        sys.exit(EXIT_CONFIG)
    out = Path(out_dir)
    root = None if no_cache else str(Path(cache_dir) if cache_dir else out / "cache")
    result = run_suite(grid, jobs=jobs, cache_root=root)
    write_reports(result, out)
    click.echo(summary_csv(result.records), nl=False)
    if root:
        st = result.cache_stats
        click.echo(f"cache: {st['hits']} hits, {st['misses']} misses, {st['corrupt']} corrupt", err=True)
    sys.exit(EXIT_FAIL if result.failed else EXIT_OK)


@main.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="redcheck-out", show_default=True)
@click.option("--failures", is_flag=True, help="List failing records.")
def report(out_dir, failures):
    """Summarise the records of a previous run."""
    path = Path(out_dir) / "records.jsonl"
    if not path.exists():
        click.echo(f"no records at {path}", err=True)
        sys.exit(EXIT_CONFIG)
    records = load_records(path)
    for suite, row in summary_rows(records):
        parts = ", ".join(f"{k}={v}" for k, v in row.items() if v)
        click.echo(f"{suite}: {parts}")
    if failures:
        for r in records:
            if r.verdict == "fail":
                click.echo(r.to_json())
    sys.exit(EXIT_FAIL if any(r.verdict == "fail" for r in records) else EXIT_OK)


@main.group()
def cache():
    """Inspect or clear the count cache."""


@cache.command("inspect")
@click.option("--cache-dir", type=click.Path(file_okay=False), default="redcheck-out/cache", show_default=True)
def cache_inspect(cache_dir):
    info = cache_mod.inspect(Path(cache_dir))
    click.echo(f"{info['entries']} entries, {info['bytes']} bytes, {info['corrupt']} corrupt")


@cache.command("clear")
@click.option("--cache-dir", type=click.Path(file_okay=False), default="redcheck-out/cache", show_default=True)
def cache_clear(cache_dir):
    click.echo(f"removed {cache_mod.clear(Path(cache_dir))} entries")


if __name__ == "__main__":  # pragma: no cover
    main()
