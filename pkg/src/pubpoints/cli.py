"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or parse error.
"""

from __future__ import annotations

import functools
import gzip
import logging
import os
import sys
from dataclasses import dataclass

import click

from . import report
from .corpus import CorpusSnapshot, Window, ingest_dblp, load_snapshot, normalize_name, save_snapshot
from .effort import REFERENCE_AREA, PointsTable, build_points_table
from .errors import PubPointsError
from .registry import Registry, load_registry
from .roster import Roster, load_roster
from .scoring import ANALYSIS_YEAR, alphabetical_areas_of


class DataError(click.ClickException):
    exit_code = 2


class _Group(click.Group):
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode, **extra)
        try:
            super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            sys.exit(1)
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        sys.exit(0)


@dataclass(frozen=True)
class RunConfig:
    dblp_path: str | None
    roster_path: str | None
    registry_path: str | None
    snapshot_path: str | None
    window: Window
    points_window: Window
    analysis_year: int
    reference_area: str
    output_format: str
    output_path: str

    def __post_init__(self):
        if self.analysis_year < self.window.end_year:
            raise click.UsageError(
                f"--analysis-year {self.analysis_year} precedes the window end {self.window.end_year}"
            )


def _window(ctx, param, value):
    try:
        return Window.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def common_options(fn):
    options = [
        click.option("--dblp", "dblp_path", type=click.Path(dir_okay=False), help="DBLP XML dump (.xml or .xml.gz)."),
        click.option("--roster", "roster_path", type=click.Path(dir_okay=False), help="CSRankings-format faculty CSV."),
        click.option("--registry", "registry_path", type=click.Path(dir_okay=False), help="Area/conference table; defaults built in."),
        click.option("--snapshot", "snapshot_path", type=click.Path(dir_okay=False), help="Snapshot cache: read if present, else written after ingest."),
        click.option("--window", default="2019-2023", show_default=True, callback=_window, help="Inclusive scoring window."),
        click.option("--points-window", default="2019-2023", show_default=True, callback=_window, help="Window used to derive per-area points."),
        click.option("--analysis-year", type=int, default=ANALYSIS_YEAR, show_default=True),
        click.option("--reference-area", default=REFERENCE_AREA, show_default=True),
        click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
        click.option("--out", "output_path", default="-", help="Output file; '-' for stdout."),
    ]

    @functools.wraps(fn)
    def wrapper(dblp_path, roster_path, registry_path, snapshot_path, window, points_window,
                analysis_year, reference_area, output_format, output_path, **kwargs):
        config = RunConfig(dblp_path, roster_path, registry_path, snapshot_path, window, points_window,
                           analysis_year, reference_area, output_format, output_path)
        try:
            return fn(config, **kwargs)
        except (PubPointsError, OSError, ValueError) as exc:
            raise DataError(str(exc)) from None

    for option in reversed(options):
        wrapper = option(wrapper)
    return wrapper


def _registry(config: RunConfig) -> Registry:
    return load_registry(config.registry_path)


def _open_dblp(path):
    with open(path, "rb") as probe:
        magic = probe.read(2)
    return gzip.open(path, "rb") if magic == b"\x1f\x8b" else open(path, "rb")


def _ingest(path, registry: Registry) -> CorpusSnapshot:
    with _open_dblp(path) as fh:
        return ingest_dblp(fh, registry)


def _corpus(config: RunConfig, registry: Registry) -> CorpusSnapshot:
    if config.snapshot_path and os.path.exists(config.snapshot_path):
        return load_snapshot(config.snapshot_path)
    if not config.dblp_path:
        raise click.UsageError("need --snapshot (existing file) or --dblp")
    snapshot = _ingest(config.dblp_path, registry)
    if config.snapshot_path:
        save_snapshot(snapshot, config.snapshot_path)
    return snapshot


def _roster(config: RunConfig) -> Roster:
    if not config.roster_path:
        raise click.UsageError("--roster is required for this command")
    return load_roster(config.roster_path)


def _points(config: RunConfig, registry: Registry, roster: Roster, snapshot: CorpusSnapshot) -> PointsTable:
    return build_points_table(roster, snapshot, config.points_window, config.reference_area, registry.area_abbrevs)


def _emit(config: RunConfig, table: report.Table) -> None:
    text = table.render(config.output_format)
    if config.output_path == "-":
        click.echo(text, nl=False)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _read_names(names, names_file) -> list[str]:
    out = list(names)
    if names_file:
        with open(names_file, encoding="utf-8") as fh:
            out.extend(line for line in fh if line.strip() and not line.startswith("#"))
    return sorted({normalize_name(n) for n in out})


@click.group(cls=_Group)
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
@click.version_option(package_name="pubpoints")
def cli(verbose):
    """Effort-normalized publication points from DBLP and a faculty roster."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@cli.command()
@common_options
def ingest(config: RunConfig):
    """Parse the DBLP dump once and write a snapshot (to --snapshot, else --out)."""
    dest = config.snapshot_path or (config.output_path if config.output_path != "-" else None)
    if not config.dblp_path:
        raise click.UsageError("--dblp is required")
    if dest is None:
        raise click.UsageError("give --snapshot or --out for the snapshot file")
    snapshot = _ingest(config.dblp_path, _registry(config))
    save_snapshot(snapshot, dest)
    st = snapshot.stats
    click.echo(f"scanned {st.records_scanned} matched {st.records_matched} skipped {st.records_skipped}")


@cli.command()
@click.option("--counts", "counts_path", type=click.Path(dir_okay=False),
              help="Pre-aggregated area,faculty_count,publication_count CSV instead of a corpus.")
@common_options
def points(config: RunConfig, counts_path):
    """Per-area faculty effort, publication count and points."""
    registry = _registry(config)
    if counts_path:
        with open(counts_path, newline="", encoding="utf-8") as fh:
            F, P = report.read_counts_fixture(fh)
        table = report.points_from_counts(F, P, registry, config.reference_area)
    else:
        roster = _roster(config)
        snapshot = _corpus(config, registry)
        table = build_points_table(roster, snapshot, config.window, config.reference_area, registry.area_abbrevs)
    for area in table.undefined:
        click.echo(f"warning: area {area} undefined (no publications or no faculty effort)", err=True)
    _emit(config, report.points_report(table, registry))


@cli.command("rank-schools")
@common_options
def rank_schools(config: RunConfig):
    """Rank schools by adjusted points next to the geometric-mean baseline."""
    registry = _registry(config)
    roster = _roster(config)
    snapshot = _corpus(config, registry)
    table = _points(config, registry, roster, snapshot)
    _emit(config, report.rank_schools_report(
        roster, snapshot, table, config.window, config.analysis_year, len(registry.areas)))


@cli.command("score-person")
@click.argument("names", nargs=-1)
@click.option("--names-file", type=click.Path(dir_okay=False), help="One DBLP name per line.")
@click.option("--pubs-file", type=click.Path(dir_okay=False),
              help="name,key CSV: score each person over only the listed DBLP keys.")
@common_options
def score_person(config: RunConfig, names, names_file, pubs_file):
    """Score people (faculty or candidates) by DBLP name or by publication list."""
    people = _read_names(names, names_file)
    if pubs_file and people:
        raise click.UsageError("--pubs-file cannot be combined with names")
    if not (people or pubs_file):
        raise click.UsageError("no names given")
    registry = _registry(config)
    roster = _roster(config)
    snapshot = _corpus(config, registry)
    table = _points(config, registry, roster, snapshot)
    alphabetical = alphabetical_areas_of(registry)
    if pubs_file:
        with open(pubs_file, newline="", encoding="utf-8") as fh:
            lists = report.read_publication_lists(fh)
        out, missing = report.score_publication_lists(
            lists, snapshot, table, config.window, config.analysis_year, alphabetical)
        for item in missing:
            click.echo(f"warning: not in corpus: {item}", err=True)
    else:
        out = report.score_person_report(people, snapshot, table, config.window, config.analysis_year, alphabetical)
    _emit(config, out)


@cli.command()
@click.argument("schools", nargs=-1, required=True)
@common_options
def radar(config: RunConfig, schools):
    """Adjusted points per area for each school."""
    registry = _registry(config)
    roster = _roster(config)
    snapshot = _corpus(config, registry)
    table = _points(config, registry, roster, snapshot)
    _emit(config, report.radar_report(schools, roster, snapshot, table, registry, config.window, config.analysis_year))


@cli.command()
@click.option("--metric", type=click.Choice(report.METRICS), default="total", show_default=True)
@click.option("--bin-width", type=float, required=True)
@click.option("--names-file", type=click.Path(dir_okay=False),
              help="Population to bin (e.g. candidates); defaults to every roster member.")
@common_options
def hist(config: RunConfig, metric, bin_width, names_file):
    """Histogram of a per-person metric."""
    if not bin_width > 0:
        raise click.BadParameter(f"must be positive, got {bin_width}", param_hint="--bin-width")
    registry = _registry(config)
    roster = _roster(config)
    snapshot = _corpus(config, registry)
    table = _points(config, registry, roster, snapshot)
    people = _read_names((), names_file) if names_file else [r.dblp_name for r in roster.records]
    records = report.score_people(
        people, snapshot, table, config.window, config.analysis_year, alphabetical_areas_of(registry))
    _emit(config, report.hist_report(records, metric, bin_width))


def main(argv=None):
    cli.main(args=argv, prog_name="pubpoints")


if __name__ == "__main__":
    main()
