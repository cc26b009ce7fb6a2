"""Tabular outputs: row builders for each command and csv/json rendering.

Rows are plain dicts with a fixed column order. Every table is sorted by an
explicit key so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import CorpusSnapshot, Window, normalize_name
from .effort import PointsTable, compute_points
from .errors import PubPointsError
from .registry import Registry
from .roster import Roster
from .scoring import (
    CsrBaselineInput,
    ScoreRecord,
    csr_score,
    person_score,
    rank,
    rank_delta,
    school_adjusted_counts,
    school_score,
)

METRICS = ("total", "adjusted", "per_year", "adjusted_per_year", "first_author")


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: list[dict]
    meta: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_display(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = dict(self.meta)
        doc["columns"] = list(self.columns)
        doc["rows"] = [{c: row[c] for c in self.columns} for row in self.rows]
        return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {fmt!r}")


def _display(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def read_counts_fixture(source) -> tuple[dict[str, float], dict[str, int]]:
    """Pre-aggregated ``area,faculty_count,publication_count`` rows."""
    reader = csv.DictReader(source)
    expected = {"area", "faculty_count", "publication_count"}
    if reader.fieldnames is None or not expected <= set(reader.fieldnames):
        raise PubPointsError(f"counts fixture needs columns {sorted(expected)}, got {reader.fieldnames}")
    F, P = {}, {}
    for lineno, row in enumerate(reader, start=2):
        area = row["area"].strip()
        try:
            F[area] = float(row["faculty_count"])
            P[area] = int(row["publication_count"])
        except ValueError as exc:
            raise PubPointsError(f"counts fixture line {lineno}: {exc}") from None
        if F[area] < 0 or P[area] < 0:
            raise PubPointsError(f"counts fixture line {lineno}: negative count")
    return F, P


def points_from_counts(F, P, registry: Registry, reference_area: str, window: Window | None = None) -> PointsTable:
    unknown = sorted((set(F) | set(P)) - set(registry.area_abbrevs))
    if unknown:
        raise PubPointsError(f"counts fixture names areas missing from the registry: {', '.join(unknown)}")
    return compute_points(F, P, reference_area, window, registry.area_abbrevs)


def points_report(table: PointsTable, registry: Registry) -> Table:
    rows = []
    for area in registry.areas_by_name():
        st = table.stats.get(area.abbrev)
        if st is None or not st.defined:
            continue
        rows.append(
            {
                "area": area.name,
                "abbrev": area.abbrev,
                "faculty_count": st.faculty_effort,
                "publication_count": st.pub_count,
                "faculties_per_publication": st.faculties_per_pub,
                "points": st.points,
            }
        )
    meta = {
        "command": "points",
        "reference_area": table.reference_area,
        "window": str(table.window) if table.window else None,
        "undefined": list(table.undefined),
    }
    columns = ("area", "abbrev", "faculty_count", "publication_count", "faculties_per_publication", "points")
    return Table(columns, rows, meta)


def rank_schools_report(
    roster: Roster,
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    analysis_year: int,
    area_count: int,
) -> Table:
    scores = {
        s: school_score(s, roster, snapshot, points_table, window, analysis_year).adjusted_total
        for s in roster.schools
    }
    baseline = {
        s: csr_score(CsrBaselineInput(school_adjusted_counts(s, roster, snapshot, window), area_count))
        for s in roster.schools
    }
    ours, theirs = rank(scores), rank(baseline)
    delta = rank_delta(ours, theirs)
    base_rank = theirs.ranks()
    rows = [
        {
            "rank": e.rank,
            "school": e.entity,
            "points": e.score,
            "baseline_rank": base_rank[e.entity],
            "delta": delta[e.entity],
        }
        for e in ours
    ]
    meta = {"command": "rank-schools", "window": str(window), "baseline_areas": area_count}
    return Table(("rank", "school", "points", "baseline_rank", "delta"), rows, meta)


def score_rows(records: Iterable[ScoreRecord], found: Mapping[str, bool]) -> Table:
    rows = []
    for rec in sorted(records, key=lambda r: r.entity):
        rows.append(
            {
                "name": rec.entity,
                "num_areas": rec.num_areas,
                "first_year": rec.first_year,
                "total": rec.total,
                "adjusted": rec.adjusted_total,
                "per_year": rec.per_year,
                "adjusted_per_year": rec.adjusted_per_year,
                "first_author_total": rec.first_author_total,
                "unscored": rec.unscored,
                "in_corpus": found[rec.entity],
            }
        )
    columns = (
        "name",
        "num_areas",
        "first_year",
        "total",
        "adjusted",
        "per_year",
        "adjusted_per_year",
        "first_author_total",
        "unscored",
        "in_corpus",
    )
    return Table(columns, rows, {"command": "score-person"})


def score_people(
    names: Iterable[str],
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    analysis_year: int,
    alphabetical_areas: frozenset[str],
) -> list[ScoreRecord]:
    return [
        person_score(n, snapshot, points_table, window, analysis_year, alphabetical_areas)
        for n in sorted(set(names))
    ]


def score_person_report(names, snapshot, points_table, window, analysis_year, alphabetical_areas) -> Table:
    records = score_people(names, snapshot, points_table, window, analysis_year, alphabetical_areas)
    found = {r.entity: bool(snapshot.publications_of(r.entity)) for r in records}
    table = score_rows(records, found)
    table.meta["window"] = str(window)
    table.meta["analysis_year"] = analysis_year
    return table


def read_publication_lists(source) -> dict[str, list[str]]:
    """Read a ``name,key`` CSV: one row per (person, DBLP key) pair."""
    reader = csv.DictReader(source)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["name", "key"]:
        raise PubPointsError(f"publication list header must be name,key, got {reader.fieldnames}")
    lists: dict[str, list[str]] = {}
    for lineno, row in enumerate(reader, start=2):
        name, key = normalize_name(row["name"] or ""), (row["key"] or "").strip()
        if not name or not key:
            raise PubPointsError(f"publication list line {lineno}: empty name or key")
        lists.setdefault(name, []).append(key)
    return lists


def score_publication_lists(
    lists: Mapping[str, Sequence[str]],
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    analysis_year: int,
    alphabetical_areas: frozenset[str],
) -> tuple[Table, list[str]]:
    """Score each person over exactly the listed publications.

    Keys absent from the snapshot (unmatched venue, or not in DBLP) are returned
    as ``name: key`` strings; a listed paper that does not carry the person's
    name is an error.
    """
    by_key = {p.key: p for p in snapshot.publications}
    records, found, missing = [], {}, []
    for name in sorted(lists):
        pubs = []
        for key in sorted(set(lists[name])):
            pub = by_key.get(key)
            if pub is None:
                missing.append(f"{name}: {key}")
            elif name not in pub.authors:
                raise PubPointsError(f"{key} does not list {name!r} as an author")
            else:
                pubs.append(pub)
        records.append(person_score(name, CorpusSnapshot(tuple(pubs)), points_table, window,
                                    analysis_year, alphabetical_areas))
        found[name] = bool(pubs)
    table = score_rows(records, found)
    table.meta.update(window=str(window), analysis_year=analysis_year, missing=missing)
    return table, missing


def radar_report(
    schools: Sequence[str],
    roster: Roster,
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    registry: Registry,
    window: Window,
    analysis_year: int,
) -> Table:
    areas = [a.abbrev for a in registry.areas_by_name()]
    rows = []
    for school in sorted(set(schools)):
        rec = school_score(school, roster, snapshot, points_table, window, analysis_year)
        row = {"school": school}
        row.update({a: rec.adjusted_breakdown.get(a, 0.0) for a in areas})
        rows.append(row)
    return Table(("school", *areas), rows, {"command": "radar", "window": str(window)})


def histogram(scores: Iterable[float], bin_width: float) -> list[tuple[float, int]]:
    """Left-closed, right-open bins starting at 0; trailing empty bins dropped."""
    if not (bin_width > 0 and math.isfinite(bin_width)):
        raise ValueError(f"bin width must be positive, got {bin_width}")
    counts: dict[int, int] = {}
    for s in scores:
        if s < 0:
            raise ValueError(f"negative score {s}")
        idx = math.floor(s / bin_width)
        counts[idx] = counts.get(idx, 0) + 1
    if not counts:
        return []
    return [(i * bin_width, counts.get(i, 0)) for i in range(max(counts) + 1)]


def metric_value(rec: ScoreRecord, metric: str) -> float:
    return {
        "total": rec.total,
        "adjusted": rec.adjusted_total,
        "per_year": rec.per_year,
        "adjusted_per_year": rec.adjusted_per_year,
        "first_author": rec.first_author_total,
    }[metric]


def hist_report(records: Sequence[ScoreRecord], metric: str, bin_width: float) -> Table:
    bins = histogram((metric_value(r, metric) for r in records), bin_width)
    rows = [{"lower_edge": edge, "count": n} for edge, n in bins]
    meta = {"command": "hist", "metric": metric, "bin_width": bin_width, "entities": len(records)}
    return Table(("lower_edge", "count"), rows, meta)
