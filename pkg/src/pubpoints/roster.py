"""Faculty roster in the CSRankings ``csrankings.csv`` format."""

from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass, field
from typing import IO

from .corpus import normalize_name
from .errors import RosterError

log = logging.getLogger(__name__)

HEADER = ["name", "affiliation", "homepage", "scholarid"]


@dataclass(frozen=True)
class FacultyRecord:
    dblp_name: str
    affiliation: str
    homepage: str | None = None
    scholar_id: str | None = None


@dataclass(frozen=True)
class Roster:
    records: tuple[FacultyRecord, ...]
    duplicate_rows: int = 0
    by_name: dict[str, FacultyRecord] = field(init=False, repr=False, compare=False)
    by_school: dict[str, tuple[FacultyRecord, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(sorted(self.records, key=lambda r: r.dblp_name))
        by_name = {}
        by_school: dict[str, list[FacultyRecord]] = {}
        for rec in records:
            if rec.dblp_name in by_name:
                raise RosterError(f"duplicate roster name {rec.dblp_name!r}")
            by_name[rec.dblp_name] = rec
            by_school.setdefault(rec.affiliation, []).append(rec)
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "by_name", by_name)
        object.__setattr__(self, "by_school", {k: tuple(v) for k, v in sorted(by_school.items())})

    def __len__(self) -> int:
        return len(self.records)

    @property
    def schools(self) -> list[str]:
        return list(self.by_school)

    def members(self, school: str) -> tuple[FacultyRecord, ...]:
        try:
            return self.by_school[school]
        except KeyError:
            raise RosterError(f"unknown school {school!r}") from None


def _read(source: IO[str]) -> Roster:
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != HEADER:
        raise RosterError(f"roster header must be {','.join(HEADER)}, got {header!r}")
    seen: dict[str, tuple[int, FacultyRecord]] = {}
    duplicates = 0
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(HEADER):
            raise RosterError(f"line {lineno}: expected {len(HEADER)} fields, got {len(row)}")
        name, affiliation = normalize_name(row[0]), row[1].strip()
        if not name or not affiliation:
            raise RosterError(f"line {lineno}: name and affiliation are required")
        rec = FacultyRecord(name, affiliation, row[2].strip() or None, row[3].strip() or None)
        if name in seen:
            first_line, first = seen[name]
            if first.affiliation != rec.affiliation:
                raise RosterError(
                    f"{name!r} listed with conflicting affiliations: "
                    f"line {first_line} ({first.affiliation}) and line {lineno} ({rec.affiliation})"
                )
            duplicates += 1
            continue
        seen[name] = (lineno, rec)
    if duplicates:
        log.warning("dropped %d duplicate roster rows", duplicates)
    return Roster(tuple(rec for _, rec in seen.values()), duplicates)


def load_roster(csv_source: str | os.PathLike | IO[str]) -> Roster:
    if hasattr(csv_source, "read"):
        return _read(csv_source)
    with open(csv_source, newline="", encoding="utf-8") as fh:
        return _read(fh)


def match_author(author_name: str, roster: Roster) -> FacultyRecord | None:
    """Exact lookup after whitespace normalization; homonym suffixes are significant."""
    return roster.by_name.get(normalize_name(author_name))
