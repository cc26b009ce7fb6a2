"""Area / conference taxonomy and DBLP key resolution.

The registry is stored as a flat table, one row per key pattern::

    parent,area,area_name,conference,pattern,years
    AI,mlmining,Machine learning,ICLR,conf/iclr/,
    Systems,plan,Programming languages,POPL,journals/pacmpl/#POPL,2018-2099

``pattern`` is a case-sensitive prefix of the DBLP record key. A ``#suffix``
restricts the pattern to records whose ``<number>`` element starts with
``suffix``; this is how conference proceedings published as journal issues
(PACMPL, TOG, ...) are told apart from regular issues. ``years`` is empty or
an inclusive ``YYYY-YYYY`` range.

A row whose ``parent`` and ``area_name`` are both empty refers to an area
declared by another row. A row with empty ``conference`` and ``pattern``
declares an area without conferences.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import IO, Iterable

from .errors import RegistryError

HEADER = ["parent", "area", "area_name", "conference", "pattern", "years"]


class ParentArea(str, Enum):
    AI = "AI"
    SYSTEMS = "Systems"
    THEORY = "Theory"
    INTERDISCIPLINARY = "Interdisciplinary"


@dataclass(frozen=True)
class Area:
    abbrev: str
    name: str
    parent: ParentArea


@dataclass(frozen=True)
class YearRange:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"empty year range {self.start}-{self.end}")

    def __contains__(self, year: int) -> bool:
        return self.start <= year <= self.end

    def overlaps(self, other: YearRange) -> bool:
        return self.start <= other.end and other.start <= self.end

    def __str__(self) -> str:
        return f"{self.start}-{self.end}"

    @classmethod
    def parse(cls, text: str) -> YearRange:
        start, sep, end = text.strip().partition("-")
        if not sep or not (start.isdigit() and end.isdigit()) or len(start) != 4 or len(end) != 4:
            raise ValueError(f"expected YYYY-YYYY, got {text!r}")
        return cls(int(start), int(end))


@dataclass(frozen=True)
class KeyPattern:
    prefix: str
    number_prefix: str | None = None
    years: YearRange | None = None

    def matches(self, key: str, year: int, number: str | None = None) -> bool:
        if not key.startswith(self.prefix):
            return False
        if self.years is not None and year not in self.years:
            return False
        if self.number_prefix is not None:
            return number is not None and number.startswith(self.number_prefix)
        return True

    def overlaps(self, other: KeyPattern) -> bool:
        """True if some (key, year, number) could match both patterns."""
        if not (self.prefix.startswith(other.prefix) or other.prefix.startswith(self.prefix)):
            return False
        if self.years is not None and other.years is not None and not self.years.overlaps(other.years):
            return False
        a, b = self.number_prefix, other.number_prefix
        if a is not None and b is not None and not (a.startswith(b) or b.startswith(a)):
            return False
        return True

    @property
    def text(self) -> str:
        return self.prefix if self.number_prefix is None else f"{self.prefix}#{self.number_prefix}"

    @classmethod
    def parse(cls, text: str, years: str = "") -> KeyPattern:
        prefix, sep, number = text.strip().partition("#")
        if not prefix:
            raise ValueError(f"empty key pattern {text!r}")
        if sep and not number:
            raise ValueError(f"empty number filter in pattern {text!r}")
        return cls(prefix, number or None, YearRange.parse(years) if years.strip() else None)


@dataclass(frozen=True)
class Conference:
    name: str
    area: str
    key_patterns: tuple[KeyPattern, ...]

    def matches(self, key: str, year: int, number: str | None = None) -> bool:
        return any(p.matches(key, year, number) for p in self.key_patterns)


@dataclass(frozen=True)
class Registry:
    areas: tuple[Area, ...]
    conferences: tuple[Conference, ...]
    _area_index: dict = field(init=False, repr=False, compare=False)
    _patterns: tuple = field(init=False, repr=False, compare=False)
    _prefixes: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for area in self.areas:
            if area.abbrev in index:
                raise RegistryError(f"duplicate area abbrev {area.abbrev!r}: {index[area.abbrev]} and {area}")
            index[area.abbrev] = area
        patterns = []
        for conf in self.conferences:
            if conf.area not in index:
                raise RegistryError(f"conference {conf.name!r} references unknown area {conf.area!r}")
            patterns.extend((p, conf) for p in conf.key_patterns)
        for i, (p, c) in enumerate(patterns):
            for q, d in patterns[i + 1:]:
                if p.overlaps(q):
                    raise RegistryError(
                        f"overlapping key patterns: {p.text!r} ({c.name}) and {q.text!r} ({d.name})"
                    )
        object.__setattr__(self, "_area_index", index)
        object.__setattr__(self, "_patterns", tuple(patterns))
        object.__setattr__(self, "_prefixes", tuple(p.prefix for p, _ in patterns))

    def area(self, abbrev: str) -> Area:
        try:
            return self._area_index[abbrev]
        except KeyError:
            raise RegistryError(f"unknown area {abbrev!r}") from None

    def __contains__(self, abbrev: str) -> bool:
        return abbrev in self._area_index

    @property
    def area_abbrevs(self) -> list[str]:
        return [a.abbrev for a in self.areas]

    def areas_by_name(self) -> list[Area]:
        return sorted(self.areas, key=lambda a: (a.name, a.abbrev))

    def areas_with_parent(self, parent: ParentArea) -> frozenset[str]:
        return frozenset(a.abbrev for a in self.areas if a.parent == parent)

    def may_match(self, key: str) -> bool:
        """Cheap prefilter: could ``key`` match any pattern for some year/number?"""
        return key.startswith(self._prefixes)

    def resolve_venue(self, key: str, year: int, number: str | None = None) -> tuple[Conference, Area] | None:
        if not key.startswith(self._prefixes):
            return None
        for pattern, conf in self._patterns:
            if pattern.matches(key, year, number):
                return conf, self._area_index[conf.area]
        return None


def _read_rows(source: IO[str]) -> Registry:
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != HEADER:
        raise RegistryError(f"registry header must be {','.join(HEADER)}, got {header!r}")

    areas: dict[str, Area] = {}
    referenced: dict[str, int] = {}
    conf_area: dict[str, str] = {}
    conf_patterns: dict[str, list[KeyPattern]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(HEADER):
            raise RegistryError(f"line {lineno}: expected {len(HEADER)} fields, got {len(row)}")
        parent, abbrev, area_name, conf_name, pattern, years = (c.strip() for c in row)
        if not abbrev:
            raise RegistryError(f"line {lineno}: empty area abbrev")
        if parent or area_name:
            try:
                area = Area(abbrev, area_name, ParentArea(parent))
            except ValueError:
                raise RegistryError(f"line {lineno}: unknown parent area {parent!r}") from None
            if abbrev in areas and areas[abbrev] != area:
                raise RegistryError(f"line {lineno}: duplicate area abbrev {abbrev!r}: {areas[abbrev]} and {area}")
            areas[abbrev] = area
        else:
            referenced.setdefault(abbrev, lineno)
        if not conf_name and not pattern:
            continue
        if not conf_name or not pattern:
            raise RegistryError(f"line {lineno}: conference and pattern must both be given")
        if conf_area.setdefault(conf_name, abbrev) != abbrev:
            raise RegistryError(
                f"line {lineno}: conference {conf_name!r} listed under {conf_area[conf_name]!r} and {abbrev!r}"
            )
        try:
            conf_patterns.setdefault(conf_name, []).append(KeyPattern.parse(pattern, years))
        except ValueError as exc:
            raise RegistryError(f"line {lineno}: {exc}") from None

    for abbrev, lineno in referenced.items():
        if abbrev not in areas:
            raise RegistryError(f"line {lineno}: conference references unknown area {abbrev!r}")
    conferences = tuple(Conference(name, conf_area[name], tuple(pats)) for name, pats in conf_patterns.items())
    return Registry(tuple(areas.values()), conferences)


def load_registry(config_source: str | os.PathLike | IO[str] | None = None) -> Registry:
    """Load a registry config; with no source, return the built-in default table.

    A config fully replaces the defaults.
    """
    if config_source is None:
        text = resources.files("pubpoints").joinpath("data/registry.csv").read_text(encoding="utf-8")
        return _read_rows(io.StringIO(text))
    if hasattr(config_source, "read"):
        return _read_rows(config_source)
    with open(config_source, newline="", encoding="utf-8") as fh:
        return _read_rows(fh)


def write_registry(registry: Registry, sink: IO[str]) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(HEADER)
    for area in registry.areas:
        head = [area.parent.value, area.abbrev, area.name]
        confs = [c for c in registry.conferences if c.area == area.abbrev]
        if not confs:
            writer.writerow(head + ["", "", ""])
        for conf in confs:
            for p in conf.key_patterns:
                writer.writerow(head + [conf.name, p.text, str(p.years) if p.years else ""])


def registry_from_rows(rows: Iterable[Iterable[str]]) -> Registry:
    """Build a registry from in-memory rows (header excluded)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerows(rows)
    buf.seek(0)
    return _read_rows(buf)
