"""Effort allocation, publication counts and the points normalization.

One faculty member contributes one unit of effort, split evenly over the
distinct areas they published in during the window. An area's average effort
per paper is its total effort divided by its paper count; points express that
quotient relative to the reference area (machine learning by default).
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import CorpusSnapshot, Window
from .errors import PointsError
from .roster import Roster

log = logging.getLogger(__name__)

REFERENCE_AREA = "mlmining"
DEFAULT_WINDOW = Window(2019, 2023)

AllocationTable = dict[str, dict[str, float]]


@dataclass(frozen=True)
class AreaStats:
    area: str
    faculty_effort: float
    pub_count: int
    points: float | None = None

    @property
    def faculties_per_pub(self) -> float | None:
        return self.faculty_effort / self.pub_count if self.pub_count else None

    @property
    def defined(self) -> bool:
        return self.points is not None


@dataclass(frozen=True)
class PointsTable:
    reference_area: str
    points: dict[str, float]
    window: Window | None = None
    stats: dict[str, AreaStats] = field(default_factory=dict, compare=False)
    undefined: tuple[str, ...] = ()

    def __getitem__(self, area: str) -> float:
        try:
            return self.points[area]
        except KeyError:
            raise PointsError(f"no points defined for area {area!r}") from None

    def __contains__(self, area: str) -> bool:
        return area in self.points


def area_membership(faculty: str, snapshot: CorpusSnapshot, window: Window) -> frozenset[str]:
    return frozenset(p.area for p in snapshot.publications_of(faculty) if p.year in window)


def memberships(names: Iterable[str], snapshot: CorpusSnapshot, window: Window) -> dict[str, frozenset[str]]:
    """Area memberships for every name with at least one in-window paper."""
    out = {}
    for name in sorted(set(names)):
        areas = area_membership(name, snapshot, window)
        if areas:
            out[name] = areas
    return out


def allocate(memberships: Mapping[str, Iterable[str]]) -> AllocationTable:
    table: AllocationTable = {}
    for name in sorted(memberships):
        areas = sorted(set(memberships[name]))
        if areas:
            share = 1.0 / len(areas)
            table[name] = {a: share for a in areas}
    return table


def count_pubs(snapshot: CorpusSnapshot, window: Window) -> dict[str, int]:
    counts = Counter(p.area for p in snapshot.publications if p.year in window)
    return dict(sorted(counts.items()))


def faculty_effort(alloc: AllocationTable) -> dict[str, float]:
    shares: dict[str, list[float]] = {}
    for name in sorted(alloc):
        for area, frac in alloc[name].items():
            shares.setdefault(area, []).append(frac)
    # fsum is correctly rounded, hence independent of summation order
    return {area: math.fsum(v) for area, v in sorted(shares.items())}


def compute_points(
    F: Mapping[str, float],
    P: Mapping[str, int],
    reference_area: str = REFERENCE_AREA,
    window: Window | None = None,
    areas: Iterable[str] | None = None,
) -> PointsTable:
    """Normalize each area's effort-per-paper by the reference area's.

    ``areas`` lists every area to report on (defaults to the union of F and P).
    Areas with no papers or no faculty effort get no points and are listed in
    ``undefined``.
    """
    f_ref, p_ref = F.get(reference_area, 0.0), P.get(reference_area, 0)
    if p_ref <= 0 or f_ref <= 0:
        raise PointsError(
            f"reference area {reference_area!r} unusable: effort {f_ref}, publications {p_ref}"
        )
    ref_quotient = f_ref / p_ref
    names = sorted(set(areas) if areas is not None else set(F) | set(P))
    points, stats, undefined = {}, {}, []
    for area in names:
        f, p = float(F.get(area, 0.0)), int(P.get(area, 0))
        if area == reference_area:
            value = 1.0
        elif p > 0 and f > 0:
            value = (f / p) / ref_quotient
        else:
            value = None
            undefined.append(area)
        if value is not None:
            points[area] = value
        stats[area] = AreaStats(area, f, p, value)
    if undefined:
        log.warning("areas without points (no papers or no faculty): %s", ", ".join(undefined))
    return PointsTable(reference_area, points, window, stats, tuple(undefined))


def build_points_table(
    roster: Roster,
    snapshot: CorpusSnapshot,
    window: Window = DEFAULT_WINDOW,
    reference_area: str = REFERENCE_AREA,
    areas: Iterable[str] | None = None,
) -> PointsTable:
    """Roster + corpus -> points, via allocate / faculty_effort / count_pubs."""
    alloc = allocate(memberships(roster.by_name, snapshot, window))
    return compute_points(faculty_effort(alloc), count_pubs(snapshot, window), reference_area, window, areas)
