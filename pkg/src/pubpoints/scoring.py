"""Person and school scores, the CSRankings geometric-mean baseline, and rankings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import CorpusSnapshot, Publication, Window
from .effort import PointsTable
from .errors import PointsError, RosterError
from .registry import ParentArea, Registry
from .roster import Roster

ANALYSIS_YEAR = 2024
DEFAULT_AREA_COUNT = 27
# Theory areas list authors alphabetically; position carries no credit signal.
ALPHABETICAL_AREAS = frozenset({"act", "crypt", "log"})


@dataclass(frozen=True)
class ScoreRecord:
    entity: str
    total: float = 0.0
    adjusted_total: float = 0.0
    per_year: float = 0.0
    adjusted_per_year: float = 0.0
    first_year: int | None = None
    area_breakdown: dict[str, float] = field(default_factory=dict)
    adjusted_breakdown: dict[str, float] = field(default_factory=dict)
    first_author_total: float = 0.0
    publications: int = 0
    # in-window papers in areas whose points are undefined; left out of every sum
    unscored: int = 0

    @property
    def num_areas(self) -> int:
        return sum(1 for v in self.area_breakdown.values() if v > 0)


def pub_points(publication: Publication, points_table: PointsTable) -> float:
    try:
        return points_table[publication.area]
    except PointsError:
        raise PointsError(f"{publication.key}: no points defined for area {publication.area!r}") from None


def pub_adjusted(publication: Publication, points_table: PointsTable) -> float:
    return pub_points(publication, points_table) / len(publication.authors)


def _years_active(first_year: int | None, analysis_year: int) -> int:
    return analysis_year - first_year + 1 if first_year is not None else 0


def _per_year(value: float, years: int) -> float:
    return value / years if years > 0 else 0.0


def person_score(
    name: str,
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    analysis_year: int = ANALYSIS_YEAR,
    alphabetical_areas: frozenset[str] = ALPHABETICAL_AREAS,
) -> ScoreRecord:
    """Sum of points (and co-author-split points) over the person's in-window papers.

    The per-year divisor runs from the person's first registry-venue paper in
    any year, not just the window, through ``analysis_year`` inclusive. Papers
    in areas without defined points are counted in ``unscored`` only.
    """
    pubs = snapshot.publications_of(name)
    if not pubs:
        return ScoreRecord(name)
    first_year = min(p.year for p in pubs)
    full: dict[str, list[float]] = {}
    split: dict[str, list[float]] = {}
    first_author = []
    count = unscored = 0
    for pub in pubs:
        if pub.year not in window:
            continue
        if pub.area not in points_table.points:
            unscored += 1
            continue
        count += 1
        pts = pub_points(pub, points_table)
        full.setdefault(pub.area, []).append(pts)
        split.setdefault(pub.area, []).append(pts / len(pub.authors))
        if pub.authors[0] == name or pub.area in alphabetical_areas:
            first_author.append(pts)
    area_breakdown = {a: math.fsum(v) for a, v in sorted(full.items())}
    adjusted_breakdown = {a: math.fsum(v) for a, v in sorted(split.items())}
    total = math.fsum(area_breakdown.values())
    adjusted = math.fsum(adjusted_breakdown.values())
    years = _years_active(first_year, analysis_year)
    return ScoreRecord(
        entity=name,
        total=total,
        adjusted_total=adjusted,
        per_year=_per_year(total, years),
        adjusted_per_year=_per_year(adjusted, years),
        first_year=first_year,
        area_breakdown=area_breakdown,
        adjusted_breakdown=adjusted_breakdown,
        first_author_total=math.fsum(first_author),
        publications=count,
        unscored=unscored,
    )


def first_author_points(
    name: str,
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    alphabetical_areas: frozenset[str] = ALPHABETICAL_AREAS,
) -> float:
    """Full points of in-window papers the person led.

    Papers in ``alphabetical_areas`` count wherever the person appears in the
    author list.
    """
    return math.fsum(
        pub_points(p, points_table)
        for p in snapshot.publications_of(name)
        if p.year in window and p.area in points_table.points and (p.authors[0] == name or p.area in alphabetical_areas)
    )


def alphabetical_areas_of(registry: Registry) -> frozenset[str]:
    return registry.areas_with_parent(ParentArea.THEORY)


def school_score(
    school: str,
    roster: Roster,
    snapshot: CorpusSnapshot,
    points_table: PointsTable,
    window: Window,
    analysis_year: int = ANALYSIS_YEAR,
    alphabetical_areas: frozenset[str] = ALPHABETICAL_AREAS,
) -> ScoreRecord:
    """Aggregate member scores; the school's headline score is ``adjusted_total``."""
    members = [
        person_score(rec.dblp_name, snapshot, points_table, window, analysis_year, alphabetical_areas)
        for rec in roster.members(school)
    ]
    full: dict[str, list[float]] = {}
    split: dict[str, list[float]] = {}
    for m in members:
        for a, v in m.area_breakdown.items():
            full.setdefault(a, []).append(v)
        for a, v in m.adjusted_breakdown.items():
            split.setdefault(a, []).append(v)
    area_breakdown = {a: math.fsum(v) for a, v in sorted(full.items())}
    adjusted_breakdown = {a: math.fsum(v) for a, v in sorted(split.items())}
    total = math.fsum(m.total for m in members)
    adjusted = math.fsum(m.adjusted_total for m in members)
    years = [m.first_year for m in members if m.first_year is not None]
    first_year = min(years) if years else None
    span = _years_active(first_year, analysis_year)
    return ScoreRecord(
        entity=school,
        total=total,
        adjusted_total=adjusted,
        per_year=_per_year(total, span),
        adjusted_per_year=_per_year(adjusted, span),
        first_year=first_year,
        area_breakdown=area_breakdown,
        adjusted_breakdown=adjusted_breakdown,
        first_author_total=math.fsum(m.first_author_total for m in members),
        publications=sum(m.publications for m in members),
        unscored=sum(m.unscored for m in members),
    )


def school_adjusted_counts(school: str, roster: Roster, snapshot: CorpusSnapshot, window: Window) -> dict[str, float]:
    """Per-area paper counts with each paper split evenly over its authors (CSRankings style)."""
    shares: dict[str, list[float]] = {}
    for rec in roster.members(school):
        for pub in snapshot.publications_of(rec.dblp_name):
            if pub.year in window:
                shares.setdefault(pub.area, []).append(1.0 / len(pub.authors))
    return {a: math.fsum(v) for a, v in sorted(shares.items())}


@dataclass(frozen=True)
class CsrBaselineInput:
    adjusted_counts: Mapping[str, float]
    N: int = DEFAULT_AREA_COUNT

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if any(c < 0 for c in self.adjusted_counts.values()):
            raise ValueError("adjusted counts must be non-negative")
        if sum(1 for c in self.adjusted_counts.values() if c > 0) > self.N:
            raise ValueError(f"more than N={self.N} areas with nonzero counts")


def csr_score(baseline: CsrBaselineInput) -> float:
    """N-th root of the product of (count + 1) over N areas; absent areas give factor 1."""
    factors = [c + 1.0 for _, c in sorted(baseline.adjusted_counts.items())]
    product = math.prod(factors)
    if math.isfinite(product) and product > 0:
        return product ** (1.0 / baseline.N)
    return math.exp(math.fsum(math.log(f) for f in factors) / baseline.N)


@dataclass(frozen=True)
class RankEntry:
    rank: int
    entity: str
    score: float


class RankedList(tuple):
    """Entries in descending score order with competition ranks (1, 2, 2, 4)."""

    def __new__(cls, entries: Iterable[RankEntry] = ()):
        entries = tuple(entries)
        for prev, cur in zip(entries, entries[1:]):
            if cur.score > prev.score or cur.rank < prev.rank:
                raise ValueError(f"ranking out of order at {cur.entity!r}")
        if entries and entries[0].rank < 1:
            raise ValueError("ranks start at 1")
        return super().__new__(cls, entries)

    def ranks(self) -> dict[str, int]:
        return {e.entity: e.rank for e in self}


def rank(scores: Mapping[str, float]) -> RankedList:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = []
    for position, (entity, score) in enumerate(ordered, start=1):
        if entries and score == entries[-1].score:
            entries.append(RankEntry(entries[-1].rank, entity, score))
        else:
            entries.append(RankEntry(position, entity, score))
    return RankedList(entries)


@dataclass(frozen=True)
class RankDelta:
    deltas: dict[str, int]
    unmatched: int = 0

    def __getitem__(self, entity: str) -> int:
        return self.deltas[entity]


def rank_delta(points_ranking: RankedList, baseline_ranking: RankedList) -> RankDelta:
    """baseline rank minus points rank; positive means the entity gains under points."""
    ours, theirs = points_ranking.ranks(), baseline_ranking.ranks()
    common = sorted(set(ours) & set(theirs))
    unmatched = len(set(ours) ^ set(theirs))
    return RankDelta({e: theirs[e] - ours[e] for e in common}, unmatched)
