"""Effort-normalized publication points ("ICLR points") per computer-science area."""

from .corpus import CorpusSnapshot, Publication, Window, ingest_dblp, load_snapshot, read_snapshot, save_snapshot, write_snapshot
from .effort import PointsTable, allocate, area_membership, build_points_table, compute_points, count_pubs, faculty_effort
from .errors import PubPointsError
from .registry import Registry, load_registry
from .roster import Roster, load_roster, match_author
from .scoring import (
    CsrBaselineInput,
    RankedList,
    ScoreRecord,
    csr_score,
    first_author_points,
    person_score,
    pub_adjusted,
    pub_points,
    rank,
    rank_delta,
    school_score,
)

__version__ = "0.1.0"
