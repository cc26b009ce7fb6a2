"""Single-pass DBLP ingestion and the on-disk snapshot format.

The DBLP dump is parsed with expat in fixed-size chunks, so memory use tracks
the number of *matched* publications rather than the size of the dump. Named
character entities are resolved from a built-in copy of the DBLP DTD entity
set; the DTD file itself is never read.
"""

from __future__ import annotations

import html.entities
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, BinaryIO, Iterable
from xml.parsers import expat

from .errors import CorpusParseError, SnapshotError
from .registry import Registry

log = logging.getLogger(__name__)

SNAPSHOT_HEADER = "pubpoints-snapshot v1"
RECORD_KINDS = frozenset({"inproceedings", "article"})
_FIELDS = frozenset({"author", "title", "year", "number"})
CHUNK_SIZE = 1 << 20

# dblp.dtd declares the ISO 8859-1 (Latin-1) named characters, U+00A0..U+00FF.
DBLP_ENTITIES: dict[str, str] = {
    html.entities.codepoint2name[cp]: chr(cp) for cp in range(0xA0, 0x100)
}
_DTD = "".join(f'<!ENTITY {name} "&#{ord(ch)};">' for name, ch in DBLP_ENTITIES.items())


@dataclass(frozen=True, order=True)
class Window:
    start_year: int
    end_year: int

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise ValueError(f"window start {self.start_year} after end {self.end_year}")

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    def __str__(self) -> str:
        return f"{self.start_year}-{self.end_year}"

    @classmethod
    def parse(cls, text: str) -> Window:
        start, sep, end = text.strip().partition("-")
        try:
            return cls(int(start), int(end if sep else start))
        except ValueError:
            raise ValueError(f"expected YYYY-YYYY, got {text!r}") from None


@dataclass(frozen=True)
class Publication:
    key: str
    conference: str
    area: str
    year: int
    authors: tuple[str, ...]
    title: str = ""

    def __post_init__(self):
        if not self.authors:
            raise ValueError(f"{self.key}: publication without authors")
        if self.year <= 1900:
            raise ValueError(f"{self.key}: implausible year {self.year}")


@dataclass(frozen=True)
class IngestStats:
    records_scanned: int = 0
    records_matched: int = 0
    records_skipped: int = 0


@dataclass(frozen=True)
class CorpusSnapshot:
    publications: tuple[Publication, ...] = ()
    stats: IngestStats = field(default_factory=IngestStats, compare=False)

    def __post_init__(self):
        pubs = tuple(sorted(self.publications, key=lambda p: p.key))
        for a, b in zip(pubs, pubs[1:]):
            if a.key == b.key:
                raise ValueError(f"duplicate publication key {a.key!r}")
        object.__setattr__(self, "publications", pubs)

    def __len__(self) -> int:
        return len(self.publications)

    @cached_property
    def by_author(self) -> dict[str, tuple[Publication, ...]]:
        index: dict[str, list[Publication]] = {}
        for pub in self.publications:
            for name in dict.fromkeys(pub.authors):
                index.setdefault(name, []).append(pub)
        return {name: tuple(pubs) for name, pubs in index.items()}

    def publications_of(self, name: str) -> tuple[Publication, ...]:
        return self.by_author.get(name, ())


def normalize_name(text: str) -> str:
    return " ".join(text.split())


class _DblpHandler:
    def __init__(self, parser, registry: Registry):
        self.parser = parser
        self.registry = registry
        self.depth = 0
        self.scanned = 0
        self.skipped = 0
        self.pubs: dict[str, Publication] = {}
        self.key: str | None = None
        self.field: str | None = None
        self.buf: list[str] = []
        self.values: dict[str, list[str]] = {}

    def start(self, name, attrs):
        self.depth += 1
        depth = self.depth
        if depth == 2:
            self.scanned += 1
            if name not in RECORD_KINDS:
                return
            key = attrs.get("key")
            if key and self.registry.may_match(key):
                self.key = key
                self.values = {}
                self.parser.CharacterDataHandler = self.chars
            else:
                self.skipped += 1
        elif depth == 3 and self.key is not None and name in _FIELDS:
            self.field = name
            self.buf = []

    def chars(self, data):
        if self.field is not None:
            self.buf.append(data)

    def end(self, name):
        depth = self.depth
        self.depth -= 1
        if self.key is None:
            return
        if depth == 3 and self.field is not None:
            self.values.setdefault(self.field, []).append(normalize_name("".join(self.buf)))
            self.field = None
        elif depth == 2:
            self._finish()
            self.key = None
            self.parser.CharacterDataHandler = None

    def _finish(self):
        key, values = self.key, self.values
        authors = tuple(a for a in values.get("author", ()) if a)
        try:
            year = int(values.get("year", [""])[0])
        except ValueError:
            year = None
        number = values.get("number", [None])[0]
        hit = self.registry.resolve_venue(key, year, number) if year is not None else None
        if hit is None or not authors or year <= 1900 or key in self.pubs:
            self.skipped += 1
            return
        conf, area = hit
        title = " ".join(values.get("title", ()))
        self.pubs[key] = Publication(key, conf.name, area.abbrev, year, authors, title)

    def skipped_entity(self, name, is_parameter_entity):
        raise CorpusParseError(f"unknown entity &{name};", self.parser.CurrentByteIndex)


def _make_parser(registry: Registry):
    parser = expat.ParserCreate()
    parser.buffer_text = True
    parser.UseForeignDTD(True)
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_UNLESS_STANDALONE)

    def external_entity(context, base, system_id, public_id):
        sub = parser.ExternalEntityParserCreate(context)
        sub.Parse(_DTD, True)
        return 1

    handler = _DblpHandler(parser, registry)
    parser.ExternalEntityRefHandler = external_entity
    parser.StartElementHandler = handler.start
    parser.EndElementHandler = handler.end
    parser.SkippedEntityHandler = handler.skipped_entity
    return parser, handler


def ingest_dblp(xml_stream: BinaryIO | bytes, registry: Registry, chunk_size: int = CHUNK_SIZE) -> CorpusSnapshot:
    """Stream a DBLP XML document once, keeping records that resolve to a registry venue.

    Duplicate keys keep the first occurrence; the rest are counted as skipped.
    Raises CorpusParseError on malformed XML or an unknown named entity.
    """
    if isinstance(xml_stream, (bytes, bytearray)):
        chunks: Iterable[bytes] = [bytes(xml_stream)]
    else:
        chunks = iter(lambda: xml_stream.read(chunk_size), b"")
    parser, handler = _make_parser(registry)
    try:
        for chunk in chunks:
            parser.Parse(chunk, False)
        parser.Parse(b"", True)
    except expat.ExpatError as exc:
        raise CorpusParseError(f"malformed XML: {expat.errors.messages[exc.code]}", parser.ErrorByteIndex) from None

    stats = IngestStats(handler.scanned, len(handler.pubs), handler.skipped)
    log.info("scanned %d records, matched %d, skipped %d", *vars(stats).values())
    return CorpusSnapshot(tuple(handler.pubs.values()), stats)


def _encode(pub: Publication) -> bytes:
    row = [pub.key, pub.conference, pub.area, pub.year, list(pub.authors), pub.title]
    return json.dumps(row, ensure_ascii=False, separators=(",", ":")).encode("utf-8") + b"\n"


def write_snapshot(snapshot: CorpusSnapshot, sink: BinaryIO) -> int:
    """Write the snapshot as line-delimited JSON arrays; returns bytes written."""
    written = sink.write(SNAPSHOT_HEADER.encode("ascii") + b"\n")
    for pub in snapshot.publications:
        written += sink.write(_encode(pub))
    return written


def _decode(line: bytes, lineno: int) -> Publication:
    if not line.endswith(b"\n"):
        raise SnapshotError("truncated record (no line terminator)", lineno)
    try:
        row = json.loads(line)
    except (ValueError, UnicodeDecodeError) as exc:
        raise SnapshotError(f"truncated or malformed record: {exc}", lineno) from None
    if not (isinstance(row, list) and len(row) == 6):
        raise SnapshotError("record must be a 6-field array", lineno)
    key, conf, area, year, authors, title = row
    if not (
        all(isinstance(v, str) for v in (key, conf, area, title))
        and isinstance(year, int)
        and isinstance(authors, list)
        and all(isinstance(a, str) for a in authors)
    ):
        raise SnapshotError("record has mistyped fields", lineno)
    try:
        return Publication(key, conf, area, year, tuple(authors), title)
    except ValueError as exc:
        raise SnapshotError(str(exc), lineno) from None


def read_snapshot(source: IO[bytes]) -> CorpusSnapshot:
    header = source.readline()
    if header.rstrip(b"\r\n") != SNAPSHOT_HEADER.encode("ascii"):
        raise SnapshotError(f"expected header {SNAPSHOT_HEADER!r}, got {header[:40]!r}", 1)
    pubs = []
    prev = None
    for lineno, line in enumerate(source, start=2):
        pub = _decode(line, lineno)
        if prev is not None and pub.key <= prev:
            raise SnapshotError(f"key {pub.key!r} out of order or duplicated", lineno)
        prev = pub.key
        pubs.append(pub)
    n = len(pubs)
    return CorpusSnapshot(tuple(pubs), IngestStats(n, n, 0))


def save_snapshot(snapshot: CorpusSnapshot, path) -> int:
    with open(path, "wb") as fh:
        return write_snapshot(snapshot, fh)


def load_snapshot(path) -> CorpusSnapshot:
    with open(path, "rb") as fh:
        return read_snapshot(fh)
