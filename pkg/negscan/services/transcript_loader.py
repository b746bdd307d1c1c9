"""
Module for loading sociolinguistic interview transcripts: header extraction,
disfluency cleaning and utterance segmentation.

A transcript is one speaker track exported to UTF-8 text. It starts with a
header block of `@key: value` lines terminated by a blank line; the body is
free text.
"""

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import regex as re
from joblib import Parallel, delayed

from negscan.core.config import settings
from negscan.core.exceptions import InvalidMarkerPattern, MalformedField, MissingHeader, NegScanError
from negscan.models.data_models import Removal, Role, SpeakerMetadata, TranscriptDocument
from negscan.services.text_processor import text_processor

logger = logging.getLogger(__name__)

HEADER_LINE = re.compile(r"^(?P<prefix>\S)(?P<key>[^:\s]+)\s*:\s*(?P<value>.*?)\s*$")

ROLE_ALIASES = {
    "informante": Role.INFORMANT,
    "informant": Role.INFORMANT,
    "documentador": Role.DOCUMENTER,
    "documenter": Role.DOCUMENTER,
}
ROLE_LABELS = {Role.INFORMANT: "informante", Role.DOCUMENTER: "documentador"}


@dataclass(frozen=True)
class HeaderField:
    """One header key and the metadata attribute it fills."""
    key: str
    attribute: str
    pattern: str = r".+"
    required: bool = False


@dataclass(frozen=True)
class HeaderSchema:
    """Accepted header keys, their value patterns and the line prefix."""
    fields: Tuple[HeaderField, ...]
    prefix: str = "@"

    def by_key(self) -> Dict[str, HeaderField]:
        return {f.key: f for f in self.fields}


DEFAULT_HEADER_SCHEMA = HeaderSchema(fields=(
    HeaderField("id", "interview_id", r"\S+(?: \S+)*", required=True),
    HeaderField("local", "location"),
    HeaderField("genero", "gender"),
    HeaderField("idade", "age", r"[1-9][0-9]*"),
    HeaderField("origem", "city_of_origin"),
    HeaderField("residencia", "city_of_residence"),
    HeaderField("periodo", "undergrad_period"),
    HeaderField("papel", "role", r"(?i:informante|informant|documentador|documenter)"),
))


class HeaderBlock(NamedTuple):
    """Header lines with their 1-based line numbers, and where the body starts."""
    lines: List[Tuple[int, str]]
    body_offset: int
    body_first_line: int


def split_header(raw_file_text: str, prefix: str = "@") -> HeaderBlock:
    """
    Locate the header block at the top of a transcript.

    Raises:
        MissingHeader: If the file does not start with a prefixed line, or the
            header run is followed by something other than a blank line.
    """
    lines = raw_file_text.split("\n")
    if not lines[0].startswith(prefix):
        raise MissingHeader(f"no '{prefix}key: value' header block at the top of the file", line_number=1)

    header: List[Tuple[int, str]] = []
    i = 0
    while i < len(lines) and lines[i].startswith(prefix):
        header.append((i + 1, lines[i].rstrip("\r")))
        i += 1

    if i < len(lines):
        if lines[i].strip():
            raise MissingHeader("header block is not terminated by a blank line", line_number=i + 1)
        body_index = i + 1
    else:
        body_index = i

    body_offset = min(sum(len(line) + 1 for line in lines[:body_index]), len(raw_file_text))
    return HeaderBlock(header, body_offset, body_index + 1)


def parse_header(raw_file_text: str, header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA) -> SpeakerMetadata:
    """
    Extract speaker metadata from the header block.

    Args:
        raw_file_text: Full transcript text.
        header_schema: Accepted keys and value patterns.

    Returns:
        The metadata; fields missing from the header are None.

    Raises:
        MissingHeader: No terminated header block.
        MalformedField: A header line fails its pattern, repeats a key, or the
            required id is absent.
    """
    block = split_header(raw_file_text, header_schema.prefix)
    schema = header_schema.by_key()
    values: Dict[str, object] = {}
    seen: Dict[str, int] = {}

    for line_number, line in block.lines:
        match = HEADER_LINE.match(line)
        if not match or match.group("prefix") != header_schema.prefix:
            raise MalformedField(f"expected '{header_schema.prefix}key: value', got {line!r}", line_number=line_number)

        key = match.group("key").lower()
        value = match.group("value")
        if key in seen:
            raise MalformedField(f"header key '{key}' repeats line {seen[key]}", line_number=line_number)
        seen[key] = line_number

        header_field = schema.get(key)
        if header_field is None:
            logger.warning(f"Ignoring unknown header key '{key}' on line {line_number}")
            continue
        if not value:
            continue
        if not re.fullmatch(header_field.pattern, value):
            raise MalformedField(f"value {value!r} is not valid for '{key}'", line_number=line_number)
        values[header_field.attribute] = _convert(header_field.attribute, value)

    for header_field in header_schema.fields:
        if header_field.required and header_field.attribute not in values:
            last_line = block.lines[-1][0]
            raise MalformedField(f"required header key '{header_field.key}' is missing", line_number=last_line)

    return SpeakerMetadata(**values)


def _convert(attribute: str, value: str) -> object:
    if attribute == "age":
        return int(value)
    if attribute == "role":
        return ROLE_ALIASES[value.lower()]
    return value


def render_header(metadata: SpeakerMetadata, header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA) -> str:
    """Write metadata as a header block, blank-line terminated. Absent fields are omitted."""
    lines = []
    for header_field in header_schema.fields:
        value = getattr(metadata, header_field.attribute)
        if value is None:
            continue
        if isinstance(value, Role):
            value = ROLE_LABELS[value]
        lines.append(f"{header_schema.prefix}{header_field.key}: {value}")
    return "\n".join(lines) + "\n\n"


def compile_markers(marker_patterns: Optional[Sequence[str]] = None) -> list:
    """Compile disfluency marker regexes, defaulting to the configured set."""
    if marker_patterns is None:
        marker_patterns = settings.markers
    compiled = []
    for pattern in marker_patterns:
        try:
            compiled.append(re.compile(pattern))
        except re.error as e:
            raise InvalidMarkerPattern(f"marker pattern {pattern!r} does not compile: {e}")
    return compiled


def clean_disfluencies(raw_text: str, marker_patterns: Optional[Sequence[str]] = None) -> Tuple[str, List[Removal]]:
    """
    Delete disfluency markers and normalize whitespace.

    Markers are removed until none is left, then each line is stripped and
    runs of horizontal whitespace inside it collapse to one character.
    Newlines are kept. Every deleted character is recorded: each removal is a
    contiguous slice of raw_text, and whitespace dropped next to a marker is
    attached to that marker's removal.

    Args:
        raw_text: Transcript body.
        marker_patterns: Marker regexes; None uses the configured defaults.

    Returns:
        The cleaned text and the removals, ordered by offset.
    """
    compiled = compile_markers(marker_patterns)
    positions = list(range(len(raw_text)))
    owner: Dict[int, int] = {}
    match_id = 0

    while True:
        current = "".join(raw_text[i] for i in positions)
        hits = set()
        for pattern in compiled:
            for match in pattern.finditer(current):
                if match.end() == match.start():
                    continue
                for k in range(match.start(), match.end()):
                    owner.setdefault(positions[k], match_id)
                    hits.add(k)
                match_id += 1
        if not hits:
            break
        positions = [p for k, p in enumerate(positions) if k not in hits]

    kept = _collapse_whitespace(raw_text, positions)
    cleaned = "".join(raw_text[i] for i in kept)
    removals = _group_removals(raw_text, set(kept), owner)
    return cleaned, removals


def _collapse_whitespace(raw_text: str, positions: List[int]) -> List[int]:
    kept: List[int] = []
    line: List[int] = []

    def flush():
        content = [k for k, p in enumerate(line) if not raw_text[p].isspace()]
        if not content:
            return
        run: List[int] = []
        for p in line[content[0]:content[-1] + 1]:
            if raw_text[p].isspace():
                run.append(p)
                continue
            if run:
                spaces = [q for q in run if raw_text[q] == " "]
                kept.append(spaces[0] if spaces else run[0])
                run = []
            kept.append(p)

    for p in positions:
        if raw_text[p] == "\n":
            flush()
            line = []
            kept.append(p)
        else:
            line.append(p)
    flush()
    return kept


def _group_removals(raw_text: str, kept: set, owner: Dict[int, int]) -> List[Removal]:
    removals: List[Removal] = []
    i = 0
    n = len(raw_text)
    while i < n:
        if i in kept:
            i += 1
            continue
        start = i
        current_owner = owner.get(i)
        i += 1
        while i < n and i not in kept:
            next_owner = owner.get(i)
            if next_owner is not None and current_owner is not None and next_owner != current_owner:
                break
            if current_owner is None:
                current_owner = next_owner
            i += 1
        removals.append(Removal(start, raw_text[start:i]))
    return removals


def restore_removals(cleaned: str, removals: Iterable[Removal]) -> str:
    """Undo cleaning: put every removed slice back at its original offset."""
    text = cleaned
    for offset, removed_text in sorted(removals):
        text = text[:offset] + removed_text + text[offset:]
    return text


def ingest_text(
    raw_file_text: str,
    header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA,
    marker_patterns: Optional[Sequence[str]] = None,
    source_path: Optional[str] = None,
) -> TranscriptDocument:
    """
    Parse one transcript into metadata and cleaned utterances.

    Removal offsets are relative to the body (the text after the header
    block); utterance line spans are line numbers of the whole file.
    """
    if raw_file_text.startswith("\ufeff"):
        raw_file_text = raw_file_text[1:]

    metadata = parse_header(raw_file_text, header_schema)
    block = split_header(raw_file_text, header_schema.prefix)
    body = raw_file_text[block.body_offset:]

    cleaned, removals = clean_disfluencies(body, marker_patterns)
    shift = block.body_first_line - 1
    utterances = [
        replace(u, source_line_span=(u.source_line_span[0] + shift, u.source_line_span[1] + shift))
        for u in text_processor.segment_utterances(cleaned)
    ]

    return TranscriptDocument(
        metadata=metadata,
        utterances=utterances,
        raw_char_count=len(body),
        cleaned_char_count=len(cleaned),
        removals=removals,
        source_path=source_path,
    )


def _ingest_path(path: str, header_schema: HeaderSchema, marker_patterns: Optional[List[str]]):
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = f.read()
        return path, ingest_text(raw, header_schema, marker_patterns, source_path=path), None
    except NegScanError as e:
        return path, None, str(e)
    except (OSError, UnicodeDecodeError) as e:
        return path, None, f"cannot read file: {e}"


class TranscriptLoader:
    """Class for loading transcript files from files and directories."""

    def __init__(
        self,
        data_paths: Sequence[os.PathLike],
        header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA,
        marker_patterns: Optional[Sequence[str]] = None,
        suffix: str = ".txt",
    ):
        """
        Initialize the transcript loader.

        Args:
            data_paths: Transcript files or directories holding them.
            header_schema: Header keys and value patterns.
            marker_patterns: Disfluency marker regexes; None uses the defaults.
            suffix: File suffix picked up when scanning directories.
        """
        self.data_paths = [Path(p) for p in data_paths]
        self.header_schema = header_schema
        self.marker_patterns = list(marker_patterns) if marker_patterns is not None else None
        self.suffix = suffix
        compile_markers(self.marker_patterns)

    def get_file_paths(self) -> List[str]:
        """
        Get the list of transcript files to load, sorted for stable output.
        """
        file_paths = []
        for path in self.data_paths:
            if path.is_file():
                if path.suffix == self.suffix:
                    file_paths.append(str(path))
                else:
                    logger.info(f"Skipping {path}: not a {self.suffix} transcript")
            elif path.is_dir():
                file_paths.extend(str(p) for p in sorted(path.glob(f"*{self.suffix}")) if p.is_file())
            else:
                logger.error(f"Path not found: {path}")

        logger.info(f"Found {len(file_paths)} transcript files")
        return sorted(file_paths)

    def ingest_file(self, path: os.PathLike) -> TranscriptDocument:
        with open(path, "r", encoding="utf-8") as f:
            raw = f.read()
        return ingest_text(raw, self.header_schema, self.marker_patterns, source_path=str(path))

    def ingest_all(self, jobs: int = 1) -> Tuple[List[TranscriptDocument], List[Tuple[str, str]]]:
        """
        Ingest every transcript file, one file per worker.

        Args:
            jobs: Number of parallel workers.

        Returns:
            The documents in file order, and (path, message) pairs for files
            that failed.
        """
        paths = self.get_file_paths()
        results = Parallel(n_jobs=jobs)(
            delayed(_ingest_path)(path, self.header_schema, self.marker_patterns) for path in paths
        )

        documents: List[TranscriptDocument] = []
        errors: List[Tuple[str, str]] = []
        for path, document, error in results:
            if error is not None:
                logger.error(f"Failed to ingest {path}: {error}")
                errors.append((path, error))
            else:
                logger.info(f"Ingested {path}: {len(document.utterances)} utterances, {len(document.removals)} removals")
                documents.append(document)
        return documents, errors
