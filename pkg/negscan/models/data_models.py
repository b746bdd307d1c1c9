"""
Data models for internal use.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from negscan.core.exceptions import InvalidTokenSpec

NAO = "não"
QUESTION_MARK = "?"
UNRESOLVED = "UNRESOLVED"

UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})


class Role(Enum):
    """Speaker role in a sociolinguistic interview."""
    INFORMANT = "informant"
    DOCUMENTER = "documenter"


class TagSource(Enum):
    """Where the POS tags of an utterance came from."""
    CONLLU = "conllu"
    LEXICON_TAGGER = "lexicon_tagger"


class OverlapPolicy(Enum):
    """How overlapping pattern matches are reduced."""
    LONGEST = "longest"
    REPORT_ALL = "report-all"


class NegLabel(Enum):
    """Verbal negation structures with "não"."""
    NEG1 = "NEG1"
    NEG2 = "NEG2"
    NEG3 = "NEG3"


NEG_LABELS: Tuple[str, ...] = tuple(label.value for label in NegLabel)


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpeakerMetadata:
    """Interview header data. Unknown fields are None."""
    interview_id: str
    location: Optional[str] = None
    gender: Optional[str] = None
    age: Optional[int] = None
    city_of_origin: Optional[str] = None
    city_of_residence: Optional[str] = None
    undergrad_period: Optional[str] = None
    role: Optional[Role] = None

    def __post_init__(self):
        if not self.interview_id or not self.interview_id.strip():
            raise ValueError("interview_id must be non-empty")
        if self.age is not None and self.age <= 0:
            raise ValueError(f"age must be positive, got {self.age}")
        for name in ("location", "gender", "city_of_origin", "city_of_residence", "undergrad_period"):
            if getattr(self, name) == "":
                raise ValueError(f"{name} must be None when absent, not an empty string")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            'interview_id': self.interview_id,
            'location': self.location,
            'gender': self.gender,
            'age': self.age,
            'city_of_origin': self.city_of_origin,
            'city_of_residence': self.city_of_residence,
            'undergrad_period': self.undergrad_period,
            'role': self.role.value if self.role else None
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpeakerMetadata':
        """Create from dictionary."""
        role = data.get('role')
        return cls(
            interview_id=data['interview_id'],
            location=data.get('location'),
            gender=data.get('gender'),
            age=data.get('age'),
            city_of_origin=data.get('city_of_origin'),
            city_of_residence=data.get('city_of_residence'),
            undergrad_period=data.get('undergrad_period'),
            role=Role(role) if role else None
        )


class Removal(NamedTuple):
    """One deletion made while cleaning, at its offset in the raw text."""
    offset: int
    removed_text: str


@dataclass(frozen=True)
class Utterance:
    """A cleaned line or question-terminated span."""
    index: int
    text: str
    source_line_span: Tuple[int, int]
    ends_with_question: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'index': self.index,
            'text': self.text,
            'source_line_span': list(self.source_line_span),
            'ends_with_question': self.ends_with_question
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Utterance':
        start, end = data['source_line_span']
        return cls(
            index=data['index'],
            text=data['text'],
            source_line_span=(start, end),
            ends_with_question=data['ends_with_question']
        )


@dataclass
class TranscriptDocument:
    """One ingested speaker track."""
    metadata: SpeakerMetadata
    utterances: List[Utterance]
    raw_char_count: int
    cleaned_char_count: int
    removals: List[Removal] = field(default_factory=list)
    source_path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            'metadata': self.metadata.to_dict(),
            'utterances': [u.to_dict() for u in self.utterances],
            'raw_char_count': self.raw_char_count,
            'cleaned_char_count': self.cleaned_char_count,
            'removals': [[r.offset, r.removed_text] for r in self.removals],
            'source_path': self.source_path
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TranscriptDocument':
        """Create from dictionary."""
        return cls(
            metadata=SpeakerMetadata.from_dict(data['metadata']),
            utterances=[Utterance.from_dict(u) for u in data.get('utterances', [])],
            raw_char_count=data.get('raw_char_count', 0),
            cleaned_char_count=data.get('cleaned_char_count', 0),
            removals=[Removal(offset, text) for offset, text in data.get('removals', [])],
            source_path=data.get('source_path')
        )


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

class RawToken(NamedTuple):
    """An untagged token with its character offsets in the utterance."""
    text: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Token:
    """A tagged token."""
    text: str
    norm: str
    upos: str
    index: int
    char_start: int
    char_end: int
    utterance_index: int

    def __post_init__(self):
        if self.char_start >= self.char_end:
            raise ValueError(f"token {self.text!r} has an empty character span")
        if self.upos not in UPOS_TAGS:
            raise ValueError(f"unknown UPOS tag {self.upos!r}")


def render_tokens(tokens: Sequence[Token]) -> str:
    """
    Rebuild the text covered by a run of tokens from their offsets.

    Gaps between consecutive tokens are filled with spaces, which restores
    cleaned utterance text exactly (cleaning collapses whitespace to one space).
    """
    if not tokens:
        return ""
    parts = [tokens[0].text]
    for previous, token in zip(tokens, tokens[1:]):
        parts.append(" " * (token.char_start - previous.char_end))
        parts.append(token.text)
    return "".join(parts)


@dataclass
class TaggedUtterance:
    """POS-tagged tokens of one utterance."""
    utterance_index: int
    tokens: List[Token]
    tag_source: TagSource

    @property
    def text(self) -> str:
        if not self.tokens:
            return ""
        return " " * self.tokens[0].char_start + render_tokens(self.tokens)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'utterance_index': self.utterance_index,
            'tag_source': self.tag_source.value,
            'tokens': [
                {'text': t.text, 'norm': t.norm, 'upos': t.upos, 'index': t.index,
                 'char_start': t.char_start, 'char_end': t.char_end}
                for t in self.tokens
            ]
        }


# ---------------------------------------------------------------------------
# Patterns and matches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TokenSpec:
    """Constraints on one token. When both sets are given, both must hold."""
    text_equals: Optional[FrozenSet[str]] = None
    pos_in: Optional[FrozenSet[str]] = None

    def __post_init__(self):
        if self.text_equals is None and self.pos_in is None:
            raise InvalidTokenSpec("a token spec needs TEXT, POS or both")
        if self.text_equals is not None and not self.text_equals:
            raise InvalidTokenSpec("TEXT set must not be empty")
        if self.pos_in is not None:
            if not self.pos_in:
                raise InvalidTokenSpec("POS IN set must not be empty")
            unknown = set(self.pos_in) - UPOS_TAGS
            if unknown:
                raise InvalidTokenSpec(f"unknown UPOS tags in POS IN: {sorted(unknown)}")

    def matches(self, token: Token) -> bool:
        if self.text_equals is not None and token.norm not in self.text_equals:
            return False
        if self.pos_in is not None and token.upos not in self.pos_in:
            return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        if self.text_equals is not None:
            texts = sorted(self.text_equals)
            result['TEXT'] = texts[0] if len(texts) == 1 else {'IN': texts}
        if self.pos_in is not None:
            result['POS'] = {'IN': sorted(self.pos_in)}
        return result


@dataclass(frozen=True)
class TokenPattern:
    """An ordered token-spec sequence registered under an id."""
    id: str
    specs: Tuple[TokenSpec, ...]
    max_gap: int = 0
    priority: Optional[int] = None

    def __post_init__(self):
        if self.max_gap < 0:
            raise ValueError(f"max_gap must be >= 0, got {self.max_gap}")


@dataclass(frozen=True)
class MatchSpan:
    """A pattern hit over the token interval [start, end)."""
    pattern_id: str
    start: int
    end: int
    utterance_index: int
    matched_token_indices: Tuple[int, ...]

    def __post_init__(self):
        indices = self.matched_token_indices
        if self.start >= self.end:
            raise ValueError("span start must precede its end")
        if not indices or indices[0] != self.start or indices[-1] != self.end - 1:
            raise ValueError("matched indices must start at start and finish at end - 1")
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("matched indices must be strictly increasing")

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: 'MatchSpan') -> bool:
        return self.start < other.end and other.start < self.end

    def sort_key(self) -> Tuple[int, int, str, Tuple[int, ...]]:
        return (self.start, -self.length, self.pattern_id, self.matched_token_indices)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pattern_id': self.pattern_id,
            'start': self.start,
            'end': self.end,
            'utterance_index': self.utterance_index,
            'matched_token_indices': list(self.matched_token_indices)
        }


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

OCCURRENCE_COLUMNS = [
    'interview_id', 'location', 'gender', 'age', 'city_of_origin', 'city_of_residence',
    'undergrad_period', 'utterance_index', 'label', 'start', 'end', 'matched_text',
    'context_window', 'overlap_group',
]


@dataclass
class NegOccurrence:
    """A classified negation structure."""
    label: NegLabel
    metadata: SpeakerMetadata
    utterance_index: int
    span: MatchSpan
    matched_text: str
    context_window: str
    nao_token_indices: List[int]
    overlap_group: Optional[str] = None

    @property
    def item_id(self) -> str:
        """Alignment key shared with gold annotation files."""
        return occurrence_item_id(self.metadata.interview_id, self.utterance_index, self.span.start)

    def to_row(self) -> Dict[str, str]:
        """Flatten into CSV cells; absent values become empty cells."""
        meta = self.metadata
        cells = {
            'interview_id': meta.interview_id,
            'location': meta.location,
            'gender': meta.gender,
            'age': meta.age,
            'city_of_origin': meta.city_of_origin,
            'city_of_residence': meta.city_of_residence,
            'undergrad_period': meta.undergrad_period,
            'utterance_index': self.utterance_index,
            'label': self.label.value,
            'start': self.span.start,
            'end': self.span.end,
            'matched_text': self.matched_text,
            'context_window': self.context_window,
            'overlap_group': self.overlap_group,
        }
        return {key: "" if value is None else str(value) for key, value in cells.items()}


def occurrence_item_id(interview_id: str, utterance_index: int, start: int) -> str:
    return f"{interview_id}:{utterance_index}:{start}"


@dataclass
class CorpusSummary:
    """Label tallies over a classified corpus. Proportions are None when nothing was classified."""
    total_nao_tokens: int
    classified_count: int
    counts: Dict[str, int]
    proportions: Dict[str, Optional[float]]
    counts_by_interview: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary, proportions rounded to 3 decimal places."""
        return {
            'total_nao': self.total_nao_tokens,
            'classified_count': self.classified_count,
            'counts': dict(self.counts),
            'proportions': {
                label: None if value is None else round(value, 3)
                for label, value in self.proportions.items()
            },
            'counts_by_interview': {k: dict(v) for k, v in self.counts_by_interview.items()}
        }


# ---------------------------------------------------------------------------
# Agreement
# ---------------------------------------------------------------------------

@dataclass
class AnnotationMatrix:
    """Items x annotators label grid."""
    item_ids: List[str]
    annotator_ids: List[str]
    labels: List[List[Optional[str]]]
    categories: Tuple[str, ...] = NEG_LABELS

    def __post_init__(self):
        if len(set(self.categories)) < 2:
            raise ValueError("an annotation matrix needs at least two categories")
        if len(self.labels) != len(self.item_ids):
            raise ValueError("one label row is required per item")

    def column(self, annotator_id: str) -> List[Optional[str]]:
        position = self.annotator_ids.index(annotator_id)
        return [row[position] if position < len(row) else None for row in self.labels]


@dataclass
class AgreementReport:
    """Inter-annotator agreement and the unified gold labels."""
    fleiss_kappa: Optional[float]
    pairwise_cohen: Dict[Tuple[str, str], Optional[float]]
    unified_labels: Dict[str, str]
    tie_count: int
    annotator_ids: List[str] = field(default_factory=list)
    label_distribution: Dict[str, int] = field(default_factory=dict)

    def heatmap(self) -> List[List[Optional[float]]]:
        """Pairwise Cohen values as a square matrix in annotator order."""
        return [
            [self.pairwise_cohen.get((a, b)) for b in self.annotator_ids]
            for a in self.annotator_ids
        ]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        pairwise: Dict[str, Dict[str, Optional[float]]] = {}
        for (a, b), value in self.pairwise_cohen.items():
            pairwise.setdefault(a, {})[b] = value
        return {
            'fleiss_kappa': self.fleiss_kappa,
            'pairwise_cohen': pairwise,
            'annotators': list(self.annotator_ids),
            'heatmap': self.heatmap(),
            'tie_count': self.tie_count,
            'item_count': len(self.unified_labels),
            'label_distribution': dict(self.label_distribution),
            'unified_labels': dict(self.unified_labels)
        }


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass
class AlignmentResult:
    """Gold/predicted pairs over shared items, plus the items only one side has."""
    pairs: List[Tuple[str, str]]
    item_ids: List[str]
    uncovered: List[str]
    spurious: List[str]


@dataclass
class ConfusionMatrix:
    """Rows are gold labels, columns are predicted labels."""
    categories: Tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'categories': list(self.categories),
            'counts': self.counts.astype(int).tolist()
        }


@dataclass
class ClassMetrics:
    """Per-class scores; None marks a zero-denominator cell."""
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    support: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
            'support': self.support
        }


@dataclass
class MetricsReport:
    """Classification scores derived from a confusion matrix."""
    per_class: Dict[str, ClassMetrics]
    accuracy: float
    macro_f1: Optional[float]
    macro_excluded: int
    micro_precision: float
    micro_recall: float
    kappa_vs_gold: Optional[float]
    total: int

    @property
    def support(self) -> Dict[str, int]:
        return {label: m.support for label, m in self.per_class.items()}

    @property
    def undefined_cells(self) -> List[str]:
        """Names of metric cells that are undefined, e.g. "NEG2.precision"."""
        flagged = []
        for label, m in self.per_class.items():
            for name in ('precision', 'recall', 'f1'):
                if getattr(m, name) is None:
                    flagged.append(f"{label}.{name}")
        return flagged

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            'per_class': {label: m.to_dict() for label, m in self.per_class.items()},
            'accuracy': self.accuracy,
            'macro_f1': self.macro_f1,
            'macro_f1_excluded_classes': self.macro_excluded,
            'micro_precision': self.micro_precision,
            'micro_recall': self.micro_recall,
            'kappa_vs_gold': self.kappa_vs_gold,
            'support': self.support,
            'total': self.total,
            'undefined': self.undefined_cells
        }
