"""
Models package for data structures and schemas.
"""

from .data_models import (
    NAO,
    NEG_LABELS,
    UNRESOLVED,
    UPOS_TAGS,
    AgreementReport,
    AlignmentResult,
    AnnotationMatrix,
    ClassMetrics,
    ConfusionMatrix,
    CorpusSummary,
    MatchSpan,
    MetricsReport,
    NegLabel,
    NegOccurrence,
    OverlapPolicy,
    RawToken,
    Removal,
    Role,
    SpeakerMetadata,
    TaggedUtterance,
    TagSource,
    Token,
    TokenPattern,
    TokenSpec,
    TranscriptDocument,
    Utterance,
)
from .schemas import PatternSchema, TokenSpecSchema

__all__ = [
    'NAO',
    'NEG_LABELS',
    'UNRESOLVED',
    'UPOS_TAGS',
    'AgreementReport',
    'AlignmentResult',
    'AnnotationMatrix',
    'ClassMetrics',
    'ConfusionMatrix',
    'CorpusSummary',
    'MatchSpan',
    'MetricsReport',
    'NegLabel',
    'NegOccurrence',
    'OverlapPolicy',
    'RawToken',
    'Removal',
    'Role',
    'SpeakerMetadata',
    'TaggedUtterance',
    'TagSource',
    'Token',
    'TokenPattern',
    'TokenSpec',
    'TranscriptDocument',
    'Utterance',
    'PatternSchema',
    'TokenSpecSchema',
]
