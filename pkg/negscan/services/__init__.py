"""
Services package: ingestion, tagging, matching, classification and scoring.
"""

from .text_processor import TextProcessor, text_processor
from .transcript_loader import TranscriptLoader, ingest_text
from .pos_tagger import LexiconTagger, VerbLexicon
from .matcher import Matcher, load_matcher, load_patterns, resolve_overlaps
from .neg_classifier import NegationClassifier

__all__ = [
    'TextProcessor',
    'text_processor',
    'TranscriptLoader',
    'ingest_text',
    'LexiconTagger',
    'VerbLexicon',
    'Matcher',
    'load_matcher',
    'load_patterns',
    'resolve_overlaps',
    'NegationClassifier'
]
