"""
Exception hierarchy for the negation scanner.

Every error raised by the library derives from NegScanError so the CLI can
report per-file failures without swallowing programming errors.
"""

from typing import Optional


class NegScanError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


# Transcript ingestion

class MissingHeader(NegScanError):
    """The file does not start with a terminated `@key: value` header block."""


class MalformedField(NegScanError):
    """A header line does not satisfy its schema."""


class InvalidMarkerPattern(NegScanError):
    """A disfluency marker regex failed to compile."""


# Token stream

class LexiconNotLoaded(NegScanError):
    """The lexicon tagger was used before a lexicon was loaded."""


class MalformedConllu(NegScanError):
    """A CoNLL-U token line has the wrong shape."""


# Pattern matching

class DuplicatePatternId(NegScanError):
    """A pattern id is already registered in the matcher."""


class EmptyPattern(NegScanError):
    """A pattern has no token specs."""


class InvalidTokenSpec(NegScanError):
    """A token spec constrains neither text nor POS, or uses an empty set."""


class InvalidPatternFile(NegScanError):
    """The pattern file is not valid JSON or does not follow the pattern schema."""


class UnknownPatternInPriorityList(NegScanError):
    """The overlap priority list names a pattern the matcher does not know."""


# Classification

class MissingRequiredPattern(NegScanError):
    """A negation pattern (NEG1, NEG2 or NEG3) is not loaded."""


# Agreement and evaluation

class RaggedMatrix(NegScanError):
    """Items were labelled by a different number of annotators."""


class EmptyMatrix(NegScanError):
    """There is nothing to compute a statistic over."""


class LengthMismatch(NegScanError):
    """Two label sequences have different lengths."""


class EmptyIntersection(NegScanError):
    """Gold and predicted labels share no item id."""


class UnknownLabel(NegScanError):
    """A label is outside the declared category set."""


# Configuration

class ConfigError(NegScanError):
    """The run configuration is invalid."""
