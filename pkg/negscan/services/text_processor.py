"""
Text preprocessing utilities: utterance segmentation, tokenization and
token normalization for cleaned transcript text.
"""

import logging
import unicodedata
from typing import List

import regex as re

from negscan.models.data_models import QUESTION_MARK, RawToken, Utterance

logger = logging.getLogger(__name__)

# A question-terminated span, or the rest of the line.
SEGMENT_PATTERN = re.compile(r"[^?]*\?|[^?]+")
# "?" is a token of its own; everything else splits on whitespace.
TOKEN_PATTERN = re.compile(r"\?|[^\s?]+")

VARIANT_FORMS = {"n": "não", "ñ": "não"}


class TextProcessor:
    """Class for text preprocessing operations."""

    def normalize_form(self, text: str) -> str:
        """
        Normalize a surface form for matching.

        NFC composition and lowercasing; diacritics are preserved, so "nao"
        and "não" stay distinct.
        """
        return unicodedata.normalize("NFC", text).lower()

    def normalize_variant(self, norm: str) -> str:
        """Map the written-register variants "n" and "ñ" to "não"."""
        return VARIANT_FORMS.get(norm, norm)

    def segment_utterances(self, cleaned_text: str) -> List[Utterance]:
        """
        Segment cleaned text into utterances.

        A boundary falls at every newline and right after every "?".

        Args:
            cleaned_text: Text that has been through disfluency cleaning.

        Returns:
            Utterances in text order. Line spans are 1-based lines of
            cleaned_text.
        """
        utterances: List[Utterance] = []
        if not cleaned_text:
            return utterances

        for line_number, line in enumerate(cleaned_text.split("\n"), start=1):
            for segment in SEGMENT_PATTERN.finditer(line):
                text = segment.group().strip()
                if not text:
                    continue
                utterances.append(Utterance(
                    index=len(utterances),
                    text=text,
                    source_line_span=(line_number, line_number),
                    ends_with_question=text.endswith(QUESTION_MARK),
                ))

        logger.debug(f"Segmented {len(utterances)} utterances")
        return utterances

    def tokenize(self, utterance: Utterance) -> List[RawToken]:
        """
        Split an utterance into tokens with character offsets.

        Tokenization is non-destructive: the utterance text is recovered
        from the tokens and the gaps between their offsets.
        """
        return self.tokenize_text(utterance.text)

    def tokenize_text(self, text: str) -> List[RawToken]:
        if not text:
            return []
        return [RawToken(m.group(), m.start(), m.end()) for m in TOKEN_PATTERN.finditer(text)]


text_processor = TextProcessor()
