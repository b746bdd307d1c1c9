"""
Lexicon-based POS tagging for transcripts that have no external tags.

Exact lexicon hits win; unknown words ending in a Portuguese verb inflection
suffix are tagged VERB; everything else is X. "não" is always ADV and "?" is
always PUNCT.
"""

import logging
import os
from typing import Dict, List, Optional, Sequence

from negscan.core.config import settings
from negscan.core.exceptions import LexiconNotLoaded, NegScanError
from negscan.models.data_models import (
    NAO,
    QUESTION_MARK,
    UPOS_TAGS,
    RawToken,
    TaggedUtterance,
    TagSource,
    Token,
    TranscriptDocument,
)
from negscan.services.text_processor import text_processor

logger = logging.getLogger(__name__)

# Shorter words are never guessed from their ending ("mar", "ir", "era").
MIN_STEM_LENGTH = 2


class VerbLexicon:
    """Form -> UPOS lookup table loaded from a `form<TAB>UPOS` file."""

    def __init__(self, entries: Optional[Dict[str, str]] = None, suffixes: Optional[Sequence[str]] = None):
        self.entries: Dict[str, str] = {}
        for form, upos in (entries or {}).items():
            self.add(form, upos)
        # Longest suffix first so "-ando" is tried before "-do".
        self.suffixes: List[str] = sorted(
            {text_processor.normalize_form(s.lstrip("-")) for s in (suffixes or []) if s.strip("-")},
            key=lambda s: (-len(s), s),
        )

    def add(self, form: str, upos: str) -> None:
        upos = upos.strip().upper()
        if upos not in UPOS_TAGS:
            raise ValueError(f"unknown UPOS tag {upos!r} for {form!r}")
        self.entries[text_processor.normalize_form(form.strip())] = upos

    def lookup(self, norm: str) -> Optional[str]:
        return self.entries.get(norm)

    def verb_suffix(self, norm: str) -> Optional[str]:
        for suffix in self.suffixes:
            if norm.endswith(suffix) and len(norm) - len(suffix) >= MIN_STEM_LENGTH:
                return suffix
        return None

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, lexicon_path: os.PathLike, suffixes_path: Optional[os.PathLike] = None) -> 'VerbLexicon':
        """
        Load a lexicon file and, optionally, a suffix list.

        Args:
            lexicon_path: UTF-8 file with one `form<TAB>UPOS` entry per line;
                blank lines and lines starting with "#" are skipped.
            suffixes_path: UTF-8 file with one suffix per line; defaults to
                the bundled list.

        Returns:
            The loaded lexicon.

        Raises:
            LexiconNotLoaded: The file cannot be read or holds no entries.
        """
        entries: Dict[str, str] = {}
        try:
            with open(lexicon_path, "r", encoding="utf-8") as f:
                for line_number, line in enumerate(f, start=1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    parts = line.split("\t")
                    if len(parts) != 2 or parts[1].strip().upper() not in UPOS_TAGS:
                        raise NegScanError(f"expected 'form<TAB>UPOS' in {lexicon_path}, got {line!r}", line_number)
                    entries[parts[0]] = parts[1]
        except (OSError, UnicodeDecodeError) as e:
            raise LexiconNotLoaded(f"cannot read lexicon {lexicon_path}: {e}")
        if not entries:
            raise LexiconNotLoaded(f"lexicon {lexicon_path} has no entries")

        suffixes = load_suffixes(suffixes_path or settings.suffixes_path)
        lexicon = cls(entries, suffixes)
        logger.info(f"Loaded lexicon with {len(lexicon)} entries and {len(lexicon.suffixes)} verb suffixes from {lexicon_path}")
        return lexicon


def load_suffixes(path: os.PathLike) -> List[str]:
    with open(path, "r", encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]


class LexiconTagger:
    """Tags raw tokens with a VerbLexicon."""

    def __init__(self, lexicon: Optional[VerbLexicon] = None):
        self.lexicon = lexicon

    def tag_token(self, norm: str) -> str:
        if norm == NAO:
            return "ADV"
        if norm == QUESTION_MARK:
            return "PUNCT"
        hit = self.lexicon.lookup(norm)
        if hit is not None:
            return hit
        if self.lexicon.verb_suffix(norm):
            return "VERB"
        return "X"

    def tag(self, tokens: Sequence[RawToken], utterance_index: int = 0) -> TaggedUtterance:
        """
        Tag the tokens of one utterance.

        Args:
            tokens: Raw tokens from TextProcessor.tokenize.
            utterance_index: Index of the utterance in its document.

        Returns:
            The tagged utterance.

        Raises:
            LexiconNotLoaded: If no lexicon is set.
        """
        if self.lexicon is None:
            raise LexiconNotLoaded("load a lexicon before tagging")

        tagged = []
        for index, (text, start, end) in enumerate(tokens):
            norm = text_processor.normalize_form(text)
            tagged.append(Token(
                text=text,
                norm=norm,
                upos=self.tag_token(norm),
                index=index,
                char_start=start,
                char_end=end,
                utterance_index=utterance_index,
            ))
        return TaggedUtterance(utterance_index, tagged, TagSource.LEXICON_TAGGER)

    def tag_document(self, document: TranscriptDocument) -> List[TaggedUtterance]:
        """Tokenize and tag every utterance of an ingested transcript."""
        return [
            self.tag(text_processor.tokenize(utterance), utterance.index)
            for utterance in document.utterances
        ]
