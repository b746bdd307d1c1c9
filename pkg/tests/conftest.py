from pathlib import Path
from typing import Sequence, Tuple

import pytest

from negscan.core.config import settings
from negscan.models.data_models import TaggedUtterance, TagSource, Token
from negscan.services.matcher import Matcher, load_patterns
from negscan.services.neg_classifier import NegationClassifier
from negscan.services.pos_tagger import LexiconTagger, VerbLexicon
from negscan.services.text_processor import text_processor

ROOT = Path(__file__).resolve().parent.parent
DEMO_DIR = ROOT / "fixtures" / "demo"


def make_utterance(words: Sequence[Tuple[str, str]], utterance_index: int = 0) -> TaggedUtterance:
    """Tagged utterance from (text, UPOS) pairs joined by single spaces."""
    tokens = []
    offset = 0
    for index, (text, upos) in enumerate(words):
        tokens.append(Token(text, text_processor.normalize_form(text), upos, index,
                            offset, offset + len(text), utterance_index))
        offset += len(text) + 1
    return TaggedUtterance(utterance_index, tokens, TagSource.LEXICON_TAGGER)


@pytest.fixture
def demo_dir() -> Path:
    return DEMO_DIR


@pytest.fixture(scope="session")
def lexicon() -> VerbLexicon:
    return VerbLexicon.load(settings.lexicon_path)


@pytest.fixture
def tagger(lexicon) -> LexiconTagger:
    return LexiconTagger(lexicon)


@pytest.fixture(scope="session")
def table_patterns():
    return load_patterns(settings.patterns_path)


@pytest.fixture
def matcher(table_patterns) -> Matcher:
    return Matcher(table_patterns)


@pytest.fixture
def classifier(matcher) -> NegationClassifier:
    return NegationClassifier(matcher)
