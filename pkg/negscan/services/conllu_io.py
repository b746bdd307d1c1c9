"""
CoNLL-U input and output for externally tagged corpora.

Only FORM and UPOS are used. Multiword-token ranges ("1-2") and empty nodes
("1.1") are skipped in favor of the syntactic words. Character offsets are
synthesized by joining forms with single spaces.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import conllu
import regex as re
from conllu.exceptions import ParseException
from conllu.models import TokenList

from negscan.core.exceptions import MalformedConllu, MalformedField
from negscan.models.data_models import UPOS_TAGS, SpeakerMetadata, TaggedUtterance, TagSource, Token
from negscan.services.text_processor import text_processor
from negscan.services.transcript_loader import DEFAULT_HEADER_SCHEMA, ROLE_LABELS, HeaderSchema, parse_header

logger = logging.getLogger(__name__)

CONLLU_FIELDS = ["id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc"]
TOKEN_ID = re.compile(r"[1-9][0-9]*|[1-9][0-9]*-[1-9][0-9]*|[0-9]+\.[1-9][0-9]*")
WORD_ID = re.compile(r"[1-9][0-9]*")


def validate_conllu(file_text: str) -> None:
    """
    Check the shape of every token line.

    Raises:
        MalformedConllu: Wrong column count, a non-integer ID, or a word
            without a UPOS tag; the message names the line.
    """
    for line_number, line in enumerate(file_text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != len(CONLLU_FIELDS):
            raise MalformedConllu(f"expected {len(CONLLU_FIELDS)} tab-separated columns, found {len(columns)}", line_number)
        token_id = columns[0]
        if not TOKEN_ID.fullmatch(token_id):
            raise MalformedConllu(f"token ID {token_id!r} is not an integer", line_number)
        if WORD_ID.fullmatch(token_id) and columns[3] not in UPOS_TAGS:
            raise MalformedConllu(f"UPOS {columns[3]!r} is not a Universal POS tag", line_number)


def _parse(file_text: str) -> List[TokenList]:
    validate_conllu(file_text)
    try:
        return conllu.parse(file_text, fields=CONLLU_FIELDS)
    except ParseException as e:
        raise MalformedConllu(f"cannot parse CoNLL-U: {e}")


def _tagged_utterances(sentences: Sequence[TokenList]) -> List[TaggedUtterance]:
    utterances: List[TaggedUtterance] = []
    for sentence in sentences:
        words = [t for t in sentence if isinstance(t["id"], int)]
        skipped = len(sentence) - len(words)
        if skipped:
            logger.debug(f"Skipped {skipped} multiword/empty-node lines in sentence {len(utterances)}")
        if not words:
            continue

        utterance_index = len(utterances)
        tokens = []
        offset = 0
        for index, word in enumerate(words):
            form = word["form"]
            tokens.append(Token(
                text=form,
                norm=text_processor.normalize_form(form),
                upos=word["upos"],
                index=index,
                char_start=offset,
                char_end=offset + len(form),
                utterance_index=utterance_index,
            ))
            offset += len(form) + 1
        utterances.append(TaggedUtterance(utterance_index, tokens, TagSource.CONLLU))
    return utterances


def read_conllu(file_text: str) -> List[TaggedUtterance]:
    """
    Read tagged utterances from CoNLL-U text.

    Args:
        file_text: CoNLL-U content (10 tab-separated columns, blank-line
            separated sentences, "#" comments).

    Returns:
        One TaggedUtterance per non-empty sentence, in file order.
    """
    return _tagged_utterances(_parse(file_text))


def read_conllu_document(
    file_text: str,
    fallback_id: str,
    header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA,
) -> Tuple[SpeakerMetadata, List[TaggedUtterance]]:
    """
    Read a CoNLL-U file together with its interview metadata.

    Metadata comes from `# key = value` comments of the first sentence, with
    the same keys as a transcript header; the interview id defaults to
    fallback_id.
    """
    sentences = _parse(file_text)
    comments = dict(sentences[0].metadata) if sentences else {}
    known = header_schema.by_key()
    pairs = {key: str(value) for key, value in comments.items() if key in known and value}
    pairs.setdefault("id", fallback_id)

    header = "".join(f"{header_schema.prefix}{key}: {value}\n" for key, value in pairs.items()) + "\n"
    try:
        metadata = parse_header(header, header_schema)
    except MalformedField as e:
        raise MalformedConllu(f"invalid interview metadata comment: {e}")
    return metadata, _tagged_utterances(sentences)


def write_conllu(utterances: Sequence[TaggedUtterance], metadata: Optional[SpeakerMetadata] = None,
                 header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA) -> str:
    """Serialize tagged utterances; metadata goes into comments of the first sentence."""
    parts = []
    for position, utterance in enumerate(utterances):
        comments = {}
        if position == 0 and metadata is not None:
            for header_field in header_schema.fields:
                value = getattr(metadata, header_field.attribute)
                if value is not None:
                    comments[header_field.key] = ROLE_LABELS.get(value, value) if header_field.attribute == "role" else str(value)
        comments["sent_id"] = str(utterance.utterance_index)
        comments["text"] = utterance.text

        rows = [
            {
                "id": token.index + 1, "form": token.text, "lemma": None, "upos": token.upos,
                "xpos": None, "feats": None, "head": None, "deprel": None, "deps": None, "misc": None,
            }
            for token in utterance.tokens
        ]
        parts.append(TokenList(rows, metadata=comments).serialize())
    return "".join(parts)
