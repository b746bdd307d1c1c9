"""
Synthetic corpora with known ground truth.

Two generators: tagged utterances holding exactly one negation structure
each, at chosen label proportions; and raw transcripts composed from the
header schema and disfluency markers, for ingestion round-trip checks.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from negscan.models.data_models import (
    NEG_LABELS,
    Role,
    SpeakerMetadata,
    TaggedUtterance,
    TagSource,
    Token,
    occurrence_item_id,
)
from negscan.services.text_processor import text_processor
from negscan.services.transcript_loader import DEFAULT_HEADER_SCHEMA, HeaderSchema, render_header

logger = logging.getLogger(__name__)

# Label mix of a manually unified spoken corpus (NEG1 / NEG2 / NEG3).
SPOKEN_PROPORTIONS = {"NEG1": 0.908, "NEG2": 0.048, "NEG3": 0.044}

SUBJECTS = [("eu", "PRON"), ("ele", "PRON"), ("a", "DET"), ("você", "PRON"), ("ela", "PRON")]
VERBS = [("gosto", "VERB"), ("sei", "VERB"), ("acho", "VERB"), ("tenho", "VERB"), ("é", "AUX"),
         ("foi", "AUX"), ("quero", "VERB"), ("conheço", "VERB"), ("lembro", "VERB")]
TAILS = [("disso", "ADP"), ("muito", "ADV"), ("de", "ADP"), ("casa", "NOUN"), ("lá", "ADV"),
         ("aqui", "ADV"), ("nada", "PRON"), ("barulho", "NOUN")]
INTERJECTIONS = [("ai", "INTJ"), ("né", "INTJ"), ("assim", "ADV"), ("olha", "INTJ")]


@dataclass
class SyntheticCorpus:
    """Tagged utterances of one synthetic interview and the label of each occurrence."""
    metadata: SpeakerMetadata
    utterances: List[TaggedUtterance]
    gold: Dict[str, str]
    counts: Dict[str, int] = field(default_factory=dict)


def exact_counts(n: int, proportions: Mapping[str, float]) -> Dict[str, int]:
    """
    Split n items across labels by the largest-remainder rule.

    The counts sum to n and each differs from n * p by less than one.
    """
    total = sum(proportions.values())
    if n < 0 or total <= 0:
        raise ValueError("n must be >= 0 and proportions must have a positive sum")
    labels = list(proportions)
    quotas = np.array([n * proportions[label] / total for label in labels])
    counts = np.floor(quotas).astype(int)
    remainder = n - int(counts.sum())
    # stable sort keeps label order on equal fractions
    order = np.argsort(-(quotas - counts), kind="stable")
    counts[order[:remainder]] += 1
    return {label: int(count) for label, count in zip(labels, counts)}


def _tagged(words: Sequence[Tuple[str, str]], utterance_index: int) -> TaggedUtterance:
    tokens = []
    offset = 0
    for index, (text, upos) in enumerate(words):
        tokens.append(Token(
            text=text,
            norm=text_processor.normalize_form(text),
            upos=upos,
            index=index,
            char_start=offset,
            char_end=offset + len(text),
            utterance_index=utterance_index,
        ))
        offset += len(text) + 1
    return TaggedUtterance(utterance_index, tokens, TagSource.LEXICON_TAGGER)


def _pick(rng: np.random.Generator, choices: Sequence[Tuple[str, str]]) -> Tuple[str, str]:
    return choices[int(rng.integers(len(choices)))]


def structure_words(label: str, rng: np.random.Generator) -> Tuple[List[Tuple[str, str]], int]:
    """
    Words of one utterance holding a single `label` structure.

    Returns:
        The (text, UPOS) pairs and the token index where the structure starts.
    """
    prefix: List[Tuple[str, str]] = []
    if rng.random() < 0.3:
        prefix.append(_pick(rng, INTERJECTIONS))
    prefix.append(_pick(rng, SUBJECTS))
    verb = _pick(rng, VERBS)
    nao = ("não", "ADV")

    if label == "NEG1":
        core = [nao, verb]
    elif label == "NEG2":
        core = [nao, verb, nao]
    elif label == "NEG3":
        core = [verb, nao]
    else:
        raise ValueError(f"unknown label {label!r}")

    # tails hold no verb and no "não", so no second structure can form
    tail = [_pick(rng, TAILS) for _ in range(int(rng.integers(0, 3)))]
    return prefix + core + tail, len(prefix)


def generate_tagged_corpus(
    n: int,
    proportions: Mapping[str, float] = SPOKEN_PROPORTIONS,
    seed: Optional[int] = None,
    interview_id: str = "SYN-01",
) -> SyntheticCorpus:
    """
    Build n utterances, one negation structure each, in shuffled order.

    Args:
        n: Number of utterances (and occurrences).
        proportions: Label -> share; normalized if it does not sum to 1.
        seed: Seed for numpy's default generator.
        interview_id: Interview id used in the metadata and item ids.

    Returns:
        The corpus, with gold labels keyed by occurrence item id.
    """
    unknown = set(proportions) - set(NEG_LABELS)
    if unknown:
        raise ValueError(f"unknown labels in proportions: {sorted(unknown)}")

    rng = np.random.default_rng(seed)
    counts = exact_counts(n, proportions)
    labels = np.array([label for label, count in counts.items() for _ in range(count)], dtype=object)
    rng.shuffle(labels)

    utterances = []
    gold = {}
    for utterance_index, label in enumerate(labels):
        words, start = structure_words(label, rng)
        utterances.append(_tagged(words, utterance_index))
        gold[occurrence_item_id(interview_id, utterance_index, start)] = label

    metadata = SpeakerMetadata(interview_id=interview_id, role=Role.INFORMANT)
    logger.info(f"Generated {n} synthetic utterances: {counts}")
    return SyntheticCorpus(metadata, utterances, gold, counts)


# ---------------------------------------------------------------------------
# Raw transcripts
# ---------------------------------------------------------------------------

BODY_WORDS = ["eu", "não", "gosto", "de", "casa", "lá", "ai", "go/", "sei", "né", "a", "gente",
              "tá", "muito", "bom", "pra", "n", "mas", "quando", "d'água", "bem-vindo"]
MARKERS = ["((riso))", "((pausa))", "((tosse))", "(...)", ",", ".", "!", ";", "\""]
LOCATIONS = ["Itabaiana", "Aracaju", "Lagarto", "Estância", "Propriá"]


def random_metadata(rng: np.random.Generator, index: int = 0) -> SpeakerMetadata:
    """Metadata with a random subset of the optional fields filled."""
    def maybe(value):
        return value if rng.random() < 0.8 else None

    return SpeakerMetadata(
        interview_id=f"D{index:02d}-{int(rng.integers(1, 100)):02d}",
        location=maybe(str(rng.choice(LOCATIONS))),
        gender=maybe(str(rng.choice(["F", "M"]))),
        age=maybe(int(rng.integers(17, 80))),
        city_of_origin=maybe(str(rng.choice(LOCATIONS))),
        city_of_residence=maybe(str(rng.choice(LOCATIONS))),
        undergrad_period=maybe(str(int(rng.integers(1, 11)))),
        role=maybe(Role.INFORMANT if rng.random() < 0.5 else Role.DOCUMENTER),
    )


def random_body(rng: np.random.Generator, max_lines: int = 8, max_words: int = 12) -> str:
    """Transcript body of words, markers, question marks and uneven spacing."""
    lines = []
    for _ in range(int(rng.integers(0, max_lines + 1))):
        pieces = []
        for _ in range(int(rng.integers(0, max_words + 1))):
            roll = rng.random()
            if roll < 0.2:
                pieces.append(str(rng.choice(MARKERS)))
            elif roll < 0.27:
                pieces.append("?")
            else:
                pieces.append(str(rng.choice(BODY_WORDS)))
        line = ""
        for piece in pieces:
            # pieces sometimes hug the previous one: "casa," or "gosto((riso))"
            line += piece if line and rng.random() < 0.2 else " " * int(rng.integers(1, 4)) + piece
        if rng.random() < 0.3:
            line += " " * int(rng.integers(1, 3))
        lines.append(line)
    return "\n".join(lines)


def random_transcript(rng: np.random.Generator, index: int = 0,
                      header_schema: HeaderSchema = DEFAULT_HEADER_SCHEMA) -> Tuple[str, SpeakerMetadata, str]:
    """
    Compose a raw transcript.

    Returns:
        (file text, the metadata written into its header, the raw body).
    """
    metadata = random_metadata(rng, index)
    body = random_body(rng)
    return render_header(metadata, header_schema) + body, metadata, body
