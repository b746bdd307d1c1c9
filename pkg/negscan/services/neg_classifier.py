"""
Negation classification over tagged corpora.

Runs the NEG1/NEG2/NEG3 patterns over every utterance, resolves overlaps and
turns the surviving spans into occurrence records with interview metadata.
"""

import logging
from collections import Counter
from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from negscan.core.config import settings
from negscan.core.exceptions import MissingRequiredPattern
from negscan.models.data_models import (
    NAO,
    NEG_LABELS,
    OCCURRENCE_COLUMNS,
    CorpusSummary,
    MatchSpan,
    NegLabel,
    NegOccurrence,
    OverlapPolicy,
    SpeakerMetadata,
    TaggedUtterance,
    render_tokens,
)
from negscan.services.matcher import Matcher
from negscan.services.text_processor import VARIANT_FORMS, text_processor

logger = logging.getLogger(__name__)

# Documents handed to classify_documents: interview metadata and its utterances.
TaggedDocument = Tuple[SpeakerMetadata, List[TaggedUtterance]]


def count_nao(corpus: Iterable[TaggedUtterance], variants_enabled: bool = False) -> int:
    """
    Count "não" tokens, optionally including the "n" and "ñ" variants.
    """
    accepted = {NAO, *VARIANT_FORMS} if variants_enabled else {NAO}
    return sum(1 for utterance in corpus for token in utterance.tokens if token.norm in accepted)


def summarize(occurrences: Sequence[NegOccurrence], total_nao: int) -> CorpusSummary:
    """
    Tally occurrences per label.

    Args:
        occurrences: Classified occurrences.
        total_nao: Number of "não" tokens in the corpus the occurrences came from.

    Returns:
        Counts, proportions (None when nothing was classified) and per-interview counts.
    """
    counts = Counter(o.label.value for o in occurrences)
    classified = len(occurrences)
    by_interview: Dict[str, Dict[str, int]] = {}
    for occurrence in occurrences:
        tally = by_interview.setdefault(occurrence.metadata.interview_id, {label: 0 for label in NEG_LABELS})
        tally[occurrence.label.value] += 1

    return CorpusSummary(
        total_nao_tokens=total_nao,
        classified_count=classified,
        counts={label: counts.get(label, 0) for label in NEG_LABELS},
        proportions={
            label: counts.get(label, 0) / classified if classified else None
            for label in NEG_LABELS
        },
        counts_by_interview=dict(sorted(by_interview.items())),
    )


def assign_overlap_groups(occurrences: List[NegOccurrence], next_group: int = 1) -> int:
    """
    Label runs of mutually overlapping occurrences within one utterance.

    Occurrences must be in span order. Each connected run of two or more
    gets `g<N>`; isolated occurrences keep an empty group.

    Returns:
        The next unused group number.
    """
    component: List[NegOccurrence] = []
    component_end = -1

    def close() -> None:
        nonlocal next_group
        if len(component) > 1:
            for member in component:
                member.overlap_group = f"g{next_group}"
            next_group += 1

    for occurrence in occurrences:
        if component and occurrence.span.start < component_end:
            component.append(occurrence)
            component_end = max(component_end, occurrence.span.end)
        else:
            close()
            component = [occurrence]
            component_end = occurrence.span.end
    close()
    return next_group


class NegationClassifier:
    """
    Classifies negation structures with a pattern matcher.

    Only spans whose pattern id is NEG1, NEG2 or NEG3 become occurrences.
    """

    def __init__(
        self,
        matcher: Matcher,
        policy: OverlapPolicy = settings.policy,
        priority: Optional[Sequence[str]] = None,
        context_window: int = settings.context_window,
        variants_enabled: bool = False,
    ):
        missing = [label for label in NEG_LABELS if label not in matcher]
        if missing:
            raise MissingRequiredPattern(f"pattern set lacks required ids: {missing}")
        if context_window < 0:
            raise ValueError(f"context_window must be >= 0, got {context_window}")

        self.matcher = matcher
        self.policy = policy
        self.priority = matcher.priority_order(priority)
        self.context_window = context_window
        self.variants_enabled = variants_enabled
        logger.info(f"Classifier ready: policy={policy.value}, priority={self.priority}, "
                    f"context={context_window}, variants={variants_enabled}")

    def count_nao(self, corpus: Iterable[TaggedUtterance]) -> int:
        return count_nao(corpus, self.variants_enabled)

    def prepare(self, utterance: TaggedUtterance) -> TaggedUtterance:
        """Rewrite "n"/"ñ" norms to "não" when variants are enabled."""
        if not self.variants_enabled:
            return utterance
        tokens = [
            replace(token, norm=text_processor.normalize_variant(token.norm))
            if token.norm in VARIANT_FORMS else token
            for token in utterance.tokens
        ]
        return replace(utterance, tokens=tokens)

    def find_spans(self, utterance: TaggedUtterance) -> List[MatchSpan]:
        spans = [s for s in self.matcher.find_matches(utterance) if s.pattern_id in NEG_LABELS]
        return self.matcher.resolve_overlaps(spans, self.policy, self.priority)

    def classify_utterance(self, utterance: TaggedUtterance, metadata: SpeakerMetadata) -> List[NegOccurrence]:
        """
        Classify one utterance.

        Args:
            utterance: Tagged utterance.
            metadata: Interview metadata copied into each occurrence.

        Returns:
            Occurrences in span order, overlap groups unassigned.
        """
        utterance = self.prepare(utterance)
        tokens = utterance.tokens
        occurrences = []
        for span in self.find_spans(utterance):
            window_start = max(0, span.start - self.context_window)
            window_end = min(len(tokens), span.end + self.context_window)
            occurrences.append(NegOccurrence(
                label=NegLabel(span.pattern_id),
                metadata=metadata,
                utterance_index=utterance.utterance_index,
                span=span,
                matched_text=render_tokens(tokens[span.start:span.end]),
                context_window=render_tokens(tokens[window_start:window_end]),
                nao_token_indices=[i for i in span.matched_token_indices if tokens[i].norm == NAO],
            ))
        return occurrences

    def _classify(self, corpus: Sequence[TaggedUtterance], metadata: SpeakerMetadata,
                  next_group: int) -> Tuple[List[NegOccurrence], int]:
        occurrences: List[NegOccurrence] = []
        for utterance in corpus:
            found = self.classify_utterance(utterance, metadata)
            next_group = assign_overlap_groups(found, next_group)
            occurrences.extend(found)
        return occurrences, next_group

    def classify_corpus(self, corpus: Sequence[TaggedUtterance],
                        metadata: SpeakerMetadata) -> Tuple[List[NegOccurrence], CorpusSummary]:
        """
        Classify every utterance of one interview.

        Returns:
            Occurrences in corpus order and their summary.
        """
        occurrences, _ = self._classify(corpus, metadata, 1)
        summary = summarize(occurrences, self.count_nao(corpus))
        logger.info(f"Classified {summary.classified_count} occurrences in {metadata.interview_id} "
                    f"({summary.total_nao_tokens} 'não' tokens)")
        return occurrences, summary

    def classify_documents(self, documents: Sequence[TaggedDocument]) -> Tuple[List[NegOccurrence], CorpusSummary]:
        """
        Classify several interviews; occurrences keep document order.
        """
        occurrences: List[NegOccurrence] = []
        total_nao = 0
        next_group = 1
        for metadata, corpus in documents:
            found, next_group = self._classify(corpus, metadata, next_group)
            occurrences.extend(found)
            total_nao += self.count_nao(corpus)

        summary = summarize(occurrences, total_nao)
        logger.info(f"Classified {summary.classified_count} occurrences across {len(documents)} documents "
                    f"({total_nao} 'não' tokens): {summary.counts}")
        return occurrences, summary

    def summarize(self, occurrences: Sequence[NegOccurrence], total_nao: int) -> CorpusSummary:
        return summarize(occurrences, total_nao)


def occurrences_to_frame(occurrences: Sequence[NegOccurrence]) -> pd.DataFrame:
    """Occurrence CSV table; every cell is a string, absent values empty."""
    return pd.DataFrame([o.to_row() for o in occurrences], columns=OCCURRENCE_COLUMNS, dtype=str)
