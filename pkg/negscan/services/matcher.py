"""
Rule-based token pattern matching over POS-tagged utterances.

A pattern is an ordered list of token specs. It matches when its specs
match successive tokens, with at most `max_gap` skipped tokens between
consecutive specs. A skipped token is never "?": the question mark is the
only boundary left in unpunctuated transcripts.
"""

import json
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from negscan.core.exceptions import (
    DuplicatePatternId,
    EmptyPattern,
    InvalidPatternFile,
    UnknownPatternInPriorityList,
)
from negscan.models.data_models import (
    QUESTION_MARK,
    MatchSpan,
    OverlapPolicy,
    TaggedUtterance,
    Token,
    TokenPattern,
    TokenSpec,
)
from negscan.models.schemas import PatternSchema
from negscan.services.text_processor import text_processor

logger = logging.getLogger(__name__)


def is_boundary(token: Token) -> bool:
    return token.norm == QUESTION_MARK


class Matcher:
    """Holds registered patterns and finds their matches."""

    def __init__(self, patterns: Iterable[TokenPattern] = ()):
        self.patterns: Dict[str, TokenPattern] = {}
        for pattern in patterns:
            self.add_pattern(pattern)

    def add_pattern(self, pattern: TokenPattern) -> 'Matcher':
        """
        Register a pattern.

        Raises:
            EmptyPattern: The pattern has no specs.
            DuplicatePatternId: The id is already registered.
        """
        if not pattern.specs:
            raise EmptyPattern(f"pattern '{pattern.id}' has no token specs")
        if pattern.id in self.patterns:
            raise DuplicatePatternId(f"pattern id '{pattern.id}' is already registered")
        self.patterns[pattern.id] = pattern
        return self

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, pattern_id: str) -> bool:
        return pattern_id in self.patterns

    def find_matches(self, utterance: TaggedUtterance) -> List[MatchSpan]:
        """
        Find every span matching any registered pattern.

        All anchor positions and all gap assignments are reported, overlaps
        included.

        Returns:
            Spans ordered by (start, -length, pattern_id, matched indices).
        """
        tokens = utterance.tokens
        spans = []
        for pattern in self.patterns.values():
            for indices in self._match_pattern(pattern, tokens):
                spans.append(MatchSpan(
                    pattern_id=pattern.id,
                    start=indices[0],
                    end=indices[-1] + 1,
                    utterance_index=utterance.utterance_index,
                    matched_token_indices=indices,
                ))
        spans.sort(key=MatchSpan.sort_key)
        return spans

    def _match_pattern(self, pattern: TokenPattern, tokens: Sequence[Token]) -> List[Tuple[int, ...]]:
        specs = pattern.specs
        found: List[Tuple[int, ...]] = []

        def extend(matched: Tuple[int, ...], spec_index: int) -> None:
            if spec_index == len(specs):
                found.append(matched)
                return
            last = matched[-1]
            for position in range(last + 1, min(last + 2 + pattern.max_gap, len(tokens))):
                # every token between last and position is skipped
                if position > last + 1 and is_boundary(tokens[position - 1]):
                    break
                if specs[spec_index].matches(tokens[position]):
                    extend(matched + (position,), spec_index + 1)

        for start, token in enumerate(tokens):
            if specs[0].matches(token):
                extend((start,), 1)
        return found

    def verify(self, span: MatchSpan, utterance: TaggedUtterance) -> bool:
        """Re-check a span token by token against its pattern."""
        pattern = self.patterns.get(span.pattern_id)
        if pattern is None or len(span.matched_token_indices) != len(pattern.specs):
            return False
        tokens = utterance.tokens
        indices = span.matched_token_indices
        for spec, index in zip(pattern.specs, indices):
            if index >= len(tokens) or not spec.matches(tokens[index]):
                return False
        for previous, current in zip(indices, indices[1:]):
            skipped = tokens[previous + 1:current]
            if len(skipped) > pattern.max_gap or any(is_boundary(t) for t in skipped):
                return False
        return True

    def priority_order(self, priority: Optional[Sequence[str]] = None) -> List[str]:
        """
        Resolve the pattern priority list, highest first.

        An explicit list wins; otherwise patterns are ranked by their
        `priority` value (lower first), unranked ones last by id.
        """
        if priority is not None:
            unknown = [pattern_id for pattern_id in priority if pattern_id not in self.patterns]
            if unknown:
                raise UnknownPatternInPriorityList(f"priority list names unknown patterns: {unknown}")
            return list(priority)
        ranked = sorted(
            self.patterns.values(),
            key=lambda p: (p.priority is None, p.priority if p.priority is not None else 0, p.id),
        )
        return [p.id for p in ranked]

    def resolve_overlaps(self, spans: Sequence[MatchSpan], policy: OverlapPolicy,
                         priority: Optional[Sequence[str]] = None) -> List[MatchSpan]:
        return resolve_overlaps(spans, policy, self.priority_order(priority), known_ids=self.patterns.keys())

    def get_stats(self) -> Dict[str, Any]:
        """
        Get statistics about the registered patterns.
        """
        return {
            "pattern_count": len(self.patterns),
            "pattern_ids": sorted(self.patterns),
            "max_gap": {p.id: p.max_gap for p in self.patterns.values()},
            "priority": self.priority_order(),
        }


def resolve_overlaps(
    spans: Sequence[MatchSpan],
    policy: OverlapPolicy,
    priority: Sequence[str] = (),
    known_ids: Optional[Iterable[str]] = None,
) -> List[MatchSpan]:
    """
    Reduce the matches of one utterance to non-overlapping spans.

    Under LONGEST, candidates are ranked by length (longest first), then by
    position in the priority list (unlisted patterns after listed ones, by
    id), then by earlier start; each candidate is kept unless it overlaps an
    already kept span. REPORT_ALL returns the input unchanged.

    Args:
        spans: Matches from a single utterance.
        policy: Overlap policy.
        priority: Pattern ids, highest priority first.
        known_ids: Registered pattern ids, used to validate the priority list.

    Returns:
        Kept spans in (start, -length, pattern_id) order.
    """
    if known_ids is not None:
        known = set(known_ids)
        unknown = [pattern_id for pattern_id in priority if pattern_id not in known]
        if unknown:
            raise UnknownPatternInPriorityList(f"priority list names unknown patterns: {unknown}")

    if policy is OverlapPolicy.REPORT_ALL:
        return list(spans)

    rank = {pattern_id: position for position, pattern_id in enumerate(priority)}
    candidates = sorted(
        spans,
        key=lambda s: (-s.length, rank.get(s.pattern_id, len(rank)), s.pattern_id, s.start, s.matched_token_indices),
    )
    kept: List[MatchSpan] = []
    for span in candidates:
        if not any(span.overlaps(other) for other in kept):
            kept.append(span)
    kept.sort(key=MatchSpan.sort_key)
    return kept


def build_token_spec(text_values: Optional[Sequence[str]], pos_values: Optional[Sequence[str]]) -> TokenSpec:
    return TokenSpec(
        text_equals=None if text_values is None else frozenset(text_processor.normalize_form(t) for t in text_values),
        pos_in=None if pos_values is None else frozenset(pos_values),
    )


def parse_patterns(data: Any, max_gap: Optional[int] = None) -> List[TokenPattern]:
    """
    Validate pattern-file content and build TokenPatterns.

    Args:
        data: Decoded JSON (a list of pattern objects).
        max_gap: If set, overrides every pattern's max_gap.
    """
    if not isinstance(data, list):
        raise InvalidPatternFile("a pattern file must hold a JSON array")
    patterns = []
    for position, entry in enumerate(data):
        try:
            schema = PatternSchema.model_validate(entry)
        except ValidationError as e:
            raise InvalidPatternFile(f"pattern #{position}: {e}")
        specs = tuple(build_token_spec(s.text_values(), s.pos_values()) for s in schema.specs)
        patterns.append(TokenPattern(
            id=schema.id,
            specs=specs,
            max_gap=schema.max_gap if max_gap is None else max_gap,
            priority=schema.priority,
        ))
    return patterns


def load_patterns(path: os.PathLike, max_gap: Optional[int] = None) -> List[TokenPattern]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidPatternFile(f"cannot read pattern file {path}: {e}")
    patterns = parse_patterns(data, max_gap)
    logger.info(f"Loaded {len(patterns)} patterns from {path}: {[p.id for p in patterns]}")
    return patterns


def load_matcher(path: os.PathLike, max_gap: Optional[int] = None) -> Matcher:
    return Matcher(load_patterns(path, max_gap))
