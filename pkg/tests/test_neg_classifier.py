import random

import pytest

from negscan.core.exceptions import MissingRequiredPattern
from negscan.models.data_models import MatchSpan, NegLabel, NegOccurrence, OverlapPolicy, SpeakerMetadata
from negscan.services.matcher import Matcher
from negscan.services.neg_classifier import (
    NegationClassifier,
    count_nao,
    occurrences_to_frame,
    summarize,
)
from negscan.utils.file_io import frame_to_csv

from tests.conftest import make_utterance

META = SpeakerMetadata("D20-07", location="Itabaiana", gender="F", age=21)


def labels(occurrences):
    return [o.label.value for o in occurrences]


def test_count_nao():
    corpus = [make_utterance([("não", "ADV"), ("gosto", "VERB"), ("não", "ADV")])]
    assert count_nao(corpus) == 2
    assert count_nao([]) == 0


def test_count_nao_variants():
    corpus = [make_utterance([("ñ", "X"), ("sei", "VERB")])]
    assert count_nao(corpus, variants_enabled=False) == 0
    assert count_nao(corpus, variants_enabled=True) == 1


def test_single_structures(classifier):
    corpus = [
        make_utterance([("não", "ADV"), ("gosto", "VERB")], 0),
        make_utterance([("gosto", "VERB"), ("não", "ADV")], 1),
        make_utterance([("não", "ADV"), ("gosto", "VERB"), ("não", "ADV")], 2),
    ]
    occurrences, summary = classifier.classify_corpus(corpus, META)

    assert labels(occurrences) == ["NEG1", "NEG3", "NEG2"]
    assert summary.counts == {"NEG1": 1, "NEG2": 1, "NEG3": 1}
    assert summary.total_nao_tokens == 4


def test_report_all_emits_overlap_group(matcher):
    classifier = NegationClassifier(matcher, policy=OverlapPolicy.REPORT_ALL)
    corpus = [
        make_utterance([("não", "ADV"), ("sei", "VERB")], 0),
        make_utterance([("eu", "PRON"), ("não", "ADV"), ("gosto", "VERB"), ("não", "ADV")], 1),
    ]
    occurrences, _ = classifier.classify_corpus(corpus, META)

    assert [(o.label.value, o.span.start, o.overlap_group) for o in occurrences] == [
        ("NEG1", 0, None),
        ("NEG2", 1, "g1"),
        ("NEG1", 1, "g1"),
        ("NEG3", 2, "g1"),
    ]


def test_report_all_on_nao_verb_nao_always_gives_three(matcher):
    classifier = NegationClassifier(matcher, policy=OverlapPolicy.REPORT_ALL)
    rng = random.Random(5)
    for _ in range(200):
        verb = rng.choice([("gosto", "VERB"), ("é", "AUX"), ("tenho", "VERB")])
        occurrences = classifier.classify_utterance(make_utterance([("não", "ADV"), verb, ("não", "ADV")]), META)
        assert sorted(labels(occurrences)) == ["NEG1", "NEG2", "NEG3"]


def test_nao_outside_verbal_structures_is_only_counted(classifier):
    corpus = [
        make_utterance([("um", "DET"), ("caso", "NOUN"), ("de", "ADP"), ("não", "ADV"), ("violência", "NOUN")]),
        make_utterance([("não", "ADV")], 1),
    ]
    occurrences, summary = classifier.classify_corpus(corpus, META)
    assert occurrences == []
    assert summary.total_nao_tokens == 2
    assert summary.proportions == {"NEG1": None, "NEG2": None, "NEG3": None}


def test_occurrence_fields(classifier):
    utterance = make_utterance([("ai", "INTJ"), ("eu", "PRON"), ("go/", "X"), ("gosto", "VERB"),
                                ("não", "ADV"), ("né", "INTJ")], 3)
    (occurrence,) = classifier.classify_utterance(utterance, META)

    assert occurrence.label is NegLabel.NEG3
    assert occurrence.matched_text == "gosto não"
    assert occurrence.context_window == "ai eu go/ gosto não né"
    assert occurrence.nao_token_indices == [4]
    assert occurrence.item_id == "D20-07:3:3"


def test_context_window_size(matcher):
    classifier = NegationClassifier(matcher, context_window=1)
    utterance = make_utterance([("ai", "INTJ"), ("eu", "PRON"), ("não", "ADV"), ("sei", "VERB"),
                                ("disso", "ADP"), ("lá", "ADV")])
    (occurrence,) = classifier.classify_utterance(utterance, META)
    assert occurrence.context_window == "eu não sei disso"


def test_variants_rewrite_norms(matcher):
    utterance = make_utterance([("ñ", "X"), ("sei", "VERB")])
    assert NegationClassifier(matcher).classify_utterance(utterance, META) == []

    (occurrence,) = NegationClassifier(matcher, variants_enabled=True).classify_utterance(utterance, META)
    assert occurrence.label is NegLabel.NEG1
    assert occurrence.matched_text == "ñ sei"


def test_missing_required_pattern(table_patterns):
    matcher = Matcher([p for p in table_patterns if p.id != "NEG3"])
    with pytest.raises(MissingRequiredPattern):
        NegationClassifier(matcher)


def test_summarize_proportions():
    occurrences = []
    for label, count in [("NEG1", 1893), ("NEG2", 100), ("NEG3", 92)]:
        occurrences += [_occurrence(label)] * count
    summary = summarize(occurrences, 3338)

    assert summary.classified_count == 2085
    assert summary.to_dict()["proportions"] == {"NEG1": 0.908, "NEG2": 0.048, "NEG3": 0.044}
    assert sum(summary.proportions.values()) == pytest.approx(1.0, abs=1e-9)
    assert summary.counts_by_interview == {"D20-07": {"NEG1": 1893, "NEG2": 100, "NEG3": 92}}


def test_summarize_single_and_empty():
    assert summarize([_occurrence("NEG3")], 1).proportions["NEG3"] == 1.0
    empty = summarize([], 0)
    assert empty.counts == {"NEG1": 0, "NEG2": 0, "NEG3": 0}
    assert empty.to_dict()["proportions"] == {"NEG1": None, "NEG2": None, "NEG3": None}


def test_classify_documents_numbers_groups_across_documents(matcher):
    classifier = NegationClassifier(matcher, policy=OverlapPolicy.REPORT_ALL)
    nao_verb_nao = [("não", "ADV"), ("sei", "VERB"), ("não", "ADV")]
    documents = [
        (SpeakerMetadata("A"), [make_utterance(nao_verb_nao)]),
        (SpeakerMetadata("B"), [make_utterance(nao_verb_nao)]),
    ]
    occurrences, summary = classifier.classify_documents(documents)

    assert [o.overlap_group for o in occurrences] == ["g1"] * 3 + ["g2"] * 3
    assert summary.total_nao_tokens == 4
    assert set(summary.counts_by_interview) == {"A", "B"}


def test_occurrence_frame_has_header_when_empty():
    csv = frame_to_csv(occurrences_to_frame([]))
    assert csv == ("interview_id,location,gender,age,city_of_origin,city_of_residence,undergrad_period,"
                   "utterance_index,label,start,end,matched_text,context_window,overlap_group\n")


def _occurrence(label):
    span = MatchSpan(label, 0, 2, 0, (0, 1))
    return NegOccurrence(NegLabel(label), META, 0, span, "não sei", "não sei", [0])
