import numpy as np
import pytest

from negscan.models.data_models import NEG_LABELS
from negscan.services.evaluation import evaluate
from negscan.services.synthetic_corpus import (
    SPOKEN_PROPORTIONS,
    exact_counts,
    generate_tagged_corpus,
)


def test_exact_counts_spoken_mix():
    assert exact_counts(2085, SPOKEN_PROPORTIONS) == {"NEG1": 1893, "NEG2": 100, "NEG3": 92}


@pytest.mark.parametrize("n", [0, 1, 7, 100, 2085])
def test_exact_counts_sum_to_n(n):
    counts = exact_counts(n, SPOKEN_PROPORTIONS)
    assert sum(counts.values()) == n
    for label, share in SPOKEN_PROPORTIONS.items():
        assert abs(counts[label] - n * share) < 1


def test_exact_counts_rejects_bad_input():
    with pytest.raises(ValueError):
        exact_counts(-1, SPOKEN_PROPORTIONS)
    with pytest.raises(ValueError):
        exact_counts(10, {"NEG1": 0.0})


def test_generator_is_seeded():
    a = generate_tagged_corpus(50, seed=1)
    b = generate_tagged_corpus(50, seed=1)
    assert a.gold == b.gold
    assert [u.text for u in a.utterances] == [u.text for u in b.utterances]


def test_unknown_label_in_proportions():
    with pytest.raises(ValueError):
        generate_tagged_corpus(10, {"NEG4": 1.0}, seed=0)


def test_pipeline_recovers_spoken_proportions(classifier):
    corpus = generate_tagged_corpus(2085, seed=2085)
    occurrences, summary = classifier.classify_corpus(corpus.utterances, corpus.metadata)

    assert summary.classified_count == 2085
    for label in NEG_LABELS:
        assert abs(summary.proportions[label] - SPOKEN_PROPORTIONS[label]) <= 0.005
    assert summary.total_nao_tokens == 2085 + corpus.counts["NEG2"]

    predicted = {o.item_id: o.label.value for o in occurrences}
    alignment, cm, report = evaluate(corpus.gold, predicted)
    assert alignment.uncovered == [] and alignment.spurious == []
    assert report.accuracy == 1.0
    assert report.kappa_vs_gold == pytest.approx(1.0)
    assert np.array_equal(np.diag(cm.counts), [corpus.counts[k] for k in NEG_LABELS])

