"""
Scoring of tool classifications against unified gold labels.
"""

import logging
import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix

from negscan.core.exceptions import EmptyIntersection, EmptyMatrix, NegScanError, UnknownLabel
from negscan.models.data_models import (
    NEG_LABELS,
    OCCURRENCE_COLUMNS,
    UNRESOLVED,
    AlignmentResult,
    ClassMetrics,
    ConfusionMatrix,
    MetricsReport,
    occurrence_item_id,
)
from negscan.services import agreement

logger = logging.getLogger(__name__)


def align(gold: Dict[str, str], predicted: Dict[str, str]) -> AlignmentResult:
    """
    Pair gold and predicted labels over shared item ids.

    Args:
        gold: item_id -> gold label.
        predicted: item_id -> predicted label.

    Returns:
        Pairs in item_id order; items only in gold are uncovered, items
        only in predicted are spurious.

    Raises:
        EmptyIntersection: No item id is shared.
    """
    shared = sorted(gold.keys() & predicted.keys())
    if not shared:
        raise EmptyIntersection(f"gold ({len(gold)} items) and predicted ({len(predicted)} items) share no item ids")
    uncovered = sorted(gold.keys() - predicted.keys())
    spurious = sorted(predicted.keys() - gold.keys())
    if uncovered or spurious:
        logger.warning(f"Alignment left {len(uncovered)} gold items uncovered and {len(spurious)} predictions spurious")
    return AlignmentResult(
        pairs=[(gold[item], predicted[item]) for item in shared],
        item_ids=shared,
        uncovered=uncovered,
        spurious=spurious,
    )


def confusion(pairs: Sequence[Tuple[str, str]], categories: Sequence[str] = NEG_LABELS) -> ConfusionMatrix:
    """
    Tally (gold, predicted) pairs; rows are gold, columns predicted.

    Raises:
        UnknownLabel: A label is not in categories.
    """
    categories = tuple(categories)
    known = set(categories)
    for g, p in pairs:
        for label in (g, p):
            if label not in known:
                raise UnknownLabel(f"label {label!r} is not one of {list(categories)}")
    if not pairs:
        return ConfusionMatrix(categories, np.zeros((len(categories), len(categories)), dtype=int))
    gold, predicted = zip(*pairs)
    counts = confusion_matrix(list(gold), list(predicted), labels=list(categories))
    return ConfusionMatrix(categories, counts.astype(int))


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return None if denominator == 0 else float(numerator / denominator)


def _f1(precision: Optional[float], recall: Optional[float]) -> Optional[float]:
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def expand_pairs(cm: ConfusionMatrix) -> Tuple[List[str], List[str]]:
    """Rebuild gold and predicted sequences from matrix counts, row-major."""
    gold: List[str] = []
    predicted: List[str] = []
    for i, g in enumerate(cm.categories):
        for j, p in enumerate(cm.categories):
            count = int(cm.counts[i, j])
            gold.extend([g] * count)
            predicted.extend([p] * count)
    return gold, predicted


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """
    Per-class precision, recall and F1, accuracy, and tool-vs-gold kappa.

    Zero-denominator cells are None; macro F1 averages defined classes only.

    Raises:
        EmptyMatrix: The matrix has no counts.
    """
    total = cm.total
    if total == 0:
        raise EmptyMatrix("confusion matrix is empty")

    counts = cm.counts.astype(float)
    diagonal = np.diag(counts)
    predicted_totals = counts.sum(axis=0)
    gold_totals = counts.sum(axis=1)

    per_class: Dict[str, ClassMetrics] = {}
    for k, label in enumerate(cm.categories):
        precision = _ratio(diagonal[k], predicted_totals[k])
        recall = _ratio(diagonal[k], gold_totals[k])
        per_class[label] = ClassMetrics(
            precision=precision,
            recall=recall,
            f1=_f1(precision, recall),
            support=int(gold_totals[k]),
        )

    defined_f1 = [m.f1 for m in per_class.values() if m.f1 is not None]
    accuracy = float(diagonal.sum() / total)
    gold, predicted = expand_pairs(cm)

    report = MetricsReport(
        per_class=per_class,
        accuracy=accuracy,
        macro_f1=float(np.mean(defined_f1)) if defined_f1 else None,
        macro_excluded=len(per_class) - len(defined_f1),
        micro_precision=_ratio(diagonal.sum(), predicted_totals.sum()),
        micro_recall=_ratio(diagonal.sum(), gold_totals.sum()),
        kappa_vs_gold=agreement.cohen_kappa(gold, predicted),
        total=total,
    )
    if report.undefined_cells:
        logger.warning(f"Undefined metric cells: {report.undefined_cells}")
    return report


def evaluate(gold: Dict[str, str], predicted: Dict[str, str],
             categories: Sequence[str] = NEG_LABELS) -> Tuple[AlignmentResult, ConfusionMatrix, MetricsReport]:
    """Align, tally and score in one call."""
    alignment = align(gold, predicted)
    cm = confusion(alignment.pairs, categories)
    return alignment, cm, metrics(cm)


def confusion_to_frame(cm: ConfusionMatrix) -> pd.DataFrame:
    """Confusion matrix as a table with a `gold` label column."""
    frame = pd.DataFrame(cm.counts.astype(int), columns=list(cm.categories))
    frame.insert(0, "gold", list(cm.categories))
    return frame


def _read_table(path: os.PathLike) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise NegScanError(f"cannot read {path}: {e}")


def _label_map(frame: pd.DataFrame, path: os.PathLike) -> Dict[str, str]:
    labels: Dict[str, str] = {}
    for item_id, label in zip(frame["item_id"], frame["label"]):
        item_id = item_id.strip()
        if item_id in labels:
            raise NegScanError(f"{path}: item {item_id!r} appears more than once")
        labels[item_id] = label.strip()
    return labels


def is_occurrence_table(frame: pd.DataFrame) -> bool:
    required = OCCURRENCE_COLUMNS[:OCCURRENCE_COLUMNS.index('context_window') + 1]
    return list(frame.columns[:len(required)]) == required


def occurrence_labels(frame: pd.DataFrame) -> Dict[str, str]:
    """
    Labels of an occurrence table keyed by (interview_id, utterance_index, start).

    Report-all output can hold several rows per start; the first (longest) wins.
    """
    labels: Dict[str, str] = {}
    for row in frame.itertuples(index=False):
        item_id = occurrence_item_id(row.interview_id, int(row.utterance_index), int(row.start))
        labels.setdefault(item_id, row.label)
    return labels


def _labels_or_none(frame: pd.DataFrame, path: os.PathLike) -> Optional[Dict[str, str]]:
    if list(frame.columns) == ["item_id", "label"]:
        return _label_map(frame, path)
    if is_occurrence_table(frame):
        return occurrence_labels(frame)
    return None


def load_gold(path: os.PathLike, categories: Sequence[str] = NEG_LABELS) -> Tuple[Dict[str, str], int]:
    """
    Read gold labels.

    Accepts `item_id,label`, an occurrence table, or an annotation table
    with one column per annotator, which is unified by majority vote.

    Returns:
        (item_id -> label, number of UNRESOLVED items dropped).
    """
    frame = _read_table(path)
    gold = _labels_or_none(frame, path)
    if gold is None:
        gold, _ = agreement.majority_unify(agreement.matrix_from_frame(frame, categories))

    unresolved = [item for item, label in gold.items() if label == UNRESOLVED]
    for item in unresolved:
        del gold[item]
    if unresolved:
        logger.warning(f"Excluded {len(unresolved)} {UNRESOLVED} items from gold")
    logger.info(f"Loaded {len(gold)} gold labels from {path}")
    return gold, len(unresolved)


def load_predicted(path: os.PathLike) -> Dict[str, str]:
    """Read predicted labels from `item_id,label` or an occurrence table."""
    frame = _read_table(path)
    predicted = _labels_or_none(frame, path)
    if predicted is None:
        raise NegScanError(f"{path}: expected an 'item_id,label' table or an occurrence table")
    logger.info(f"Loaded {len(predicted)} predicted labels from {path}")
    return predicted
