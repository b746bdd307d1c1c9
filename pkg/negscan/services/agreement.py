"""
Inter-annotator agreement and majority-vote label unification.
"""

import logging
import os
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix
from statsmodels.stats import inter_rater

from negscan.core.exceptions import EmptyMatrix, LengthMismatch, RaggedMatrix, UnknownLabel
from negscan.models.data_models import NEG_LABELS, UNRESOLVED, AgreementReport, AnnotationMatrix

logger = logging.getLogger(__name__)

ITEM_COLUMN = "item_id"


def cohen_kappa(a: Sequence[str], b: Sequence[str]) -> Optional[float]:
    """
    Cohen's kappa between two label sequences.

    Args:
        a: Labels from the first rater.
        b: Labels from the second rater, aligned with a.

    Returns:
        Kappa, or None when expected agreement is 1 (a single label overall).

    Raises:
        LengthMismatch: The sequences differ in length or are empty.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"label sequences differ in length: {len(a)} vs {len(b)}")
    if not a:
        raise LengthMismatch("label sequences must not be empty")

    categories = sorted(set(a) | set(b))
    table = confusion_matrix(list(a), list(b), labels=categories).astype(float)
    n = table.sum()
    observed = np.trace(table) / n
    expected = float((table.sum(axis=1) * table.sum(axis=0)).sum()) / (n * n)
    if expected >= 1.0:
        return None
    return float((observed - expected) / (1.0 - expected))


def _check_matrix(matrix: AnnotationMatrix) -> np.ndarray:
    """Map labels to category codes, rejecting empty or incomplete grids."""
    if not matrix.item_ids:
        raise EmptyMatrix("annotation matrix has no items")
    width = len(matrix.annotator_ids)
    codes = {label: position for position, label in enumerate(matrix.categories)}
    grid = np.zeros((len(matrix.labels), width), dtype=int)
    for row_index, row in enumerate(matrix.labels):
        if len(row) != width or any(label is None or label == "" for label in row):
            raise RaggedMatrix(f"item {matrix.item_ids[row_index]!r} does not have one label per annotator")
        for column, label in enumerate(row):
            if label not in codes:
                raise UnknownLabel(f"item {matrix.item_ids[row_index]!r}: label {label!r} "
                                   f"is not one of {list(matrix.categories)}")
            grid[row_index, column] = codes[label]
    return grid


def fleiss_kappa(matrix: AnnotationMatrix) -> Optional[float]:
    """
    Fleiss' kappa over a complete items x annotators grid.

    Returns:
        Kappa, or None when every label falls in one category.

    Raises:
        EmptyMatrix: No items.
        RaggedMatrix: An item lacks a label from some annotator.
        UnknownLabel: A label is outside matrix.categories.
    """
    grid = _check_matrix(matrix)
    table, _ = inter_rater.aggregate_raters(grid, n_cat=len(matrix.categories))
    if np.count_nonzero(table.sum(axis=0)) <= 1:
        return None
    return float(inter_rater.fleiss_kappa(table, method="fleiss"))


def majority_unify(matrix: AnnotationMatrix) -> Tuple[Dict[str, str], int]:
    """
    Unify each item's labels by majority vote.

    Returns:
        (item -> modal label or UNRESOLVED, number of tied items).
    """
    unified: Dict[str, str] = {}
    ties = 0
    for item_id, row in zip(matrix.item_ids, matrix.labels):
        counts = Counter(label for label in row if label)
        if not counts:
            unified[item_id] = UNRESOLVED
            ties += 1
            continue
        top = counts.most_common()
        if len(top) > 1 and top[0][1] == top[1][1]:
            unified[item_id] = UNRESOLVED
            ties += 1
        else:
            unified[item_id] = top[0][0]
    return unified, ties


def pairwise_cohen(matrix: AnnotationMatrix) -> Dict[Tuple[str, str], Optional[float]]:
    """Cohen's kappa for every ordered annotator pair, diagonal included."""
    columns = {annotator: matrix.column(annotator) for annotator in matrix.annotator_ids}
    result: Dict[Tuple[str, str], Optional[float]] = {}
    for position, a in enumerate(matrix.annotator_ids):
        for b in matrix.annotator_ids[position:]:
            value = cohen_kappa(columns[a], columns[b])
            result[(a, b)] = value
            result[(b, a)] = value
    return result


def label_distribution(unified: Dict[str, str], categories: Sequence[str] = NEG_LABELS) -> Dict[str, int]:
    counts = Counter(unified.values())
    distribution = {label: counts.get(label, 0) for label in categories}
    distribution[UNRESOLVED] = counts.get(UNRESOLVED, 0)
    return distribution


def build_report(matrix: AnnotationMatrix) -> AgreementReport:
    """
    Compute Fleiss' kappa, the pairwise Cohen map and the unified labels.
    """
    if len(matrix.annotator_ids) < 2:
        raise RaggedMatrix("agreement needs at least two annotators")
    fleiss = fleiss_kappa(matrix)
    pairwise = pairwise_cohen(matrix)
    unified, ties = majority_unify(matrix)

    logger.info(f"Agreement over {len(matrix.item_ids)} items and {len(matrix.annotator_ids)} annotators: "
                f"fleiss={fleiss}, ties={ties}")
    if ties:
        logger.warning(f"{ties} items tied and were left {UNRESOLVED}")

    return AgreementReport(
        fleiss_kappa=fleiss,
        pairwise_cohen=pairwise,
        unified_labels=unified,
        tie_count=ties,
        annotator_ids=list(matrix.annotator_ids),
        label_distribution=label_distribution(unified, matrix.categories),
    )


def matrix_from_frame(frame: pd.DataFrame, categories: Sequence[str] = NEG_LABELS) -> AnnotationMatrix:
    """
    Build an AnnotationMatrix from a table with an item_id column and one
    column per annotator. Empty cells become None.
    """
    if ITEM_COLUMN not in frame.columns:
        raise RaggedMatrix(f"annotation table needs an '{ITEM_COLUMN}' column")
    annotators = [str(column) for column in frame.columns if column != ITEM_COLUMN]
    labels: List[List[Optional[str]]] = [
        [cell.strip() or None if isinstance(cell, str) else None for cell in row]
        for row in frame[annotators].itertuples(index=False, name=None)
    ]
    return AnnotationMatrix(
        item_ids=[str(item).strip() for item in frame[ITEM_COLUMN]],
        annotator_ids=annotators,
        labels=labels,
        categories=tuple(categories),
    )


def load_annotations(path: os.PathLike, categories: Sequence[str] = NEG_LABELS) -> AnnotationMatrix:
    """Read an annotation CSV: `item_id,<annotator>,<annotator>,...`."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.ParserError as e:
        raise RaggedMatrix(f"cannot read annotation table {path}: {e}")
    matrix = matrix_from_frame(frame, categories)
    logger.info(f"Loaded {len(matrix.item_ids)} annotated items from {path}")
    return matrix
