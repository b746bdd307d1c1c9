"""
Utilities for formatting run reports for the terminal and for JSON output.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tabulate import tabulate

from negscan.models.data_models import AgreementReport, CorpusSummary, MetricsReport, TranscriptDocument

logger = logging.getLogger(__name__)

UNDEFINED = "undefined"


class ReportFormatter:
    """
    Class for formatting summaries, agreement and metrics reports.

    Machine output keeps full precision with None as null; human tables use
    fixed decimals and print "undefined" for missing values.
    """

    @staticmethod
    def format_value(value: Optional[float], decimals: int = 2) -> str:
        return UNDEFINED if value is None else f"{value:.{decimals}f}"

    @staticmethod
    def format_metrics_table(report: MetricsReport) -> str:
        """
        Render per-class precision, recall and F1 with support, then accuracy,
        macro F1 and kappa against gold.

        Args:
            report: Scores from evaluation.metrics.

        Returns:
            A plain-text table.
        """
        fmt = ReportFormatter.format_value
        rows: List[List[Any]] = [
            [label, fmt(m.precision), fmt(m.recall), fmt(m.f1), m.support]
            for label, m in report.per_class.items()
        ]
        rows.append(["accuracy", "", "", fmt(report.accuracy), report.total])
        rows.append(["macro avg", "", "", fmt(report.macro_f1), report.total])
        rows.append(["kappa", "", "", fmt(report.kappa_vs_gold), report.total])
        table = tabulate(rows, headers=["", "precision", "recall", "f1-score", "support"],
                         tablefmt="simple", disable_numparse=True)
        if report.macro_excluded:
            table += f"\nmacro avg excludes {report.macro_excluded} class(es) with undefined F1"
        return table

    @staticmethod
    def format_confusion_table(categories: Sequence[str], counts) -> str:
        rows = [[gold] + [int(c) for c in row] for gold, row in zip(categories, counts)]
        return tabulate(rows, headers=["gold \\ predicted"] + list(categories), tablefmt="simple")

    @staticmethod
    def format_agreement(report: AgreementReport) -> str:
        """Fleiss' kappa, the pairwise Cohen grid and the unified label counts."""
        fmt = ReportFormatter.format_value
        lines = [f"Fleiss' kappa: {fmt(report.fleiss_kappa)}", ""]
        grid = [[a] + [fmt(v) for v in row] for a, row in zip(report.annotator_ids, report.heatmap())]
        lines.append(tabulate(grid, headers=["Cohen"] + report.annotator_ids, tablefmt="simple",
                              disable_numparse=True))
        lines.append("")
        lines.append(tabulate(sorted(report.label_distribution.items()), headers=["label", "items"],
                              tablefmt="simple"))
        lines.append(f"ties: {report.tie_count}")
        return "\n".join(lines)

    @staticmethod
    def format_summary(summary: CorpusSummary) -> str:
        """Per-label counts and proportions of a classification run."""
        rows = [
            [label, summary.counts[label], ReportFormatter.format_value(summary.proportions[label], 3)]
            for label in summary.counts
        ]
        table = tabulate(rows, headers=["label", "count", "proportion"], tablefmt="simple",
                         disable_numparse=True)
        return (f"{table}\nclassified: {summary.classified_count}"
                f"\ntotal 'não' tokens: {summary.total_nao_tokens}")

    @staticmethod
    def format_ingest_summary(documents: Sequence[TranscriptDocument],
                              errors: Sequence[Tuple[str, str]]) -> Dict[str, Any]:
        return {
            'files': len(documents) + len(errors),
            'ingested': len(documents),
            'failed': len(errors),
            'utterances': sum(len(d.utterances) for d in documents),
            'removals': sum(len(d.removals) for d in documents),
            'errors': [{'path': path, 'message': message} for path, message in errors]
        }

    @staticmethod
    def format_error_response(path: str, message: str) -> str:
        return f"{path}: {message}"
