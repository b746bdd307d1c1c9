"""
Command-line entry point: ingest, classify, agree and eval.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import pandas as pd

from negscan import __version__
from negscan.core.config import RunConfig, load_run_config, settings
from negscan.core.exceptions import ConfigError, NegScanError
from negscan.models.data_models import OverlapPolicy, TranscriptDocument
from negscan.services import agreement, evaluation
from negscan.services.conllu_io import read_conllu_document
from negscan.services.matcher import load_matcher
from negscan.services.neg_classifier import NegationClassifier, TaggedDocument, occurrences_to_frame
from negscan.services.pos_tagger import LexiconTagger, VerbLexicon
from negscan.services.transcript_loader import TranscriptLoader
from negscan.utils.file_io import to_json, write_csv, write_json
from negscan.utils.report_formatter import ReportFormatter

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)


def run_options(func):
    """Flags shared by the pipeline commands; each overrides the config file field of the same name."""
    options = [
        click.option("--input", "input_", type=click.Path(path_type=Path), help="Transcript directory or file."),
        click.option("--conllu", type=click.Path(path_type=Path), help="CoNLL-U directory or file."),
        click.option("--patterns", type=click.Path(path_type=Path), help="Pattern file (JSON)."),
        click.option("--policy", type=click.Choice([p.value for p in OverlapPolicy]), help="Overlap policy."),
        click.option("--max-gap", type=int, help="Override max_gap of every pattern."),
        click.option("--variants/--no-variants", default=None, help="Treat 'n' and 'ñ' as 'não'."),
        click.option("--context", type=int, help="Context window, tokens each side."),
        click.option("--out", type=click.Path(path_type=Path), help="Output directory."),
        click.option("--lexicon", type=click.Path(path_type=Path), help="Lexicon file (form<TAB>UPOS)."),
        click.option("--markers", multiple=True, help="Disfluency marker regex; repeatable, replaces the defaults."),
        click.option("--jobs", type=int, help="Parallel workers for file ingestion."),
        click.option("--json", "json_output", is_flag=True, default=None, help="Print the summary as JSON."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(ctx: click.Context, **flags: Any) -> RunConfig:
    overrides: Dict[str, Any] = dict(flags)
    overrides["input"] = overrides.pop("input_", None)
    overrides["markers"] = list(overrides["markers"]) or None
    return load_run_config(ctx.obj.get("config_path"), overrides)


def fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    raise SystemExit(1)


def load_documents(path: Path, config: RunConfig) -> Tuple[List[TranscriptDocument], List[Tuple[str, str]]]:
    """Ingest .txt transcripts, and reload .json documents written by `ingest`."""
    loader = TranscriptLoader([path], marker_patterns=config.markers)
    documents, errors = loader.ingest_all(jobs=config.jobs) if loader.get_file_paths() else ([], [])

    json_paths = sorted(path.glob("*.json")) if path.is_dir() else ([path] if path.suffix == ".json" else [])
    for json_path in json_paths:
        try:
            with open(json_path, "r", encoding="utf-8") as f:
                documents.append(TranscriptDocument.from_dict(json.load(f)))
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.error(f"Failed to load {json_path}: {e}")
            errors.append((str(json_path), f"cannot load document: {e}"))
    return documents, errors


def load_tagged_documents(config: RunConfig) -> Tuple[List[TaggedDocument], List[Tuple[str, str]], int]:
    """
    Read the selected input mode into tagged documents.

    Returns:
        (documents, per-file errors, number of input files seen).
    """
    mode, path = config.input_mode()
    if not path.exists():
        raise ConfigError(f"input path {path} does not exist")

    if mode == "transcripts":
        documents, errors = load_documents(path, config)
        tagger = LexiconTagger(VerbLexicon.load(config.lexicon))
        tagged = [(d.metadata, tagger.tag_document(d)) for d in documents]
        return tagged, errors, len(documents) + len(errors)

    conllu_paths = sorted(path.glob("*.conllu")) if path.is_dir() else [path]
    tagged: List[TaggedDocument] = []
    errors: List[Tuple[str, str]] = []
    for conllu_path in conllu_paths:
        try:
            with open(conllu_path, "r", encoding="utf-8") as f:
                tagged.append(read_conllu_document(f.read(), fallback_id=conllu_path.stem))
        except NegScanError as e:
            logger.error(f"Failed to read {conllu_path}: {e}")
            errors.append((str(conllu_path), str(e)))
        except (OSError, UnicodeDecodeError) as e:
            errors.append((str(conllu_path), f"cannot read file: {e}"))
    logger.info(f"Read {len(tagged)} CoNLL-U documents from {path}")
    return tagged, errors, len(conllu_paths)


def report_errors(errors: List[Tuple[str, str]]) -> None:
    for path, message in errors:
        click.echo(ReportFormatter.format_error_response(path, message), err=True)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON run configuration; flags override its fields.")
@click.option("--log-level", default=None, help="Logging level (default from NEGSCAN_LOG_LEVEL).")
@click.version_option(__version__, prog_name=settings.project_name)
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], log_level: Optional[str]) -> None:
    """Find and classify verbal negation with "não" in interview transcripts."""
    configure_logging(log_level or settings.log_level)
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


@cli.command()
@run_options
@click.pass_context
def ingest(ctx: click.Context, **flags: Any) -> None:
    """Parse headers and clean transcripts into one JSON document per file."""
    try:
        config = build_config(ctx, **flags)
        if config.input is None:
            raise ConfigError("--input is required")
        out = config.prepare_output_dir()
        loader = TranscriptLoader([config.input], marker_patterns=config.markers)
        if not loader.get_file_paths():
            fail("no input files")
        documents, errors = loader.ingest_all(jobs=config.jobs)
    except NegScanError as e:
        fail(str(e))

    for document in documents:
        write_json(out / f"{Path(document.source_path).stem}.json", document.to_dict())

    summary = ReportFormatter.format_ingest_summary(documents, errors)
    if config.json_output:
        click.echo(to_json(summary), nl=False)
    else:
        click.echo(f"ingested {summary['ingested']} of {summary['files']} files, "
                   f"{summary['utterances']} utterances, {summary['removals']} removals")
    report_errors(errors)
    if errors:
        raise SystemExit(1)


@cli.command()
@run_options
@click.pass_context
def classify(ctx: click.Context, **flags: Any) -> None:
    """Classify NEG1/NEG2/NEG3 occurrences; writes occurrences.csv and summary.json."""
    try:
        config = build_config(ctx, **flags)
        out = config.prepare_output_dir()
        matcher = load_matcher(config.patterns, config.max_gap)
        classifier = NegationClassifier(
            matcher,
            policy=config.policy,
            context_window=config.context,
            variants_enabled=config.variants,
        )
        documents, errors, file_count = load_tagged_documents(config)
        if file_count == 0:
            fail("no input files")
        occurrences, summary = classifier.classify_documents(documents)
    except NegScanError as e:
        fail(str(e))

    write_csv(out / "occurrences.csv", occurrences_to_frame(occurrences))
    summary_data = summary.to_dict()
    summary_data["policy"] = config.policy.value
    summary_data["documents"] = len(documents)
    summary_data["errors"] = [{"path": path, "message": message} for path, message in errors]
    write_json(out / "summary.json", summary_data)

    if config.json_output:
        click.echo(to_json(summary_data), nl=False)
    else:
        click.echo(ReportFormatter.format_summary(summary))
    report_errors(errors)
    if errors:
        raise SystemExit(1)


@cli.command()
@click.argument("annotations", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), help="Output directory.")
@click.option("--json", "json_output", is_flag=True, help="Print the report as JSON.")
def agree(annotations: Path, out: Optional[Path], json_output: bool) -> None:
    """Fleiss' and pairwise Cohen's kappa, plus majority-vote gold labels."""
    try:
        report = agreement.build_report(agreement.load_annotations(annotations))
    except NegScanError as e:
        fail(str(e))

    if out is not None:
        write_json(out / "agreement.json", report.to_dict())
        unified = pd.DataFrame(sorted(report.unified_labels.items()), columns=["item_id", "label"])
        write_csv(out / "gold.csv", unified)

    if json_output:
        click.echo(to_json(report.to_dict()), nl=False)
    else:
        click.echo(ReportFormatter.format_agreement(report))


@cli.command("eval")
@click.argument("gold", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("predicted", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), help="Output directory.")
@click.option("--json", "json_output", is_flag=True, help="Print the metrics as JSON.")
def eval_command(gold: Path, predicted: Path, out: Optional[Path], json_output: bool) -> None:
    """Score predicted labels against gold: confusion matrix and metrics."""
    try:
        gold_labels, unresolved = evaluation.load_gold(gold)
        alignment, cm, report = evaluation.evaluate(gold_labels, evaluation.load_predicted(predicted))
    except NegScanError as e:
        fail(str(e))

    result = report.to_dict()
    result["confusion"] = cm.to_dict()
    result["uncovered"] = alignment.uncovered
    result["spurious"] = alignment.spurious
    result["unresolved_excluded"] = unresolved

    if out is not None:
        write_json(out / "metrics.json", result)
        write_csv(out / "confusion.csv", evaluation.confusion_to_frame(cm))

    if json_output:
        click.echo(to_json(result), nl=False)
    else:
        click.echo(ReportFormatter.format_metrics_table(report))
        click.echo("")
        click.echo(ReportFormatter.format_confusion_table(cm.categories, cm.counts))
        if alignment.uncovered or alignment.spurious:
            click.echo(f"uncovered: {len(alignment.uncovered)}, spurious: {len(alignment.spurious)}")


def main() -> None:
    cli(obj={})


if __name__ == "__main__":
    main()
