import json
import shutil

import pytest
from click.testing import CliRunner

from negscan.cli import cli

from tests.conftest import DEMO_DIR

TRANSCRIPTS = DEMO_DIR / "transcripts"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args], obj={})


def test_classify_demo_matches_expected_csv(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS, "--out", tmp_path)

    assert result.exit_code == 0, result.output
    assert (tmp_path / "occurrences.csv").read_bytes() == (DEMO_DIR / "expected_occurrences.csv").read_bytes()
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["total_nao"] == 6
    assert summary["counts"] == {"NEG1": 1, "NEG2": 1, "NEG3": 1}
    assert summary["policy"] == "longest"


def test_classify_demo_report_all(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS, "--out", tmp_path, "--policy", "report-all")

    assert result.exit_code == 0, result.output
    assert (tmp_path / "occurrences.csv").read_bytes() == \
        (DEMO_DIR / "expected_occurrences_report_all.csv").read_bytes()


def test_classify_conllu_input_gives_same_table(runner, tmp_path):
    result = invoke(runner, "classify", "--conllu", DEMO_DIR / "conllu", "--out", tmp_path)

    assert result.exit_code == 0, result.output
    assert (tmp_path / "occurrences.csv").read_bytes() == (DEMO_DIR / "expected_occurrences.csv").read_bytes()


def test_classify_json_summary(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS, "--out", tmp_path, "--json")

    assert result.exit_code == 0
    assert json.loads(result.stdout)["classified_count"] == 3


def test_classify_needs_exactly_one_input_mode(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS, "--conllu", DEMO_DIR / "conllu", "--out", tmp_path)
    assert result.exit_code == 1
    assert "exactly one of" in result.stderr

    result = invoke(runner, "classify", "--out", tmp_path)
    assert result.exit_code == 1


def test_classify_empty_directory(runner, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    result = invoke(runner, "classify", "--input", empty, "--out", tmp_path / "out")

    assert result.exit_code == 1
    assert "no input files" in result.stderr


def test_ingest_writes_documents(runner, tmp_path):
    source = tmp_path / "in"
    source.mkdir()
    shutil.copy(TRANSCRIPTS / "D20-07.txt", source / "a.txt")
    shutil.copy(TRANSCRIPTS / "D20-07.txt", source / "b.txt")

    result = invoke(runner, "ingest", "--input", source, "--out", tmp_path / "out", "--json")

    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["ingested"] == 2 and summary["failed"] == 0
    document = json.loads((tmp_path / "out" / "a.json").read_text(encoding="utf-8"))
    assert document["metadata"]["interview_id"] == "D20-07"


def test_ingest_reports_headerless_file(runner, tmp_path):
    source = tmp_path / "in"
    source.mkdir()
    shutil.copy(TRANSCRIPTS / "D20-07.txt", source / "good.txt")
    (source / "bad.txt").write_text("eu não sei\n", encoding="utf-8")

    result = invoke(runner, "ingest", "--input", source, "--out", tmp_path / "out")

    assert result.exit_code == 1
    assert "bad.txt" in result.stderr
    assert (tmp_path / "out" / "good.json").exists()
    assert not (tmp_path / "out" / "bad.json").exists()


def test_ingest_empty_directory(runner, tmp_path):
    result = invoke(runner, "ingest", "--input", tmp_path, "--out", tmp_path / "out")
    assert result.exit_code == 1
    assert "no input files" in result.stderr


def test_classify_reads_ingested_documents(runner, tmp_path):
    invoke(runner, "ingest", "--input", TRANSCRIPTS, "--out", tmp_path / "docs")
    result = invoke(runner, "classify", "--input", tmp_path / "docs", "--out", tmp_path / "out")

    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "occurrences.csv").read_bytes() == \
        (DEMO_DIR / "expected_occurrences.csv").read_bytes()


def test_agree_on_demo_annotations(runner, tmp_path):
    result = invoke(runner, "agree", DEMO_DIR / "annotations.csv", "--out", tmp_path, "--json")

    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    # P = 7/9, P_e = 29/81
    assert report["fleiss_kappa"] == pytest.approx(34 / 52)
    assert report["tie_count"] == 0
    assert (tmp_path / "gold.csv").read_text(encoding="utf-8") == \
        (DEMO_DIR / "gold.csv").read_text(encoding="utf-8")


def test_eval_identical_labels(runner, tmp_path):
    result = invoke(runner, "eval", DEMO_DIR / "gold.csv", DEMO_DIR / "gold.csv", "--out", tmp_path, "--json")

    assert result.exit_code == 0, result.output
    metrics = json.loads(result.stdout)
    assert metrics["accuracy"] == 1.0
    assert (tmp_path / "confusion.csv").exists()


def test_eval_against_classifier_output(runner, tmp_path):
    invoke(runner, "classify", "--input", TRANSCRIPTS, "--out", tmp_path)
    result = invoke(runner, "eval", DEMO_DIR / "gold.csv", tmp_path / "occurrences.csv", "--json")

    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["accuracy"] == 1.0


def test_eval_single_flip(runner, tmp_path):
    predicted = tmp_path / "predicted.csv"
    predicted.write_text("item_id,label\nD20-07:1:1,NEG1\nD20-07:2:1,NEG1\nD20-07:3:3,NEG3\n", encoding="utf-8")

    result = invoke(runner, "eval", DEMO_DIR / "gold.csv", predicted, "--json")

    assert result.exit_code == 0, result.output
    metrics = json.loads(result.stdout)
    assert metrics["confusion"]["counts"][1][0] == 1
    assert metrics["accuracy"] == pytest.approx(2 / 3)


def test_eval_disjoint_ids(runner, tmp_path):
    predicted = tmp_path / "predicted.csv"
    predicted.write_text("item_id,label\nX:0:0,NEG1\n", encoding="utf-8")

    result = invoke(runner, "eval", DEMO_DIR / "gold.csv", predicted)
    assert result.exit_code != 0
    assert "share no item ids" in result.stderr


def test_config_file_and_flag_override(runner, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "input": str(TRANSCRIPTS),
        "out": str(tmp_path / "out"),
        "policy": "report-all",
    }), encoding="utf-8")

    result = invoke(runner, "--config", config, "classify")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "occurrences.csv").read_bytes() == \
        (DEMO_DIR / "expected_occurrences_report_all.csv").read_bytes()

    result = invoke(runner, "--config", config, "classify", "--policy", "longest")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "occurrences.csv").read_bytes() == \
        (DEMO_DIR / "expected_occurrences.csv").read_bytes()


def test_config_file_rejects_unknown_fields(runner, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"inptu": "x"}), encoding="utf-8")

    result = invoke(runner, "--config", config, "classify")
    assert result.exit_code == 1
    assert "invalid configuration" in result.stderr


def test_classify_corpus_without_nao(runner, tmp_path):
    source = tmp_path / "in"
    source.mkdir()
    (source / "X01-01.txt").write_text("@id: X01-01\n\neu gosto de casa\n", encoding="utf-8")

    result = invoke(runner, "classify", "--input", source, "--out", tmp_path / "out")

    assert result.exit_code == 0, result.output
    lines = (tmp_path / "out" / "occurrences.csv").read_text(encoding="utf-8").splitlines()
    assert lines == [(DEMO_DIR / "expected_occurrences.csv").read_text(encoding="utf-8").splitlines()[0]]
    summary = json.loads((tmp_path / "out" / "summary.json").read_text(encoding="utf-8"))
    assert summary["total_nao"] == 0
    assert summary["proportions"] == {"NEG1": None, "NEG2": None, "NEG3": None}


def test_classify_missing_lexicon(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS, "--out", tmp_path, "--lexicon", tmp_path / "missing.tsv")

    assert result.exit_code == 1
    assert "error: cannot read lexicon" in result.stderr


def test_classify_single_ingested_document(runner, tmp_path):
    invoke(runner, "ingest", "--input", TRANSCRIPTS, "--out", tmp_path / "docs")
    result = invoke(runner, "classify", "--input", tmp_path / "docs" / "D20-07.json", "--out", tmp_path / "out")

    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "occurrences.csv").read_bytes() == \
        (DEMO_DIR / "expected_occurrences.csv").read_bytes()


def test_classify_single_transcript_file(runner, tmp_path):
    result = invoke(runner, "classify", "--input", TRANSCRIPTS / "D20-07.txt", "--out", tmp_path)

    assert result.exit_code == 0, result.output
    assert (tmp_path / "occurrences.csv").read_bytes() == (DEMO_DIR / "expected_occurrences.csv").read_bytes()
