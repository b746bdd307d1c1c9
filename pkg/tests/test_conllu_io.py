import pytest

from negscan.core.exceptions import MalformedConllu
from negscan.models.data_models import Role, SpeakerMetadata, TagSource
from negscan.services.conllu_io import read_conllu, read_conllu_document, write_conllu

from tests.conftest import make_utterance


def conllu_line(*columns):
    return "\t".join(columns) + "\n"


def word(token_id, form, upos):
    return conllu_line(str(token_id), form, "_", upos, "_", "_", "_", "_", "_", "_")


SENTENCE = (
    "# text = eu não gosto não\n"
    + word(1, "eu", "PRON")
    + word(2, "não", "ADV")
    + word(3, "gosto", "VERB")
    + word(4, "não", "ADV")
    + "\n"
)


def test_read_conllu_forms_and_tags():
    utterances = read_conllu(SENTENCE)

    assert len(utterances) == 1
    tokens = utterances[0].tokens
    assert [t.text for t in tokens] == ["eu", "não", "gosto", "não"]
    assert [t.upos for t in tokens] == ["PRON", "ADV", "VERB", "ADV"]
    assert utterances[0].tag_source is TagSource.CONLLU
    assert utterances[0].text == "eu não gosto não"


def test_multiword_ranges_are_skipped():
    text = (
        conllu_line("1-2", "do", "_", "_", "_", "_", "_", "_", "_", "_")
        + word(1, "de", "ADP")
        + word(2, "o", "DET")
        + word(3, "lugar", "NOUN")
        + "\n"
    )
    tokens = read_conllu(text)[0].tokens
    assert [t.text for t in tokens] == ["de", "o", "lugar"]
    assert [t.index for t in tokens] == [0, 1, 2]


def test_wrong_column_count_names_the_line():
    text = "# text = eu sei\n" + word(1, "eu", "PRON") + "2\tsei\t_\tVERB\n\n"
    with pytest.raises(MalformedConllu) as excinfo:
        read_conllu(text)
    assert excinfo.value.line_number == 3


def test_non_integer_id():
    with pytest.raises(MalformedConllu):
        read_conllu(word("x", "eu", "PRON") + "\n")


def test_unknown_upos():
    with pytest.raises(MalformedConllu):
        read_conllu(word(1, "eu", "PRONOUN") + "\n")


def test_document_metadata_from_comments():
    text = "# id = D20-07\n# idade = 21\n# papel = informante\n" + SENTENCE
    metadata, utterances = read_conllu_document(text, fallback_id="file-stem")

    assert metadata.interview_id == "D20-07"
    assert metadata.age == 21
    assert metadata.role is Role.INFORMANT
    assert len(utterances) == 1


def test_document_id_falls_back_to_file_name():
    metadata, _ = read_conllu_document(SENTENCE, fallback_id="file-stem")
    assert metadata.interview_id == "file-stem"


def test_write_then_read_keeps_tokens_and_metadata():
    utterances = [
        make_utterance([("eu", "PRON"), ("não", "ADV"), ("sei", "VERB")], 0),
        make_utterance([("gosto", "VERB"), ("não", "ADV")], 1),
    ]
    metadata = SpeakerMetadata("D01-01", location="Aracaju", age=40, role=Role.DOCUMENTER)

    restored_metadata, restored = read_conllu_document(write_conllu(utterances, metadata), fallback_id="x")

    assert restored_metadata == metadata
    assert [[(t.text, t.upos) for t in u.tokens] for u in restored] == \
        [[(t.text, t.upos) for t in u.tokens] for u in utterances]


def test_demo_fixture_reads(demo_dir):
    text = (demo_dir / "conllu" / "D20-07.conllu").read_text(encoding="utf-8")
    metadata, utterances = read_conllu_document(text, fallback_id="D20-07")

    assert metadata.location == "Itabaiana"
    assert metadata.undergrad_period == "5"
    assert len(utterances) == 6
    assert utterances[0].tokens[-1].upos == "PUNCT"
