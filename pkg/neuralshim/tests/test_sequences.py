"""Sequence file parsing and prediction file writing."""

from __future__ import annotations

import pytest

from neuralshim import DataError, read_sequences, write_predictions
from neuralshim.sequences import PredictionRow, provenance_lines

from conftest import DATA, write_rows

EXPORTED = DATA / "sequences_gloss_en.tsv"


def test_reads_exported_file_byte_for_byte():
    rows = read_sequences(EXPORTED)
    assert len(rows) == 20
    rebuilt = "".join(
        f"{r.instance_id}\t{r.variant}\t{r.label}\t{r.text}\n" for r in rows
    )
    original = EXPORTED.read_text(encoding="utf-8")
    assert rebuilt == original


def test_text_field_is_not_renormalized():
    first = read_sequences(EXPORTED)[0]
    assert first.instance_id == "ex01"
    assert first.text == (
        "She was different, like a closed book. [SEP] closed book [SEP] "
        "not open; shut firmly [SEP] a written work of fiction or nonfiction "
        "[SEP] a bound set of printed pages"
    )


def test_comment_lines_and_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "seq.tsv"
    path.write_text(
        "# input:x=sha256:00\n\nid1\tbaseline\tidiomatic\tsome  text   kept\n",
        encoding="utf-8",
    )
    rows = read_sequences(path)
    assert len(rows) == 1
    assert rows[0].text == "some  text   kept"


def test_unlabeled_rows_read_with_empty_label(tmp_path):
    path = write_rows(tmp_path / "seq.tsv", [("id1", "baseline", "", "words")])
    assert read_sequences(path)[0].label == ""


@pytest.mark.parametrize(
    "line, fragment",
    [
        ("id1\tbaseline\tidiomatic", "expected 4"),
        ("id1\tbaseline\tidiomatic\ttext\textra", "expected 4"),
        ("\tbaseline\tidiomatic\ttext", "empty instance id"),
        ("id1\tfancy\tidiomatic\ttext", "unknown variant"),
        ("id1\tbaseline\tmaybe\ttext", "unknown label"),
    ],
)
def test_malformed_rows_are_rejected_with_line_numbers(tmp_path, line, fragment):
    path = tmp_path / "seq.tsv"
    path.write_text("# comment\n" + line + "\n", encoding="utf-8")
    with pytest.raises(DataError, match=fragment) as err:
        read_sequences(path)
    assert ":2:" in str(err.value)


def test_missing_file_is_a_data_error(tmp_path):
    with pytest.raises(DataError, match="file not found"):
        read_sequences(tmp_path / "absent.tsv")


def test_write_predictions_round_trip(tmp_path):
    out = tmp_path / "pred.tsv"
    rows = [
        PredictionRow("id1", "idiomatic", "gloss-neural", "p(idiomatic)=0.9000"),
        PredictionRow("id2", "literal", "baseline", "p(idiomatic)=0.1000"),
    ]
    header = provenance_lines(params={"model_name": "toy-bert"})
    write_predictions(out, rows, provenance=header)
    text = out.read_text(encoding="utf-8")
    assert text == (
        "# param:model_name=toy-bert\n"
        "id1\tidiomatic\tgloss-neural\tp(idiomatic)=0.9000\n"
        "id2\tliteral\tbaseline\tp(idiomatic)=0.1000\n"
    )


def test_write_predictions_is_deterministic(tmp_path):
    rows = [PredictionRow("id1", "literal", "baseline", "")]
    header = provenance_lines(inputs={"sequences": EXPORTED})
    write_predictions(tmp_path / "a.tsv", rows, provenance=header)
    write_predictions(tmp_path / "b.tsv", rows, provenance=header)
    assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()
    assert "sha256:" in (tmp_path / "a.tsv").read_text(encoding="utf-8")


def test_write_predictions_rejects_bad_provenance_and_fields(tmp_path):
    out = tmp_path / "pred.tsv"
    with pytest.raises(DataError, match="must start with '#'"):
        write_predictions(out, [], provenance=["not a comment"])
    with pytest.raises(DataError, match="tab or newline"):
        write_predictions(out, [PredictionRow("id\t1", "literal", "baseline", "")])
    assert not out.exists()
