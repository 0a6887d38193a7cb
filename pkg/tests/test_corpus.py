"""Tests for JSON Lines corpus parsing."""

import json

import pytest

from tormono.core.corpus import parse_corpus, parse_entry
from tormono.core.errors import CorpusFormatError

from conftest import M


@pytest.fixture
def corpus_file(tmp_path):
    def write(*lines):
        path = tmp_path / "corpus.jsonl"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write


def test_entry_fields():
    entry = parse_entry('{"id": "gap", "matrix": "1,1,0;0,3,1;0,2,1", "expected": "Indecomposable"}', 1)
    assert entry.id == "gap"
    assert entry.matrix == M([1, 1, 0], [0, 3, 1], [0, 2, 1])
    assert entry.expected == "Indecomposable"


def test_id_defaults_to_line_number():
    assert parse_entry('{"matrix": "1"}', 7).id == "7"


@pytest.mark.parametrize(
    "line",
    [
        "not json",
        "[1, 2]",
        '{"id": "x"}',
        '{"matrix": 5}',
        '{"matrix": "1,a;0,1"}',
        '{"matrix": "2,0;0,1"}',
        '{"matrix": "1,1;0,1", "expected": "Maybe"}',
    ],
)
def test_malformed_entries(line):
    with pytest.raises(CorpusFormatError) as info:
        parse_entry(line, 3)
    assert "line 3" in str(info.value)


def test_parse_corpus_collects_errors(corpus_file):
    path = corpus_file(
        json.dumps({"id": "a", "matrix": "1,1;0,1"}),
        "",
        "garbage",
        json.dumps({"id": "b", "matrix": "1,0,1;0,2,1;0,1,1", "expected": "Decomposable"}),
    )
    entries, errors = parse_corpus(path)
    assert [e.id for e in entries] == ["a", "b"]
    assert len(errors) == 1
    assert errors[0].line == 3


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_corpus(tmp_path / "absent.jsonl")


def test_undecodable_line_is_collected(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_bytes(
        b'{"id": "a", "matrix": "1,1;0,1"}\n'
        b'\xff\xfe{"id": "b", "matrix": "1"}\n'
        b'{"id": "c", "matrix": "1,0;0,1"}\n'
    )
    entries, errors = parse_corpus(path)
    assert [e.id for e in entries] == ["a", "c"]
    assert [e.line for e in errors] == [2]
    assert "UTF-8" in errors[0].message
