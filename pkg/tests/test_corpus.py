import pytest

from arm_lab.adapters.corpus import load_replay, split_records, summarize_replay
from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.errors import CorpusError

from conftest import write

CORPUS = """<SHORT_COT>12 + 6 = 18. Wait, verify: 18 - 6 = 12.</SHORT_COT>
<ANSWER>18</ANSWER>
---
<ANSWER>B</ANSWER>
"""


def test_replay_grades_each_record(tmp_path):
    corpus = write(tmp_path / "corpus.txt", CORPUS)
    truth = write(tmp_path / "truth.txt", "18.0\nC\n\n")
    records = load_replay(corpus, truth)
    assert [r.reward for r in records] == [1, 0]
    assert records[0].transcript.format is ReasoningFormat.SHORT_COT
    assert records[1].transcript.format is ReasoningFormat.DIRECT_ANSWER

    summary = summarize_replay(records)
    assert summary.n == 2
    assert summary.accuracy == 0.5
    assert summary.by_format[ReasoningFormat.SHORT_COT].accuracy == 1.0
    assert summary.by_format[ReasoningFormat.DIRECT_ANSWER].n == 1
    assert summary.reflection.n_reflective == 1
    assert summary.reflection.reflection_ratio == 0.5


def test_count_mismatch(tmp_path):
    corpus = write(tmp_path / "corpus.txt", CORPUS)
    truth = write(tmp_path / "truth.txt", "18\n")
    with pytest.raises(CorpusError) as e:
        load_replay(corpus, truth)
    assert e.value.record_index == 1


def test_parse_error_names_record(tmp_path):
    bad = CORPUS + "---\n<CODE>print(1)</CODE>\n"
    corpus = write(tmp_path / "corpus.txt", bad)
    truth = write(tmp_path / "truth.txt", "18\nB\n1\n")
    with pytest.raises(CorpusError) as e:
        load_replay(corpus, truth)
    assert e.value.record_index == 2


def test_empty_record():
    with pytest.raises(CorpusError) as e:
        split_records("<ANSWER>A</ANSWER>\n---\n\n---\n<ANSWER>B</ANSWER>")
    assert e.value.record_index == 1
    assert split_records("<ANSWER>A</ANSWER>\n---\n") == ["<ANSWER>A</ANSWER>"]


def test_missing_file(tmp_path):
    with pytest.raises(CorpusError):
        load_replay(str(tmp_path / "nope.txt"), str(tmp_path / "truth.txt"))


def test_empty_corpus_summary(tmp_path):
    summary = summarize_replay([])
    assert summary.n == 0 and summary.reflection is None
