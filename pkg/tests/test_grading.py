import csv

import pytest

from arm_lab.protocol.grading import (
    LITERAL,
    MULTIPLE_CHOICE,
    NUMERIC,
    GradeSpec,
    count_tokens,
    grade,
    infer_answer_kind,
    normalize_answer,
)


def load_golden(data_dir):
    with open(data_dir / "grading_golden.csv", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def test_golden_file_has_100_cases(data_dir):
    assert len(load_golden(data_dir)) == 100


def test_grade_matches_golden(data_dir):
    for row in load_golden(data_dir):
        spec = GradeSpec(row["ground_truth"], row["answer_kind"])
        assert grade(row["answer"], spec) == int(row["expected"]), row


def test_grade_is_idempotent_under_normalization(data_dir):
    for row in load_golden(data_dir):
        spec = GradeSpec(row["ground_truth"], row["answer_kind"])
        normalized = normalize_answer(row["answer"], spec.answer_kind)
        assert grade(normalized, spec) == grade(row["answer"], spec), row


@pytest.mark.parametrize("answer,truth,kind,expected", [
    ("72", "72", NUMERIC, 1),
    ("18.0", "18", NUMERIC, 1),
    ("E", "D", MULTIPLE_CHOICE, 0),
])
def test_grade_examples(answer, truth, kind, expected):
    assert grade(answer, GradeSpec(truth, kind)) == expected


def test_grade_only_returns_binary():
    spec = GradeSpec("3", NUMERIC)
    for answer in ["3", "3.0", "x", "", "4", "  3  ", "nan"]:
        assert grade(answer, spec) in (0, 1)


def test_grade_spec_validation():
    with pytest.raises(ValueError):
        GradeSpec("F", MULTIPLE_CHOICE)
    with pytest.raises(ValueError):
        GradeSpec("twelve", NUMERIC)
    with pytest.raises(ValueError):
        GradeSpec("x", "free_text")


def test_infer_answer_kind():
    assert infer_answer_kind("D") == MULTIPLE_CHOICE
    assert infer_answer_kind("72") == NUMERIC
    assert infer_answer_kind("Paris") == LITERAL


def test_normalize_numeric_is_plain_decimal():
    assert normalize_answer("18.0", NUMERIC) == "18"
    assert normalize_answer("1e2", NUMERIC) == "100"
    assert normalize_answer(" D ", MULTIPLE_CHOICE) == "d"


@pytest.mark.parametrize("raw,n", [
    ("", 0),
    ("The answer is 18.", 4),
    ("<ANSWER>72</ANSWER>", 1),
])
def test_count_tokens(raw, n):
    assert count_tokens(raw) == n


def test_count_tokens_is_additive():
    pieces = ["a", "b c", "<SHORT_COT>x y</SHORT_COT>", "  padded  ", "z\n\tw"]
    for a in pieces:
        for b in pieces:
            assert count_tokens(a + " " + b) == count_tokens(a) + count_tokens(b)
