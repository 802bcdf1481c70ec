"""Rule-based binary grading of answers against ground truth."""

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Optional

MULTIPLE_CHOICE = "multiple_choice"
NUMERIC = "numeric"
LITERAL = "literal"

ANSWER_KINDS = (MULTIPLE_CHOICE, NUMERIC, LITERAL)
CHOICE_LETTERS = "ABCDE"


def parse_decimal(text: str) -> Optional[Decimal]:
    s = (text or "").strip()
    if not s:
        return None
    try:
        d = Decimal(s)
    except (InvalidOperation, ValueError):
        return None
    if not d.is_finite():
        return None
    return d


@dataclass(frozen=True)
class GradeSpec:
    ground_truth: str
    answer_kind: str = LITERAL

    def __post_init__(self):
        if self.answer_kind not in ANSWER_KINDS:
            raise ValueError(f"answer_kind must be one of {ANSWER_KINDS}, got {self.answer_kind!r}")
        gt = self.ground_truth.strip()
        if self.answer_kind == MULTIPLE_CHOICE:
            if len(gt) != 1 or gt.upper() not in CHOICE_LETTERS:
                raise ValueError(f"multiple_choice ground truth must be one letter A-E, got {self.ground_truth!r}")
        elif self.answer_kind == NUMERIC:
            if parse_decimal(gt) is None:
                raise ValueError(f"numeric ground truth must parse as a decimal, got {self.ground_truth!r}")


def infer_answer_kind(ground_truth: str) -> str:
    """Guess the kind of a bare ground-truth string (used for corpus replay)."""
    gt = ground_truth.strip()
    if len(gt) == 1 and gt.upper() in CHOICE_LETTERS:
        return MULTIPLE_CHOICE
    if parse_decimal(gt) is not None:
        return NUMERIC
    return LITERAL


def normalize_answer(answer: str, answer_kind: str) -> str:
    """Canonical form used for grading and for answer equality.

    Numeric answers that parse become their shortest plain decimal
    ("18.0" -> "18"); everything else is trimmed and case-folded.
    """
    if answer_kind == NUMERIC:
        d = parse_decimal(answer)
        if d is not None:
            return format(d.normalize(), "f")
    return (answer or "").strip().casefold()


def grade(answer: str, spec: GradeSpec) -> int:
    """1 iff answer matches spec.ground_truth under the kind's normalisation, else 0."""
    if spec.answer_kind == NUMERIC:
        got = parse_decimal(answer)
        if got is None:
            return 0
        return int(got == parse_decimal(spec.ground_truth))
    return int(normalize_answer(answer, spec.answer_kind) == normalize_answer(spec.ground_truth, spec.answer_kind))


def count_tokens(raw: str) -> int:
    # whitespace tokens; a proxy, not a model tokenizer
    return len(raw.split())
