"""Reflective-word statistics over rationales (backtracking / verification cues)."""

from dataclasses import dataclass
from typing import Sequence

from arm_lab.errors import LengthMismatchError
from arm_lab.protocol.transcript import Transcript

REFLECTIVE_WORDS = (
    "re-check",
    "re-evaluate",
    "re-examine",
    "re-think",
    "recheck",
    "reevaluate",
    "reexamine",
    "reevaluation",
    "rethink",
    "check again",
    "think again",
    "try again",
    "verify",
    "wait",
    "yet",
    "double-check",
    "double check",
)


@dataclass(frozen=True)
class ReflectionStats:
    n: int
    n_reflective: int
    n_reflective_correct: int
    reflection_ratio: float
    correct_ratio_in_reflection_texts: float
    correct_ratio_defined: bool      # False when no rationale is reflective (ratio reported as 0)


def is_reflective(text: str) -> bool:
    low = text.lower()
    return any(w in low for w in REFLECTIVE_WORDS)


def reflective_word_stats(transcripts: Sequence[Transcript], rewards: Sequence[int]) -> ReflectionStats:
    if len(transcripts) != len(rewards):
        raise LengthMismatchError(f"{len(transcripts)} transcripts but {len(rewards)} rewards")
    n = len(transcripts)
    if n == 0:
        raise ValueError("reflective_word_stats needs at least one transcript")

    n_ref = 0
    n_ref_ok = 0
    for t, r in zip(transcripts, rewards):
        if is_reflective(t.rationale):
            n_ref += 1
            n_ref_ok += int(r == 1)

    return ReflectionStats(
        n=n,
        n_reflective=n_ref,
        n_reflective_correct=n_ref_ok,
        reflection_ratio=n_ref / n,
        correct_ratio_in_reflection_texts=(n_ref_ok / n_ref) if n_ref else 0.0,
        correct_ratio_defined=n_ref > 0,
    )
