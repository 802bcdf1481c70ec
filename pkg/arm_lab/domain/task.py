from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

from arm_lab.protocol.grading import GradeSpec


class Difficulty(IntEnum):
    EASY = 0
    MEDIUM = 1
    HARD = 2

    @property
    def label(self) -> str:
        return self.name.lower()


DIFFICULTIES: Tuple[Difficulty, ...] = tuple(Difficulty)


@dataclass(frozen=True)
class TaskInstance:
    task_id: str
    difficulty: Difficulty
    ground_truth: str            # symbol of the task's answer alphabet
    grade_spec: GradeSpec
    answer_space: int            # alphabet size
