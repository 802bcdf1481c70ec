from dataclasses import dataclass, field
from typing import List

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.task import Difficulty


@dataclass(frozen=True)
class Rollout:
    # --- Action ---
    format: ReasoningFormat
    logprob_old: float = 0.0     # log pi_old(format | difficulty), <= 0

    # --- Outcome ---
    answer: str = ""
    reward: int = 0              # binary, from grade()
    token_count: int = 0

    def __post_init__(self):
        if self.reward not in (0, 1):
            raise ValueError(f"reward must be 0 or 1, got {self.reward!r}")
        if self.token_count < 0:
            raise ValueError(f"token_count must be >= 0, got {self.token_count}")
        if self.logprob_old > 0.0:
            raise ValueError(f"logprob_old must be <= 0, got {self.logprob_old}")


@dataclass(frozen=True)
class RolloutGroup:
    """G rollouts sampled for one task."""

    task_id: str
    difficulty: Difficulty
    rollouts: List[Rollout] = field(default_factory=list)

    def __post_init__(self):
        if len(self.rollouts) < 2:
            raise ValueError(f"a group needs at least 2 rollouts, got {len(self.rollouts)}")

    @property
    def size(self) -> int:
        return len(self.rollouts)

    @property
    def rewards(self) -> List[int]:
        return [r.reward for r in self.rollouts]

    @property
    def formats(self) -> List[ReasoningFormat]:
        return [r.format for r in self.rollouts]

    @property
    def token_total(self) -> int:
        return sum(r.token_count for r in self.rollouts)
