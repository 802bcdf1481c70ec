"""Reward shaping: format-diversity scaling with cosine decay, and group advantages.

For a rollout whose format appears F times in a group of G::

    decay(t) = F/G + 0.5 * (1 - F/G) * (1 + cos(pi * t / T))
    alpha(t) = G/F * decay(t)          # G/F at t=0, 1 at t=T
    r'       = alpha(t) * r            # ada_grpo; grpo keeps r' = r

Advantages standardise r' within the group (population std).
"""

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Sequence, Union

import numpy as np

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.rollout import RolloutGroup
from arm_lab.errors import DomainError, LengthMismatchError

EPS_STD = 1e-8

ArrayLike = Union[float, int, np.ndarray]


class TrainingMode(str, Enum):
    ADA_GRPO = "ada_grpo"
    GRPO = "grpo"

    @classmethod
    def parse(cls, value: Union[str, "TrainingMode"]) -> "TrainingMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower().replace("-", "_"))
        except ValueError:
            raise ValueError(f"mode must be one of {[m.value for m in cls]}, got {value!r}") from None


@dataclass(frozen=True)
class ShapingSchedule:
    t: int
    T: int

    def __post_init__(self):
        if self.T < 1:
            raise DomainError(f"T must be >= 1, got {self.T}")
        if self.t < 0 or self.t > self.T:
            raise DomainError(f"t must lie in [0, T={self.T}], got {self.t}")

    @property
    def cosine_weight(self) -> float:
        """0.5 * (1 + cos(pi t / T)): 1 at t=0, 0 at t=T."""
        return 0.5 * (1.0 + math.cos(math.pi * self.t / self.T))


def _check_counts(F: ArrayLike, G: int) -> None:
    f = np.asarray(F)
    if G < 1 or np.any(f < 1) or np.any(f > G):
        raise DomainError(f"format count must satisfy 1 <= F <= G (G={G}), got {F}")


def format_counts(group: RolloutGroup) -> Dict[ReasoningFormat, int]:
    return dict(Counter(r.format for r in group.rollouts))


def decay_factor(F: ArrayLike, G: int, sched: ShapingSchedule) -> ArrayLike:
    _check_counts(F, G)
    share = np.asarray(F, dtype=float) / G
    # same value as share + 0.5 * (1 - share) * (1 + cos), exact at both ends
    out = 1.0 - (1.0 - share) * (1.0 - sched.cosine_weight)
    return float(out) if np.ndim(out) == 0 else out


def diversity_scale(F: ArrayLike, G: int, sched: ShapingSchedule, decay_enabled: bool = True) -> ArrayLike:
    """alpha = G/F * decay; with decay disabled the factor stays at G/F."""
    _check_counts(F, G)
    weight = sched.cosine_weight if decay_enabled else 1.0
    # G/F * decay == 1 + (G/F - 1) * weight
    out = 1.0 + (G / np.asarray(F, dtype=float) - 1.0) * weight
    return float(out) if np.ndim(out) == 0 else out


def shape_rewards(
    group: RolloutGroup,
    sched: ShapingSchedule,
    mode: Union[str, TrainingMode] = TrainingMode.ADA_GRPO,
    decay_enabled: bool = True,
) -> np.ndarray:
    rewards = np.asarray(group.rewards, dtype=float)
    if TrainingMode.parse(mode) is TrainingMode.GRPO:
        return rewards
    counts = format_counts(group)
    F = np.array([counts[r.format] for r in group.rollouts], dtype=float)
    return diversity_scale(F, group.size, sched, decay_enabled) * rewards


def group_advantages(shaped: Sequence[float]) -> np.ndarray:
    r = np.asarray(shaped, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise LengthMismatchError(f"advantages need a group of at least 2 rewards, got {r.size}")
    std = r.std()
    if std <= EPS_STD:
        return np.zeros_like(r)
    return (r - r.mean()) / std
