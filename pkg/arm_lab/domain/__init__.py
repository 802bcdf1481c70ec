from .reasoning_format import ReasoningFormat, FORMATS
from .task import Difficulty, DIFFICULTIES, TaskInstance
from .rollout import Rollout, RolloutGroup

__all__ = [
    "ReasoningFormat",
    "FORMATS",
    "Difficulty",
    "DIFFICULTIES",
    "TaskInstance",
    "Rollout",
    "RolloutGroup",
]
