"""Synthetic reasoning environment.

Each (difficulty, format) cell has a probability of answering correctly and a
mean token cost. Defaults blend the per-dataset instruction-guided
measurements into three difficulty rows: easy = commonsense multiple choice,
medium = grade-school / competition math and symbolic tasks, hard =
olympiad-style integer answers.
"""

from dataclasses import dataclass, fields
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.rollout import Rollout
from arm_lab.domain.task import Difficulty, TaskInstance
from arm_lab.errors import ConfigError
from arm_lab.protocol.grading import CHOICE_LETTERS, MULTIPLE_CHOICE, NUMERIC, GradeSpec, grade

Table = Tuple[Tuple[float, ...], ...]

# columns: direct, short_cot, code, long_cot
DEFAULT_ACCURACY: Table = (
    (0.83, 0.79, 0.83, 0.86),   # easy
    (0.35, 0.73, 0.74, 0.83),   # medium
    (0.00, 0.10, 0.10, 0.20),   # hard
)
DEFAULT_TOKEN_MEAN: Table = (
    (10.0, 34.0, 144.0, 277.0),
    (14.0, 231.0, 343.0, 662.0),
    (12.0, 2010.0, 1821.0, 4130.0),
)
DEFAULT_DIFFICULTY_MIX = (0.4, 0.5, 0.1)
DEFAULT_ANSWER_SPACE = 5
DEFAULT_ANSWER_SPACE_BY_DIFFICULTY = (5, 100, 1000)
DEFAULT_TOKEN_JITTER = 0.1   # free choice, no measured variance behind it


def _as_table(name: str, value) -> Table:
    try:
        table = tuple(tuple(float(x) for x in row) for row in value)
    except (TypeError, ValueError):
        raise ConfigError("expected a 3x4 table of numbers", field=name) from None
    if len(table) != len(Difficulty) or any(len(row) != len(ReasoningFormat) for row in table):
        raise ConfigError("expected a 3x4 table (difficulty x format)", field=name)
    return table


@dataclass(frozen=True)
class EnvConfig:
    accuracy: Table = DEFAULT_ACCURACY
    token_mean: Table = DEFAULT_TOKEN_MEAN
    token_jitter: float = DEFAULT_TOKEN_JITTER
    difficulty_mix: Tuple[float, float, float] = DEFAULT_DIFFICULTY_MIX
    answer_space: int = DEFAULT_ANSWER_SPACE
    answer_space_by_difficulty: Optional[Tuple[int, int, int]] = None
    seed: int = 0

    def __post_init__(self):
        acc = _as_table("accuracy", self.accuracy)
        tok = _as_table("token_mean", self.token_mean)
        if any(not (0.0 <= p <= 1.0) for row in acc for p in row):
            raise ConfigError("probabilities must lie in [0, 1]", field="accuracy")
        if any(not (m > 0.0) for row in tok for m in row):
            raise ConfigError("token means must be > 0", field="token_mean")
        if not (0.0 <= float(self.token_jitter) <= 1.0):
            raise ConfigError("token_jitter must lie in [0, 1]", field="token_jitter")

        mix = tuple(float(x) for x in self.difficulty_mix)
        if len(mix) != len(Difficulty) or any(x < 0.0 for x in mix) or abs(sum(mix) - 1.0) > 1e-9:
            raise ConfigError("difficulty_mix must be 3 nonnegative weights summing to 1", field="difficulty_mix")

        if int(self.answer_space) < 2:
            raise ConfigError("answer_space must be >= 2", field="answer_space")
        by_d = self.answer_space_by_difficulty
        if by_d is not None:
            by_d = tuple(int(n) for n in by_d)
            if len(by_d) != len(Difficulty) or any(n < 2 for n in by_d):
                raise ConfigError("answer_space_by_difficulty must be 3 integers >= 2",
                                  field="answer_space_by_difficulty")

        object.__setattr__(self, "accuracy", acc)
        object.__setattr__(self, "token_mean", tok)
        object.__setattr__(self, "token_jitter", float(self.token_jitter))
        object.__setattr__(self, "difficulty_mix", mix)
        object.__setattr__(self, "answer_space", int(self.answer_space))
        object.__setattr__(self, "answer_space_by_difficulty", by_d)
        object.__setattr__(self, "seed", int(self.seed))

    def accuracy_table(self) -> np.ndarray:
        return np.array(self.accuracy, dtype=float)

    def token_table(self) -> np.ndarray:
        return np.array(self.token_mean, dtype=float)

    def answer_space_for(self, difficulty: Union[Difficulty, int]) -> int:
        if self.answer_space_by_difficulty is not None:
            return self.answer_space_by_difficulty[int(difficulty)]
        return self.answer_space

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def default_config() -> EnvConfig:
    return EnvConfig(answer_space_by_difficulty=DEFAULT_ANSWER_SPACE_BY_DIFFICULTY)


# -----------------------
# Answer alphabets
# -----------------------
def answer_kind_for(answer_space: int) -> str:
    # small alphabets are multiple-choice letters, larger ones integers
    return MULTIPLE_CHOICE if answer_space <= len(CHOICE_LETTERS) else NUMERIC


def answer_symbol(index: int, answer_space: int) -> str:
    if answer_kind_for(answer_space) == MULTIPLE_CHOICE:
        return CHOICE_LETTERS[index]
    return str(index)


def _draw_index(weights: Sequence[float], rng: np.random.Generator) -> int:
    cdf = np.cumsum(weights)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    idx = min(idx, len(weights) - 1)
    while weights[idx] == 0.0:
        idx -= 1
    return idx


# -----------------------
# Sampling
# -----------------------
def sample_task(
    config: EnvConfig,
    rng: np.random.Generator,
    difficulty: Optional[Difficulty] = None,
    task_id: Optional[str] = None,
) -> TaskInstance:
    d = Difficulty(difficulty) if difficulty is not None else Difficulty(_draw_index(config.difficulty_mix, rng))
    n = config.answer_space_for(d)
    gt = answer_symbol(int(rng.integers(n)), n)
    if task_id is None:
        task_id = f"t{int(rng.integers(1 << 48)):012x}"
    return TaskInstance(
        task_id=task_id,
        difficulty=d,
        ground_truth=gt,
        grade_spec=GradeSpec(ground_truth=gt, answer_kind=answer_kind_for(n)),
        answer_space=n,
    )


def rollout_once(
    task: TaskInstance,
    fmt: ReasoningFormat,
    config: EnvConfig,
    rng: np.random.Generator,
    logprob: float = 0.0,
) -> Rollout:
    d = int(task.difficulty)
    f = int(fmt)
    n = task.answer_space

    correct = rng.random() < config.accuracy[d][f]
    if correct:
        answer = task.ground_truth
    else:
        gt_index = _symbol_index(task.ground_truth, n)
        k = int(rng.integers(n - 1))
        answer = answer_symbol(k + 1 if k >= gt_index else k, n)
    if fmt is ReasoningFormat.CODE and answer_kind_for(n) == NUMERIC:
        # program outputs print floats
        answer = f"{answer}.0"

    mean = config.token_mean[d][f]
    jitter = config.token_jitter
    tokens = int(round(rng.uniform(mean * (1.0 - jitter), mean * (1.0 + jitter))))

    return Rollout(
        format=fmt,
        logprob_old=min(float(logprob), 0.0),
        answer=answer,
        reward=grade(answer, task.grade_spec),
        token_count=max(tokens, 0),
    )


def _symbol_index(symbol: str, answer_space: int) -> int:
    if answer_kind_for(answer_space) == MULTIPLE_CHOICE:
        return CHOICE_LETTERS.index(symbol.strip().upper())
    return int(symbol)
