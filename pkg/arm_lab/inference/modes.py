"""Inference-time reasoning modes.

adaptive            the policy picks the format (sampled, or argmax)
instruction_guided  the caller forces one format
consensus           Direct, ShortCoT and Code answer independently; if their
                    normalised answers agree that answer wins, otherwise a
                    LongCoT rollout decides. Tokens of every rollout count.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Protocol, Tuple, Union

import numpy as np

from arm_lab.core.policy import TabularPolicy, sample_format
from arm_lab.domain.reasoning_format import FORMATS, ReasoningFormat
from arm_lab.domain.rollout import Rollout
from arm_lab.domain.task import DIFFICULTIES, Difficulty, TaskInstance
from arm_lab.env.synthetic import EnvConfig, rollout_once, sample_task
from arm_lab.protocol.grading import grade, normalize_answer

CONSENSUS_FORMATS = (ReasoningFormat.DIRECT_ANSWER, ReasoningFormat.SHORT_COT, ReasoningFormat.CODE)


class AnswerProvider(Protocol):
    def generate(self, task: TaskInstance, fmt: ReasoningFormat, rng: np.random.Generator) -> Rollout:
        ...


@dataclass(frozen=True)
class SyntheticProvider:
    env: EnvConfig

    def generate(self, task: TaskInstance, fmt: ReasoningFormat, rng: np.random.Generator) -> Rollout:
        return rollout_once(task, fmt, self.env, rng)


Backend = Union[EnvConfig, AnswerProvider]


def _provider(env: Backend) -> AnswerProvider:
    if isinstance(env, EnvConfig):
        return SyntheticProvider(env)
    return env


class ReasoningMode(str, Enum):
    ADAPTIVE = "adaptive"
    INSTRUCTION_GUIDED = "instruction_guided"
    CONSENSUS = "consensus"


@dataclass(frozen=True)
class ModeRequest:
    mode: ReasoningMode
    task: TaskInstance
    policy: Optional[TabularPolicy] = None
    forced_format: Optional[ReasoningFormat] = None
    argmax: bool = False

    def __post_init__(self):
        if self.mode is ReasoningMode.INSTRUCTION_GUIDED and self.forced_format is None:
            raise ValueError("instruction_guided needs exactly one target format")
        if self.mode is not ReasoningMode.INSTRUCTION_GUIDED and self.forced_format is not None:
            raise ValueError(f"{self.mode.value} does not take a target format")
        if self.mode is ReasoningMode.ADAPTIVE and self.policy is None:
            raise ValueError("adaptive mode needs a policy")


@dataclass(frozen=True)
class ModeResult:
    answer: str
    reward: int
    total_tokens: int
    formats_used: Tuple[ReasoningFormat, ...]
    long_cot_invoked: bool


def _single(rollout: Rollout) -> ModeResult:
    return ModeResult(
        answer=rollout.answer,
        reward=rollout.reward,
        total_tokens=rollout.token_count,
        formats_used=(rollout.format,),
        long_cot_invoked=rollout.format is ReasoningFormat.LONG_COT,
    )


# -----------------------
# Modes
# -----------------------
def run_adaptive(
    task: TaskInstance,
    policy: TabularPolicy,
    env: Backend,
    rng: np.random.Generator,
    argmax: bool = False,
) -> ModeResult:
    fmt, _ = sample_format(policy, task.difficulty, rng, argmax=argmax)
    return _single(_provider(env).generate(task, fmt, rng))


def run_instruction_guided(
    task: TaskInstance,
    fmt: ReasoningFormat,
    env: Backend,
    rng: np.random.Generator,
) -> ModeResult:
    return _single(_provider(env).generate(task, ReasoningFormat(fmt), rng))


def run_consensus(task: TaskInstance, env: Backend, rng: np.random.Generator) -> ModeResult:
    provider = _provider(env)
    # one independent substream per format, in fixed format order
    subs = rng.spawn(len(CONSENSUS_FORMATS) + 1)
    efficient = [provider.generate(task, fmt, s) for fmt, s in zip(CONSENSUS_FORMATS, subs)]
    kind = task.grade_spec.answer_kind
    normalized = {normalize_answer(r.answer, kind) for r in efficient}
    tokens = sum(r.token_count for r in efficient)

    if len(normalized) == 1:
        answer = efficient[0].answer
        return ModeResult(
            answer=answer,
            reward=grade(answer, task.grade_spec),
            total_tokens=tokens,
            formats_used=CONSENSUS_FORMATS,
            long_cot_invoked=False,
        )

    fallback = provider.generate(task, ReasoningFormat.LONG_COT, subs[-1])
    return ModeResult(
        answer=fallback.answer,
        reward=fallback.reward,
        total_tokens=tokens + fallback.token_count,
        formats_used=CONSENSUS_FORMATS + (ReasoningFormat.LONG_COT,),
        long_cot_invoked=True,
    )


def run_request(request: ModeRequest, env: Backend, rng: np.random.Generator) -> ModeResult:
    if request.mode is ReasoningMode.ADAPTIVE:
        return run_adaptive(request.task, request.policy, env, rng, argmax=request.argmax)
    if request.mode is ReasoningMode.INSTRUCTION_GUIDED:
        return run_instruction_guided(request.task, request.forced_format, env, rng)
    return run_consensus(request.task, env, rng)


# -----------------------
# Reports
# -----------------------
def all_modes() -> List[str]:
    """Row labels of a mode report, in output order."""
    return (
        ["adaptive", "adaptive_argmax"]
        + [f"inst_{f.short_name}" for f in FORMATS]
        + ["consensus"]
    )


def parse_mode_label(label: str) -> Tuple[ReasoningMode, Optional[ReasoningFormat], bool]:
    s = label.strip().lower()
    if s == "adaptive":
        return ReasoningMode.ADAPTIVE, None, False
    if s == "adaptive_argmax":
        return ReasoningMode.ADAPTIVE, None, True
    if s == "consensus":
        return ReasoningMode.CONSENSUS, None, False
    if s.startswith("inst_"):
        return ReasoningMode.INSTRUCTION_GUIDED, ReasoningFormat.from_name(s[len("inst_"):]), False
    raise ValueError(f"Unknown mode: {label!r} (expected one of {all_modes()})")


@dataclass(frozen=True)
class ModeStats:
    mode: str
    difficulty: Difficulty
    n: int
    accuracy: float
    mean_tokens: float
    long_cot_usage: float


def mode_report(
    mode: str,
    n_tasks: int,
    env: EnvConfig,
    policy: Optional[TabularPolicy],
    rng: np.random.Generator,
    provider: Optional[AnswerProvider] = None,
) -> Dict[Difficulty, ModeStats]:
    """n_tasks requests per difficulty.

    Tasks come from their own substream of rng, so two reports built from
    equally seeded generators see the same tasks whatever the mode.
    """
    if n_tasks < 1:
        raise ValueError(f"n_tasks must be >= 1, got {n_tasks}")
    reasoning_mode, fmt, argmax = parse_mode_label(mode)
    backend: Backend = provider if provider is not None else env
    task_rng, run_rng = rng.spawn(2)

    report: Dict[Difficulty, ModeStats] = {}
    for d in DIFFICULTIES:
        rewards = np.zeros(n_tasks)
        tokens = np.zeros(n_tasks)
        long_cot = np.zeros(n_tasks)
        for k in range(n_tasks):
            task = sample_task(env, task_rng, difficulty=d, task_id=f"{d.label}-{k}")
            request = ModeRequest(reasoning_mode, task, policy=policy, forced_format=fmt, argmax=argmax)
            result = run_request(request, backend, run_rng)
            rewards[k] = result.reward
            tokens[k] = result.total_tokens
            long_cot[k] = result.long_cot_invoked
        report[d] = ModeStats(
            mode=mode,
            difficulty=d,
            n=n_tasks,
            accuracy=float(rewards.mean()),
            mean_tokens=float(tokens.mean()),
            long_cot_usage=float(long_cot.mean()),
        )
    return report
