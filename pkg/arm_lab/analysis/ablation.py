"""Decay ablation: Ada-GRPO with and without the cosine decay of the scaling factor.

Each arm is trained with the same seed. Its checkpoints are scored on one
shared held-out task set by their expected adaptive-mode accuracy, so two
checkpoints differ in score only when their policies differ. The spread of
that score over the second half of training measures how much the arm moves.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from arm_lab import rng as rngs
from arm_lab.core.policy import TabularPolicy
from arm_lab.core.shaping import TrainingMode
from arm_lab.domain.task import DIFFICULTIES
from arm_lab.env.synthetic import EnvConfig, sample_task
from arm_lab.training.trainer import TrainConfig, train

logger = logging.getLogger(__name__)

DEFAULT_EVAL_INTERVAL = 25
DEFAULT_EVAL_TASKS = 2000
DEFAULT_EVAL_SEED = 20_250_601


def held_out_counts(env: EnvConfig, n_tasks: int, eval_seed: int) -> np.ndarray:
    """Tasks per difficulty in the held-out set fixed by eval_seed."""
    if n_tasks < 1:
        raise ValueError(f"n_tasks must be >= 1, got {n_tasks}")
    task_rng = rngs.stream(eval_seed, rngs.EVAL, 0)
    counts = np.zeros(len(DIFFICULTIES))
    for k in range(n_tasks):
        counts[sample_task(env, task_rng, task_id=f"eval-{k}").difficulty] += 1
    return counts


def evaluate_policy(policy: TabularPolicy, env: EnvConfig, n_tasks: int, eval_seed: int) -> float:
    """Expected adaptive-mode accuracy on the held-out set fixed by eval_seed.

    Adaptive mode samples one format from the policy row of the task's
    difficulty, so a task's expected reward is sum_f p(f|d) * accuracy[d][f].
    """
    return _expected_accuracy(policy, env, held_out_counts(env, n_tasks, eval_seed))


def _expected_accuracy(policy: TabularPolicy, env: EnvConfig, counts: np.ndarray) -> float:
    per_difficulty = np.sum(policy.probs_table() * env.accuracy_table(), axis=1)
    return float(counts @ per_difficulty / counts.sum())


@dataclass
class AblationArm:
    decay_enabled: bool
    steps: List[int]
    eval_rewards: List[float]
    second_half_variance: float
    degenerate: bool               # fewer than two points in the second half

    @property
    def final_reward(self) -> Optional[float]:
        return self.eval_rewards[-1] if self.eval_rewards else None


@dataclass
class AblationReport:
    arms: List[AblationArm]
    eval_interval: int
    eval_tasks: int

    def arm(self, decay_enabled: bool) -> Optional[AblationArm]:
        for a in self.arms:
            if a.decay_enabled == decay_enabled:
                return a
        return None

    @property
    def with_decay(self) -> Optional[AblationArm]:
        return self.arm(True)

    @property
    def without_decay(self) -> Optional[AblationArm]:
        return self.arm(False)


def second_half(values: Sequence[float]) -> List[float]:
    return list(values[len(values) // 2:])


def ablate_decay(
    base: TrainConfig,
    eval_interval: int = DEFAULT_EVAL_INTERVAL,
    eval_tasks: int = DEFAULT_EVAL_TASKS,
    eval_seed: int = DEFAULT_EVAL_SEED,
    arms: Sequence[bool] = (True, False),
) -> AblationReport:
    if base.mode is not TrainingMode.ADA_GRPO:
        raise ValueError(f"decay ablation needs mode ada_grpo, got {base.mode.value}")
    if eval_interval < 1:
        raise ValueError(f"eval_interval must be >= 1, got {eval_interval}")

    counts = held_out_counts(base.env, eval_tasks, eval_seed)
    results = []
    for decay in arms:
        cfg = base.with_(decay_enabled=decay, checkpoint_interval=eval_interval)
        logger.info("ablation arm decay=%s", decay)
        run = train(cfg)

        # checkpoints land every eval_interval steps plus the final step
        points = [c for c in run.checkpoints if c.step % eval_interval == 0]
        if not points and run.checkpoints:
            points = [run.checkpoints[-1]]
        rewards = [_expected_accuracy(c.policy, base.env, counts) for c in points]

        tail = second_half(rewards)
        degenerate = len(tail) < 2
        if degenerate:
            logger.warning("ablation arm decay=%s: %d evaluation point(s) in the second half", decay, len(tail))
        results.append(AblationArm(
            decay_enabled=bool(decay),
            steps=[c.step for c in points],
            eval_rewards=rewards,
            second_half_variance=float(np.var(tail)) if tail else 0.0,
            degenerate=degenerate,
        ))

    return AblationReport(arms=results, eval_interval=eval_interval, eval_tasks=eval_tasks)
