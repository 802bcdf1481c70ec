"""Ada-GRPO / GRPO training loop over the synthetic environment.

Step t (1..T) samples a batch of tasks, rolls out G formats per task under a
snapshot of the policy, grades and shapes the rewards, standardises them per
group and applies one clipped-surrogate update per minibatch. The reference
policy is the initial policy for the whole run.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from arm_lab import rng as rngs
from arm_lab.core.checkpoint import Checkpoint
from arm_lab.core.policy import (
    SurrogateConfig,
    TabularPolicy,
    apply_update,
    mean_kl_to_reference,
    sample_format,
    surrogate_loss_and_grad,
    uniform_policy,
)
from arm_lab.core.shaping import ShapingSchedule, TrainingMode, group_advantages, shape_rewards
from arm_lab.domain.rollout import RolloutGroup
from arm_lab.domain.task import DIFFICULTIES, Difficulty, TaskInstance
from arm_lab.env.synthetic import EnvConfig, default_config, rollout_once, sample_task
from arm_lab.errors import ConfigError, TrainingAbortedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    mode: TrainingMode = TrainingMode.ADA_GRPO
    group_size: int = 8
    total_steps: int = 300
    tasks_per_step: int = 64
    minibatches_per_step: int = 4
    learning_rate: float = 0.3
    clip_epsilon: float = 0.2
    kl_coefficient: float = 1e-3
    decay_enabled: bool = True
    env: EnvConfig = field(default_factory=default_config)
    seed: int = 0
    checkpoint_interval: int = 25
    workers: int = 1
    log_every: int = 25

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", TrainingMode.parse(self.mode))
        except ValueError as e:
            raise ConfigError(str(e), field="mode") from None

        if self.group_size < 2:
            raise ConfigError("group_size must be >= 2", field="group_size")
        if self.total_steps < 0:
            raise ConfigError("total_steps must be >= 0", field="total_steps")
        if self.tasks_per_step < 1:
            raise ConfigError("tasks_per_step must be >= 1", field="tasks_per_step")
        if self.minibatches_per_step < 1 or self.tasks_per_step % self.minibatches_per_step != 0:
            raise ConfigError("minibatches_per_step must divide tasks_per_step", field="minibatches_per_step")
        if not (self.learning_rate >= 0.0 and math.isfinite(self.learning_rate)):
            raise ConfigError("learning_rate must be a finite value >= 0", field="learning_rate")
        if not (0.0 < self.clip_epsilon < 1.0):
            raise ConfigError("clip_epsilon must lie in (0, 1)", field="clip_epsilon")
        if self.kl_coefficient < 0.0:
            raise ConfigError("kl_coefficient must be >= 0", field="kl_coefficient")
        if self.checkpoint_interval < 1:
            raise ConfigError("checkpoint_interval must be >= 1", field="checkpoint_interval")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1", field="workers")
        if self.log_every < 1:
            raise ConfigError("log_every must be >= 1", field="log_every")

    def with_(self, **changes) -> "TrainConfig":
        return replace(self, **changes)

    @property
    def surrogate(self) -> SurrogateConfig:
        return SurrogateConfig(clip_epsilon=self.clip_epsilon, kl_coefficient=self.kl_coefficient)


@dataclass
class StepMetrics:
    step: int

    # --- Per difficulty (None when the difficulty was not sampled) ---
    mean_reward: Dict[Difficulty, Optional[float]]
    format_distribution: Dict[Difficulty, Tuple[float, ...]]   # policy after the step
    mean_tokens: Dict[Difficulty, Optional[float]]
    n_tasks: Dict[Difficulty, int]

    # --- Batch ---
    batch_mean_reward: float
    batch_mean_tokens: float
    step_tokens: int
    cumulative_rollout_tokens: int

    # --- Optimisation ---
    mean_loss: float
    kl_to_ref: float
    wall_time: float


@dataclass
class TrainResult:
    policy: TabularPolicy
    metrics: List[StepMetrics]
    checkpoints: List[Checkpoint]
    initial_policy: TabularPolicy

    @property
    def final_checkpoint(self) -> Checkpoint:
        if self.checkpoints:
            return self.checkpoints[-1]
        return Checkpoint(step=0, policy=self.policy.copy())


# -----------------------
# Rollouts
# -----------------------
def rollout_group(
    task: TaskInstance,
    policy: TabularPolicy,
    env: EnvConfig,
    group_size: int,
    rng: np.random.Generator,
) -> RolloutGroup:
    rollouts = []
    for _ in range(group_size):
        fmt, logprob = sample_format(policy, task.difficulty, rng)
        rollouts.append(rollout_once(task, fmt, env, rng, logprob=logprob))
    return RolloutGroup(task_id=task.task_id, difficulty=task.difficulty, rollouts=rollouts)


def _collect_groups(
    config: TrainConfig,
    step: int,
    old_policy: TabularPolicy,
    pool: Optional[ThreadPoolExecutor],
) -> List[RolloutGroup]:
    task_rng = rngs.stream(config.seed, rngs.TASKS, step)
    tasks = [
        sample_task(config.env, task_rng, task_id=f"s{step}-{k}")
        for k in range(config.tasks_per_step)
    ]

    def run(k: int) -> RolloutGroup:
        g_rng = rngs.stream(config.seed, rngs.ROLLOUTS, step, k)
        return rollout_group(tasks[k], old_policy, config.env, config.group_size, g_rng)

    indices = range(len(tasks))
    if pool is None:
        return [run(k) for k in indices]
    # map() yields in submission order
    return list(pool.map(run, indices))


def _step_metrics(
    step: int,
    groups: List[RolloutGroup],
    policy: TabularPolicy,
    ref_policy: TabularPolicy,
    losses: List[float],
    cumulative_tokens: int,
    started: float,
) -> StepMetrics:
    rewards: Dict[Difficulty, List[int]] = {d: [] for d in DIFFICULTIES}
    tokens: Dict[Difficulty, List[int]] = {d: [] for d in DIFFICULTIES}
    n_tasks = {d: 0 for d in DIFFICULTIES}
    for g in groups:
        n_tasks[g.difficulty] += 1
        rewards[g.difficulty].extend(g.rewards)
        tokens[g.difficulty].extend(r.token_count for r in g.rollouts)

    probs = policy.probs_table()
    all_rewards = [r for g in groups for r in g.rewards]
    step_tokens = sum(g.token_total for g in groups)
    n_rollouts = len(all_rewards)

    return StepMetrics(
        step=step,
        mean_reward={d: (float(np.mean(rewards[d])) if rewards[d] else None) for d in DIFFICULTIES},
        format_distribution={d: tuple(float(x) for x in probs[d]) for d in DIFFICULTIES},
        mean_tokens={d: (float(np.mean(tokens[d])) if tokens[d] else None) for d in DIFFICULTIES},
        n_tasks=n_tasks,
        batch_mean_reward=float(np.mean(all_rewards)),
        batch_mean_tokens=step_tokens / n_rollouts,
        step_tokens=step_tokens,
        cumulative_rollout_tokens=cumulative_tokens,
        mean_loss=float(np.mean(losses)),
        kl_to_ref=mean_kl_to_reference(policy, ref_policy),
        wall_time=time.perf_counter() - started,
    )


# -----------------------
# Loop
# -----------------------
def train(config: TrainConfig) -> TrainResult:
    T = config.total_steps
    policy = uniform_policy()
    ref_policy = policy.copy()
    initial = policy.copy()
    metrics: List[StepMetrics] = []
    checkpoints: List[Checkpoint] = []
    meta = {"mode": config.mode.value, "seed": config.seed, "decay_enabled": config.decay_enabled}

    mb_size = config.tasks_per_step // config.minibatches_per_step
    surrogate = config.surrogate
    cumulative = 0
    started = time.perf_counter()

    logger.info(
        "training %s: T=%d G=%d batch=%d minibatches=%d lr=%g seed=%d",
        config.mode.value, T, config.group_size, config.tasks_per_step,
        config.minibatches_per_step, config.learning_rate, config.seed,
    )

    pool_ctx = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else nullcontext()
    with pool_ctx as pool:
        for t in range(1, T + 1):
            sched = ShapingSchedule(t, T)
            old_policy = policy.copy()
            groups = _collect_groups(config, t, old_policy, pool)
            advantages = [
                group_advantages(shape_rewards(g, sched, config.mode, config.decay_enabled))
                for g in groups
            ]

            losses = []
            for j in range(config.minibatches_per_step):
                sl = slice(j * mb_size, (j + 1) * mb_size)
                loss, grad = surrogate_loss_and_grad(
                    policy, old_policy, ref_policy, groups[sl], advantages[sl], surrogate
                )
                if not math.isfinite(loss):
                    raise TrainingAbortedError(f"non-finite loss at step {t}, minibatch {j}")
                policy = apply_update(policy, grad, config.learning_rate)
                losses.append(loss)

            cumulative += sum(g.token_total for g in groups)
            m = _step_metrics(t, groups, policy, ref_policy, losses, cumulative, started)
            metrics.append(m)
            logger.debug("step %d: loss=%.6f reward=%.4f tokens=%d", t, m.mean_loss, m.batch_mean_reward, m.step_tokens)

            if t % config.log_every == 0 or t == T:
                logger.info(
                    "step %d/%d reward=%.3f mean_tokens=%.1f kl=%.4f long_cot=%s",
                    t, T, m.batch_mean_reward, m.batch_mean_tokens, m.kl_to_ref,
                    "/".join(f"{m.format_distribution[d][-1]:.2f}" for d in DIFFICULTIES),
                )
            if t % config.checkpoint_interval == 0 or t == T:
                checkpoints.append(Checkpoint(step=t, policy=policy.copy(), meta=dict(meta)))

    return TrainResult(policy=policy, metrics=metrics, checkpoints=checkpoints, initial_policy=initial)
