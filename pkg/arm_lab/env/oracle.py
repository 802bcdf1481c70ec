"""Exact expectation of the group-mean shaped reward, plus a Monte-Carlo twin.

The oracle enumerates every G-tuple of formats. Given the formats, each
rollout's correctness is an independent Bernoulli draw, so the expected
shaped reward of a tuple is sum_i alpha_i * accuracy[f_i] / G without
enumerating correctness. For small groups `exhaustive=True` also walks the
correctness bits and must agree to rounding.
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np

from arm_lab.core.shaping import ShapingSchedule, TrainingMode, diversity_scale
from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.task import Difficulty
from arm_lab.env.synthetic import EnvConfig
from arm_lab.errors import OracleSizeError

N_FORMATS = len(ReasoningFormat)
MAX_ORACLE_GROUP = 8
MAX_EXHAUSTIVE_GROUP = 6


def _check_probs(policy_probs: Sequence[float]) -> np.ndarray:
    p = np.asarray(policy_probs, dtype=float)
    if p.shape != (N_FORMATS,) or np.any(p < 0.0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"policy_probs must be {N_FORMATS} nonnegative values summing to 1, got {policy_probs}")
    return p


def _check_group(group_size: int, cap: int) -> None:
    if group_size < 2:
        raise ValueError(f"group_size must be >= 2, got {group_size}")
    if group_size > cap:
        raise OracleSizeError(f"enumeration over G={group_size} exceeds the cap G <= {cap}")


def _all_tuples(n_symbols: int, group_size: int) -> np.ndarray:
    """Every G-tuple over range(n_symbols), shape (n_symbols**G, G)."""
    return np.indices((n_symbols,) * group_size).reshape(group_size, -1).T


def _alpha(formats: np.ndarray, sched: ShapingSchedule, mode: TrainingMode, decay_enabled: bool) -> np.ndarray:
    """Per-rollout scaling factor for a batch of format tuples, shape like formats."""
    if mode is TrainingMode.GRPO:
        return np.ones(formats.shape, dtype=float)
    G = formats.shape[1]
    counts = (formats[..., None] == np.arange(N_FORMATS)).sum(axis=1)
    F = np.take_along_axis(counts, formats, axis=1)
    return diversity_scale(F, G, sched, decay_enabled)


def expected_shaped_reward_oracle(
    config: EnvConfig,
    policy_probs: Sequence[float],
    difficulty: Union[Difficulty, int],
    sched: ShapingSchedule,
    mode: Union[str, TrainingMode] = TrainingMode.ADA_GRPO,
    group_size: int = 8,
    decay_enabled: bool = True,
    exhaustive: bool = False,
) -> float:
    p = _check_probs(policy_probs)
    mode = TrainingMode.parse(mode)
    acc = config.accuracy_table()[int(difficulty)]

    if exhaustive:
        return _exhaustive(acc, p, sched, mode, group_size, decay_enabled)

    _check_group(group_size, MAX_ORACLE_GROUP)
    tuples = _all_tuples(N_FORMATS, group_size)
    weight = np.prod(p[tuples], axis=1)
    alpha = _alpha(tuples, sched, mode, decay_enabled)
    group_mean = (alpha * acc[tuples]).mean(axis=1)
    return float(np.dot(weight, group_mean))


def _exhaustive(
    acc: np.ndarray,
    p: np.ndarray,
    sched: ShapingSchedule,
    mode: TrainingMode,
    group_size: int,
    decay_enabled: bool,
) -> float:
    _check_group(group_size, MAX_EXHAUSTIVE_GROUP)
    outcomes = _all_tuples(2 * N_FORMATS, group_size)
    formats = outcomes // 2
    correct = outcomes % 2
    per_rollout = p[formats] * np.where(correct == 1, acc[formats], 1.0 - acc[formats])
    weight = np.prod(per_rollout, axis=1)
    alpha = _alpha(formats, sched, mode, decay_enabled)
    group_mean = (alpha * correct).mean(axis=1)
    return float(np.dot(weight, group_mean))


def monte_carlo_shaped_reward(
    config: EnvConfig,
    policy_probs: Sequence[float],
    difficulty: Union[Difficulty, int],
    sched: ShapingSchedule,
    rng: np.random.Generator,
    mode: Union[str, TrainingMode] = TrainingMode.ADA_GRPO,
    group_size: int = 8,
    n_groups: int = 100_000,
    decay_enabled: bool = True,
) -> Tuple[float, float]:
    """Sampled estimate of the same expectation: (mean, standard error)."""
    p = _check_probs(policy_probs)
    if group_size < 2:
        raise ValueError(f"group_size must be >= 2, got {group_size}")
    if n_groups < 2:
        raise ValueError(f"n_groups must be >= 2, got {n_groups}")
    mode = TrainingMode.parse(mode)
    acc = config.accuracy_table()[int(difficulty)]

    formats = rng.choice(N_FORMATS, size=(n_groups, group_size), p=p)
    correct = rng.random((n_groups, group_size)) < acc[formats]
    alpha = _alpha(formats, sched, mode, decay_enabled)
    group_mean = (alpha * correct).mean(axis=1)
    return float(group_mean.mean()), float(group_mean.std(ddof=1) / math.sqrt(n_groups))
