"""Side-by-side comparison of two training runs (typically Ada-GRPO vs GRPO)."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from arm_lab.domain.task import DIFFICULTIES, Difficulty
from arm_lab.training.trainer import StepMetrics, TrainConfig, TrainResult, train

logger = logging.getLogger(__name__)

DEFAULT_TAIL_FRACTION = 0.1


def tail_mean(values: Sequence[Optional[float]], fraction: float = DEFAULT_TAIL_FRACTION) -> Optional[float]:
    """Mean of the last ceil(fraction * n) entries (at least one), ignoring None."""
    if not values:
        return None
    n = max(1, math.ceil(len(values) * fraction))
    tail = [v for v in values[-n:] if v is not None]
    if not tail:
        return None
    return sum(tail) / len(tail)


def ratio(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None or b == 0:
        return None
    return a / b


@dataclass
class ComparisonReport:
    mode_a: str
    mode_b: str
    steps: int

    final_reward_a: Optional[float]
    final_reward_b: Optional[float]
    reward_difference: Optional[float]          # a - b

    mean_tokens_a: Optional[float]              # response length over the whole run
    mean_tokens_b: Optional[float]
    response_length_ratio: Optional[float]      # a / b

    cumulative_tokens_a: int
    cumulative_tokens_b: int
    cumulative_token_ratio: Optional[float]     # a / b, training-time proxy

    final_long_cot_a: Dict[Difficulty, float]
    final_long_cot_b: Dict[Difficulty, float]

    run_a: Optional[TrainResult] = None
    run_b: Optional[TrainResult] = None


def _mean_tokens(metrics: List[StepMetrics]) -> Optional[float]:
    # every step rolls out the same number of responses
    if not metrics:
        return None
    return sum(m.batch_mean_tokens for m in metrics) / len(metrics)


def compare_results(
    a: TrainResult,
    b: TrainResult,
    mode_a: str,
    mode_b: str,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
) -> ComparisonReport:
    if not (0.0 < tail_fraction <= 1.0):
        raise ValueError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")

    reward_a = tail_mean([m.batch_mean_reward for m in a.metrics], tail_fraction)
    reward_b = tail_mean([m.batch_mean_reward for m in b.metrics], tail_fraction)
    tokens_a = _mean_tokens(a.metrics)
    tokens_b = _mean_tokens(b.metrics)
    cum_a = a.metrics[-1].cumulative_rollout_tokens if a.metrics else 0
    cum_b = b.metrics[-1].cumulative_rollout_tokens if b.metrics else 0

    probs_a = a.policy.probs_table()
    probs_b = b.policy.probs_table()

    return ComparisonReport(
        mode_a=mode_a,
        mode_b=mode_b,
        steps=len(a.metrics),
        final_reward_a=reward_a,
        final_reward_b=reward_b,
        reward_difference=(reward_a - reward_b) if reward_a is not None and reward_b is not None else None,
        mean_tokens_a=tokens_a,
        mean_tokens_b=tokens_b,
        response_length_ratio=ratio(tokens_a, tokens_b),
        cumulative_tokens_a=cum_a,
        cumulative_tokens_b=cum_b,
        cumulative_token_ratio=ratio(cum_a, cum_b),
        final_long_cot_a={d: float(probs_a[d, -1]) for d in DIFFICULTIES},
        final_long_cot_b={d: float(probs_b[d, -1]) for d in DIFFICULTIES},
        run_a=a,
        run_b=b,
    )


def compare_runs(
    config_a: TrainConfig,
    config_b: TrainConfig,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
) -> ComparisonReport:
    if config_a.env != config_b.env:
        raise ValueError("compared runs must share the environment config")
    if config_a.seed != config_b.seed:
        raise ValueError(f"compared runs must share the seed ({config_a.seed} != {config_b.seed})")

    logger.info("compare: run A (%s)", config_a.mode.value)
    a = train(config_a)
    logger.info("compare: run B (%s)", config_b.mode.value)
    b = train(config_b)
    return compare_results(a, b, config_a.mode.value, config_b.mode.value, tail_fraction)
