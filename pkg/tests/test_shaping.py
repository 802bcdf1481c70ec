import numpy as np
import pytest

from arm_lab.core.shaping import (
    ShapingSchedule,
    TrainingMode,
    decay_factor,
    diversity_scale,
    format_counts,
    group_advantages,
    shape_rewards,
)
from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.rollout import Rollout, RolloutGroup
from arm_lab.domain.task import Difficulty
from arm_lab.errors import DomainError, LengthMismatchError

D, S, C, L = (ReasoningFormat.DIRECT_ANSWER, ReasoningFormat.SHORT_COT, ReasoningFormat.CODE,
              ReasoningFormat.LONG_COT)


def group(formats, rewards=None) -> RolloutGroup:
    rewards = rewards or [1] * len(formats)
    return RolloutGroup("t", Difficulty.MEDIUM, [Rollout(f, reward=r) for f, r in zip(formats, rewards)])


MIXED = [L, L, L, L, S, S, C, D]
MIXED_REWARDS = [1, 1, 1, 0, 1, 0, 1, 1]


def test_format_counts():
    assert format_counts(group(MIXED)) == {L: 4, S: 2, C: 1, D: 1}
    assert format_counts(group([L] * 8)) == {L: 8}
    assert format_counts(group([D, S])) == {D: 1, S: 1}


def test_decay_factor_examples():
    assert decay_factor(2, 8, ShapingSchedule(0, 100)) == 1.0
    assert decay_factor(2, 8, ShapingSchedule(100, 100)) == 0.25
    assert decay_factor(2, 8, ShapingSchedule(50, 100)) == pytest.approx(0.625, abs=1e-12)


def test_decay_factor_matches_written_form():
    for t in range(0, 101, 7):
        sched = ShapingSchedule(t, 100)
        share = 3 / 8
        expected = share + 0.5 * (1 - share) * (1 + np.cos(np.pi * t / 100))
        assert decay_factor(3, 8, sched) == pytest.approx(expected, abs=1e-12)


def test_diversity_scale_examples():
    assert diversity_scale(2, 8, ShapingSchedule(0, 10)) == 4.0
    assert diversity_scale(2, 8, ShapingSchedule(10, 10)) == 1.0
    for t in range(11):
        assert diversity_scale(8, 8, ShapingSchedule(t, 10)) == 1.0


def test_diversity_scale_is_scale_times_decay():
    for t in (0, 3, 5, 9):
        sched = ShapingSchedule(t, 9)
        for F in range(1, 9):
            assert diversity_scale(F, 8, sched) == pytest.approx(8 / F * decay_factor(F, 8, sched), rel=1e-12)


def test_scaling_identities_grid():
    for T in (1, 10, 1000):
        start, end = ShapingSchedule(0, T), ShapingSchedule(T, T)
        for G in range(1, 65):
            F = np.arange(1, G + 1)
            assert np.allclose(diversity_scale(F, G, start), G / F, rtol=0, atol=1e-12)
            assert np.allclose(diversity_scale(F, G, end), 1.0, rtol=0, atol=1e-12)


def test_decay_is_monotone_and_alpha_strictly_decreasing():
    for T in (10, 1000):
        for G, F in ((8, 1), (8, 7), (64, 63), (2, 1)):
            decay = np.array([decay_factor(F, G, ShapingSchedule(t, T)) for t in range(T + 1)])
            alpha = np.array([diversity_scale(F, G, ShapingSchedule(t, T)) for t in range(T + 1)])
            assert np.all(np.diff(decay) <= 0)
            assert np.all(np.diff(alpha) < 0)


def test_decay_disabled_keeps_full_scale():
    for t in (0, 5, 10):
        assert diversity_scale(2, 8, ShapingSchedule(t, 10), decay_enabled=False) == 4.0


@pytest.mark.parametrize("F,G", [(0, 8), (9, 8), (-1, 4)])
def test_counts_out_of_domain(F, G):
    with pytest.raises(DomainError):
        decay_factor(F, G, ShapingSchedule(0, 10))
    with pytest.raises(DomainError):
        diversity_scale(F, G, ShapingSchedule(0, 10))


def test_schedule_domain():
    with pytest.raises(DomainError):
        ShapingSchedule(11, 10)
    with pytest.raises(DomainError):
        ShapingSchedule(-1, 10)
    with pytest.raises(DomainError):
        ShapingSchedule(0, 0)


def test_shape_rewards_ada_at_start():
    shaped = shape_rewards(group(MIXED, MIXED_REWARDS), ShapingSchedule(0, 100), TrainingMode.ADA_GRPO)
    assert shaped.tolist() == [2, 2, 2, 0, 4, 0, 8, 8]


def test_shape_rewards_grpo_identity():
    shaped = shape_rewards(group(MIXED, MIXED_REWARDS), ShapingSchedule(0, 100), "grpo")
    assert shaped.tolist() == MIXED_REWARDS


def test_shape_rewards_zero_stays_zero():
    g = group(MIXED, [0] * 8)
    for mode in TrainingMode:
        assert shape_rewards(g, ShapingSchedule(3, 10), mode).tolist() == [0] * 8


def test_shape_rewards_equal_raw_at_last_step():
    g = group(MIXED, MIXED_REWARDS)
    shaped = shape_rewards(g, ShapingSchedule(40, 40), TrainingMode.ADA_GRPO)
    assert shaped.tolist() == MIXED_REWARDS


def test_mode_parse():
    assert TrainingMode.parse("Ada-GRPO") is TrainingMode.ADA_GRPO
    with pytest.raises(ValueError):
        TrainingMode.parse("ppo")


def test_advantage_examples():
    assert group_advantages([2, 0]).tolist() == [1.0, -1.0]
    assert group_advantages([1, 1, 1, 1]).tolist() == [0.0, 0.0, 0.0, 0.0]
    adv = group_advantages([2, 2, 2, 0, 4, 0, 8, 8])
    assert abs(adv.mean()) < 1e-12
    assert adv.std() == pytest.approx(1.0, abs=1e-9)


def test_advantage_normalization_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        G = int(rng.integers(2, 17))
        r = rng.integers(0, 2, size=G) * rng.choice([1.0, 1.5, 2.0, 4.0, 8.0], size=G)
        adv = group_advantages(r)
        if np.all(r == r[0]):
            assert np.all(adv == 0.0)
        else:
            assert abs(adv.mean()) < 1e-12
            assert abs(adv.std() - 1.0) < 1e-9


def test_advantage_needs_two_values():
    with pytest.raises(LengthMismatchError):
        group_advantages([1.0])
