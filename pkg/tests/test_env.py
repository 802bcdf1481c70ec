import numpy as np
import pytest

from arm_lab import rng as rngs
from arm_lab.domain.reasoning_format import FORMATS, ReasoningFormat
from arm_lab.domain.task import Difficulty
from arm_lab.env.synthetic import EnvConfig, default_config, rollout_once, sample_task
from arm_lab.errors import ConfigError
from arm_lab.protocol.grading import MULTIPLE_CHOICE, NUMERIC

from conftest import row_env


def test_default_config_values():
    cfg = default_config()
    assert cfg.accuracy[Difficulty.MEDIUM][ReasoningFormat.DIRECT_ANSWER] == 0.35
    assert cfg.accuracy[Difficulty.HARD][ReasoningFormat.DIRECT_ANSWER] == 0.0
    assert cfg.token_mean[Difficulty.HARD][ReasoningFormat.LONG_COT] == 4130
    assert cfg.token_mean[Difficulty.EASY][ReasoningFormat.DIRECT_ANSWER] == 10
    assert cfg.difficulty_mix == (0.4, 0.5, 0.1)
    assert cfg.answer_space == 5
    assert cfg.token_jitter == 0.1
    assert cfg.answer_space_by_difficulty == (5, 100, 1000)


def test_long_cot_is_most_accurate_everywhere_by_default():
    acc = default_config().accuracy_table()
    assert np.all(acc.argmax(axis=1) == ReasoningFormat.LONG_COT)


def test_answer_kinds_follow_alphabet_size():
    cfg = default_config()
    rng = np.random.default_rng(0)
    easy = sample_task(cfg, rng, difficulty=Difficulty.EASY)
    hard = sample_task(cfg, rng, difficulty=Difficulty.HARD)
    assert easy.grade_spec.answer_kind == MULTIPLE_CHOICE and easy.ground_truth in "ABCDE"
    assert hard.grade_spec.answer_kind == NUMERIC and 0 <= int(hard.ground_truth) < 1000


@pytest.mark.parametrize("mix,expected", [
    ((1.0, 0.0, 0.0), Difficulty.EASY),
    ((0.0, 0.0, 1.0), Difficulty.HARD),
])
def test_degenerate_mix(mix, expected):
    cfg = EnvConfig(difficulty_mix=mix)
    rng = np.random.default_rng(1)
    assert all(sample_task(cfg, rng).difficulty is expected for _ in range(500))


def test_mix_frequencies():
    cfg = default_config()
    rng = np.random.default_rng(2)
    n = 20_000
    counts = np.bincount([int(sample_task(cfg, rng).difficulty) for _ in range(n)], minlength=3)
    p = np.array(cfg.difficulty_mix)
    assert np.all(np.abs(counts / n - p) < 3 * np.sqrt(p * (1 - p) / n))


def test_sampling_is_deterministic():
    cfg = default_config()
    a = [sample_task(cfg, rngs.stream(5, rngs.TASKS)) for _ in range(3)]
    b = [sample_task(cfg, rngs.stream(5, rngs.TASKS)) for _ in range(3)]
    assert a == b
    r1 = rngs.stream(5, rngs.TASKS)
    t1, t2 = sample_task(cfg, r1), sample_task(cfg, r1)
    assert t1.task_id != t2.task_id


def test_certain_outcomes():
    cfg = row_env((1.0, 0.0, 1.0, 0.0))
    rng = np.random.default_rng(3)
    for _ in range(200):
        task = sample_task(cfg, rng)
        assert rollout_once(task, ReasoningFormat.DIRECT_ANSWER, cfg, rng).reward == 1
        wrong = rollout_once(task, ReasoningFormat.SHORT_COT, cfg, rng)
        assert wrong.reward == 0
        assert wrong.answer != task.ground_truth and wrong.answer in "ABCDE"


def test_zero_jitter_tokens_are_rounded_means():
    cfg = row_env((0.5,) * 4, tokens=(10.4, 33.6, 144.0, 276.5), jitter=0.0)
    rng = np.random.default_rng(4)
    task = sample_task(cfg, rng)
    for fmt in FORMATS:
        assert rollout_once(task, fmt, cfg, rng).token_count == round(cfg.token_mean[0][fmt])


def test_token_jitter_bounds():
    cfg = default_config()
    rng = np.random.default_rng(5)
    task = sample_task(cfg, rng, difficulty=Difficulty.HARD)
    counts = [rollout_once(task, ReasoningFormat.LONG_COT, cfg, rng).token_count for _ in range(2000)]
    assert min(counts) >= round(4130 * 0.9) and max(counts) <= round(4130 * 1.1)


def test_code_answers_are_printed_floats():
    cfg = EnvConfig(
        accuracy=((1.0,) * 4,) * 3,
        answer_space_by_difficulty=(5, 100, 1000),
    )
    rng = np.random.default_rng(6)
    task = sample_task(cfg, rng, difficulty=Difficulty.MEDIUM)
    r = rollout_once(task, ReasoningFormat.CODE, cfg, rng)
    assert r.answer == f"{task.ground_truth}.0"
    assert r.reward == 1


def test_numeric_wrong_answers_stay_in_alphabet():
    cfg = EnvConfig(accuracy=((0.0,) * 4,) * 3, answer_space_by_difficulty=(5, 7, 9))
    rng = np.random.default_rng(7)
    seen = set()
    for _ in range(500):
        task = sample_task(cfg, rng, difficulty=Difficulty.MEDIUM)
        r = rollout_once(task, ReasoningFormat.SHORT_COT, cfg, rng)
        assert r.answer != task.ground_truth and 0 <= int(r.answer) < 7
        seen.add(r.answer)
    assert len(seen) == 7


def test_marginal_correctness_rate():
    cfg = default_config()
    rng = np.random.default_rng(8)
    task = sample_task(cfg, rng, difficulty=Difficulty.MEDIUM)
    n = 100_000
    hits = sum(rollout_once(task, ReasoningFormat.SHORT_COT, cfg, rng).reward for _ in range(n))
    p = 0.73
    assert abs(hits / n - p) < 3 * np.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("kwargs,field", [
    ({"difficulty_mix": (0.5, 0.5, 0.5)}, "difficulty_mix"),
    ({"accuracy": ((1.5, 0, 0, 0), (0,) * 4, (0,) * 4)}, "accuracy"),
    ({"accuracy": ((0.5,) * 3,) * 3}, "accuracy"),
    ({"token_mean": ((0.0,) * 4,) * 3}, "token_mean"),
    ({"token_jitter": -0.1}, "token_jitter"),
    ({"answer_space": 1}, "answer_space"),
    ({"answer_space_by_difficulty": (5, 1, 5)}, "answer_space_by_difficulty"),
])
def test_config_validation(kwargs, field):
    with pytest.raises(ConfigError) as e:
        EnvConfig(**kwargs)
    assert e.value.field == field
