import os
from pathlib import Path
from typing import Sequence

import pytest

from arm_lab.analysis.ablation import AblationReport, ablate_decay
from arm_lab.analysis.compare_runs import ComparisonReport, compare_runs
from arm_lab.env.synthetic import EnvConfig
from arm_lab.training.trainer import TrainConfig

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(autouse=True)
def _no_output_override(monkeypatch):
    monkeypatch.delenv("ARM_LAB_OUT", raising=False)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def configs_dir() -> Path:
    return ROOT / "configs"


def row_env(
    easy: Sequence[float],
    tokens: Sequence[float] = (10.0, 30.0, 150.0, 300.0),
    jitter: float = 0.0,
    answer_space: int = 5,
) -> EnvConfig:
    """Easy-only environment with one accuracy row; other rows are placeholders."""
    return EnvConfig(
        accuracy=(tuple(easy), (0.5,) * 4, (0.5,) * 4),
        token_mean=(tuple(tokens),) * 3,
        token_jitter=jitter,
        difficulty_mix=(1.0, 0.0, 0.0),
        answer_space=answer_space,
    )


@pytest.fixture
def small_train() -> TrainConfig:
    return TrainConfig(
        total_steps=6,
        tasks_per_step=8,
        minibatches_per_step=2,
        learning_rate=0.3,
        checkpoint_interval=2,
        seed=11,
    )


# Full-length runs at the shipped defaults, shared by the slow tests.
@pytest.fixture(scope="session")
def default_comparison() -> ComparisonReport:
    return compare_runs(TrainConfig(), TrainConfig(mode="grpo"))


@pytest.fixture(scope="session")
def default_ablation() -> AblationReport:
    return ablate_decay(TrainConfig())


def write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return os.fspath(path)
