"""Experiment configuration (YAML).

Sections: ``train`` (with nested ``env``), ``eval``, ``compare``, ``ablate``,
plus top-level ``output_dir`` and ``emit_charts``. Every key is optional and
falls back to the shipped default; unknown keys are rejected. Errors name the
dotted field path and, when known, the line in the file.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional

import yaml

from arm_lab.analysis.ablation import DEFAULT_EVAL_INTERVAL, DEFAULT_EVAL_SEED, DEFAULT_EVAL_TASKS
from arm_lab.core.shaping import TrainingMode
from arm_lab.env.synthetic import EnvConfig, default_config
from arm_lab.errors import ConfigError
from arm_lab.training.trainer import TrainConfig

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = "out"


@dataclass(frozen=True)
class EvalConfig:
    n_tasks: int = DEFAULT_EVAL_TASKS
    eval_seed: int = DEFAULT_EVAL_SEED


@dataclass(frozen=True)
class CompareConfig:
    mode_b: TrainingMode = TrainingMode.GRPO


@dataclass(frozen=True)
class AblateConfig:
    eval_interval: int = DEFAULT_EVAL_INTERVAL


@dataclass(frozen=True)
class ExperimentConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    compare: CompareConfig = field(default_factory=CompareConfig)
    ablate: AblateConfig = field(default_factory=AblateConfig)
    output_dir: str = DEFAULT_OUTPUT_DIR
    emit_charts: bool = True

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, train=self.train.with_(seed=int(seed)))


# -----------------------
# Value checkers
# -----------------------
def _int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError("expected an integer")
    return v


def _float(v: Any) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise TypeError("expected a finite number")
    return float(v)


def _bool(v: Any) -> bool:
    if not isinstance(v, bool):
        raise TypeError("expected true or false")
    return v


def _str(v: Any) -> str:
    if not isinstance(v, str) or not v.strip():
        raise TypeError("expected a non-empty string")
    return v


def _vector(v: Any) -> tuple:
    if not isinstance(v, list):
        raise TypeError("expected a list of numbers")
    return tuple(_float(x) for x in v)


def _int_vector_or_null(v: Any) -> Optional[tuple]:
    if v is None:
        return None
    if not isinstance(v, list):
        raise TypeError("expected a list of integers or null")
    return tuple(_int(x) for x in v)


def _table(v: Any) -> tuple:
    if not isinstance(v, list):
        raise TypeError("expected a list of rows")
    return tuple(_vector(row) for row in v)


def _mode(v: Any) -> TrainingMode:
    return TrainingMode.parse(_str(v))


Checker = Callable[[Any], Any]

ENV_FIELDS: Dict[str, Checker] = {
    "accuracy": _table,
    "token_mean": _table,
    "token_jitter": _float,
    "difficulty_mix": _vector,
    "answer_space": _int,
    "answer_space_by_difficulty": _int_vector_or_null,
    "seed": _int,
}
TRAIN_FIELDS: Dict[str, Checker] = {
    "mode": _mode,
    "group_size": _int,
    "total_steps": _int,
    "tasks_per_step": _int,
    "minibatches_per_step": _int,
    "learning_rate": _float,
    "clip_epsilon": _float,
    "kl_coefficient": _float,
    "decay_enabled": _bool,
    "seed": _int,
    "checkpoint_interval": _int,
    "workers": _int,
    "log_every": _int,
}
EVAL_FIELDS: Dict[str, Checker] = {"n_tasks": _int, "eval_seed": _int}
COMPARE_FIELDS: Dict[str, Checker] = {"mode_b": _mode}
ABLATE_FIELDS: Dict[str, Checker] = {"eval_interval": _int}
TOP_FIELDS = {"train", "eval", "compare", "ablate", "output_dir", "emit_charts"}


# -----------------------
# Line lookup
# -----------------------
def _key_lines(node: Optional[yaml.Node], prefix: str = "") -> Dict[str, int]:
    """Dotted key path -> 1-based line of the key in the source."""
    lines: Dict[str, int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}{key_node.value}"
            lines[path] = key_node.start_mark.line + 1
            lines.update(_key_lines(value_node, path + "."))
    return lines


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


class _Reader:
    def __init__(self, lines: Dict[str, int]):
        self.lines = lines

    def error(self, message: str, path: str) -> ConfigError:
        # fall back to the closest enclosing key that has a line
        key = path
        while key and key not in self.lines:
            key = key.rpartition(".")[0]
        return ConfigError(message, field=path, line=self.lines.get(key))

    def section(self, doc: Any, path: str, allowed) -> Dict[str, Any]:
        if doc is None:
            return {}
        if not isinstance(doc, dict):
            raise self.error("expected a mapping", path)
        for key in doc:
            if key not in allowed:
                raise self.error("unknown key", _join(path, str(key)))
        return doc

    def fields(self, doc: Dict[str, Any], path: str, checkers: Dict[str, Checker]) -> Dict[str, Any]:
        out = {}
        for key, check in checkers.items():
            if key not in doc:
                continue
            try:
                out[key] = check(doc[key])
            except (TypeError, ValueError) as e:
                raise self.error(str(e), _join(path, key)) from None
        return out

    def build(self, cls, kwargs: Dict[str, Any], path: str):
        try:
            return cls(**kwargs)
        except ConfigError as e:
            raise self.error(e.message, _join(path, e.field) if e.field else path) from None


def parse_experiment(doc: Any, lines: Optional[Dict[str, int]] = None) -> ExperimentConfig:
    r = _Reader(lines or {})
    top = r.section(doc, "", TOP_FIELDS)

    train_doc = r.section(top.get("train"), "train", set(TRAIN_FIELDS) | {"env"})
    env_doc = r.section(train_doc.get("env"), "train.env", set(ENV_FIELDS))
    env_kwargs = r.fields(env_doc, "train.env", ENV_FIELDS)
    env = r.build(EnvConfig, {**default_config().as_dict(), **env_kwargs}, "train.env")

    train_kwargs = r.fields(train_doc, "train", TRAIN_FIELDS)
    train = r.build(TrainConfig, {**train_kwargs, "env": env}, "train")

    eval_doc = r.section(top.get("eval"), "eval", set(EVAL_FIELDS))
    eval_cfg = EvalConfig(**r.fields(eval_doc, "eval", EVAL_FIELDS))
    if eval_cfg.n_tasks < 1:
        raise r.error("n_tasks must be >= 1", "eval.n_tasks")

    compare_doc = r.section(top.get("compare"), "compare", set(COMPARE_FIELDS))
    compare_cfg = CompareConfig(**r.fields(compare_doc, "compare", COMPARE_FIELDS))

    ablate_doc = r.section(top.get("ablate"), "ablate", set(ABLATE_FIELDS))
    ablate_cfg = AblateConfig(**r.fields(ablate_doc, "ablate", ABLATE_FIELDS))
    if ablate_cfg.eval_interval < 1:
        raise r.error("eval_interval must be >= 1", "ablate.eval_interval")

    rest = r.fields(top, "", {"output_dir": _str, "emit_charts": _bool})
    return ExperimentConfig(
        train=train,
        eval=eval_cfg,
        compare=compare_cfg,
        ablate=ablate_cfg,
        output_dir=rest.get("output_dir", DEFAULT_OUTPUT_DIR),
        emit_charts=rest.get("emit_charts", True),
    )


def load_config(path: Optional[str]) -> ExperimentConfig:
    """Read and validate an experiment file; None gives the shipped defaults."""
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}") from None

    try:
        doc = yaml.safe_load(text)
        lines = _key_lines(yaml.compose(text, Loader=yaml.SafeLoader))
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        raise ConfigError(f"YAML syntax error: {e.problem}", line=mark.line + 1 if mark else None) from None
    except yaml.YAMLError as e:
        raise ConfigError(f"YAML error: {e}") from None

    cfg = parse_experiment(doc, lines)
    logger.debug("loaded config %s: mode=%s T=%d", path, cfg.train.mode.value, cfg.train.total_steps)
    return cfg
