"""CSV outputs. Floats use a fixed number of decimals so reruns are byte-identical."""

import csv
import os
from typing import Dict, Iterable, List, Optional, Sequence

from arm_lab.analysis.ablation import AblationReport
from arm_lab.analysis.compare_runs import ComparisonReport
from arm_lab.domain.reasoning_format import FORMATS
from arm_lab.domain.task import DIFFICULTIES, Difficulty
from arm_lab.inference.modes import ModeStats
from arm_lab.training.trainer import StepMetrics

FLOAT_DIGITS = 6

METRICS_HEADER = ["step", "difficulty", "mean_reward"] + [f"frac_{f.short_name}" for f in FORMATS] + [
    "mean_tokens",
    "cum_tokens",
]
TRAINING_HEADER = [
    "step",
    "batch_mean_reward",
    "batch_mean_tokens",
    "step_tokens",
    "cum_tokens",
    "mean_loss",
    "kl_to_ref",
]
COMPARISON_HEADER = [
    "mode_a",
    "mode_b",
    "steps",
    "final_reward_a",
    "final_reward_b",
    "reward_difference",
    "mean_tokens_a",
    "mean_tokens_b",
    "response_length_ratio",
    "cum_tokens_a",
    "cum_tokens_b",
    "cum_token_ratio",
]
MODES_HEADER = ["mode", "difficulty", "accuracy", "mean_tokens", "long_cot_usage"]
ABLATION_HEADER = ["decay", "step", "eval_reward"]
ABLATION_SUMMARY_HEADER = ["decay", "n_points", "final_reward", "second_half_variance", "degenerate"]


# -----------------------------
# Helpers
# -----------------------------
def mkdir_for_file(path: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)


def cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.{FLOAT_DIGITS}f}"
    return str(x)


def to_float(x: Optional[str]) -> Optional[float]:
    if x is None:
        return None
    s = str(x).strip()
    if s == "":
        return None
    try:
        return float(s)
    except ValueError:
        return None


def write_rows(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    mkdir_for_file(path)
    n = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(x) for x in row])
            n += 1
    return n


def read_rows(path: str) -> List[Dict[str, str]]:
    with open(path, "r", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


# -----------------------------
# Writers
# -----------------------------
def write_metrics_csv(path: str, metrics: Sequence[StepMetrics]) -> int:
    """One row per (step, difficulty)."""

    def rows():
        for m in metrics:
            for d in DIFFICULTIES:
                yield [
                    m.step,
                    d.label,
                    m.mean_reward[d],
                    *m.format_distribution[d],
                    m.mean_tokens[d],
                    m.cumulative_rollout_tokens,
                ]

    return write_rows(path, METRICS_HEADER, rows())


def write_training_csv(path: str, metrics: Sequence[StepMetrics]) -> int:
    return write_rows(path, TRAINING_HEADER, (
        [m.step, m.batch_mean_reward, m.batch_mean_tokens, m.step_tokens,
         m.cumulative_rollout_tokens, m.mean_loss, m.kl_to_ref]
        for m in metrics
    ))


def write_comparison_csv(path: str, report: ComparisonReport) -> int:
    return write_rows(path, COMPARISON_HEADER, [[
        report.mode_a,
        report.mode_b,
        report.steps,
        report.final_reward_a,
        report.final_reward_b,
        report.reward_difference,
        report.mean_tokens_a,
        report.mean_tokens_b,
        report.response_length_ratio,
        report.cumulative_tokens_a,
        report.cumulative_tokens_b,
        report.cumulative_token_ratio,
    ]])


def write_modes_csv(path: str, reports: Sequence[Dict[Difficulty, ModeStats]]) -> int:
    return write_rows(path, MODES_HEADER, (
        [s.mode, d.label, s.accuracy, s.mean_tokens, s.long_cot_usage]
        for report in reports
        for d, s in sorted(report.items())
    ))


def write_ablation_csvs(points_path: str, summary_path: str, report: AblationReport) -> None:
    write_rows(points_path, ABLATION_HEADER, (
        [arm.decay_enabled, step, reward]
        for arm in report.arms
        for step, reward in zip(arm.steps, arm.eval_rewards)
    ))
    write_rows(summary_path, ABLATION_SUMMARY_HEADER, (
        [arm.decay_enabled, len(arm.eval_rewards), arm.final_reward, arm.second_half_variance, arm.degenerate]
        for arm in report.arms
    ))


# -----------------------------
# Readers
# -----------------------------
def read_metrics_csv(path: str) -> List[Dict[str, str]]:
    rows = read_rows(path)
    if rows and list(rows[0].keys()) != METRICS_HEADER:
        raise ValueError(f"{path}: unexpected header {list(rows[0].keys())}")
    return rows
