from dotenv import load_dotenv
load_dotenv()

import argparse
import logging
import os
import sys
from typing import List, Optional

from arm_lab import rng as rngs
from arm_lab.adapters.corpus import load_replay, summarize_replay
from arm_lab.analysis.ablation import ablate_decay
from arm_lab.analysis.compare_runs import compare_runs
from arm_lab.config import ExperimentConfig, load_config
from arm_lab.core.checkpoint import load_checkpoint, save_checkpoint
from arm_lab.core.policy import uniform_policy
from arm_lab.core.shaping import TrainingMode
from arm_lab.dashboard.charts import write_metric_charts
from arm_lab.dashboard.csv_tools import (
    write_ablation_csvs,
    write_comparison_csv,
    write_metrics_csv,
    write_modes_csv,
    write_training_csv,
)
from arm_lab.dashboard.metrics import fmt_delta, fmt_float, fmt_int, fmt_pct, fmt_ratio
from arm_lab.errors import ArmLabError, CheckpointError, ConfigError, CorpusError
from arm_lab.inference.modes import all_modes, mode_report
from arm_lab.training.trainer import TrainResult, train

logger = logging.getLogger("arm_lab")

ENV_OUT = "ARM_LAB_OUT"
ENV_LOG_LEVEL = "ARM_LAB_LOG_LEVEL"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2


# -----------------------------
# Helpers
# -----------------------------
def setup_logging() -> None:
    level = os.getenv(ENV_LOG_LEVEL, "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def output_dir(args: argparse.Namespace, cfg: ExperimentConfig) -> str:
    # env var > --out > config
    return os.getenv(ENV_OUT) or args.out or cfg.output_dir


def charts_enabled(args: argparse.Namespace, cfg: ExperimentConfig) -> bool:
    return cfg.emit_charts and not args.no_charts


def write_run(result: TrainResult, out: str, prefix: str, charts: bool) -> None:
    metrics_path = os.path.join(out, f"{prefix}metrics.csv")
    write_metrics_csv(metrics_path, result.metrics)
    write_training_csv(os.path.join(out, f"{prefix}training.csv"), result.metrics)

    ckpt_dir = os.path.join(out, f"{prefix}checkpoints")
    for ckpt in result.checkpoints:
        save_checkpoint(ckpt, os.path.join(ckpt_dir, f"step_{ckpt.step:06d}.json"))
    save_checkpoint(result.final_checkpoint, os.path.join(out, f"{prefix}final.json"))

    if charts:
        written = write_metric_charts(metrics_path, os.path.join(out, f"{prefix}charts"))
        if not written:
            print("[WARN] Pas de graphique: aucune étape d'entraînement.")

    print(f"[OK] {metrics_path} | étapes={len(result.metrics)} | checkpoints={len(result.checkpoints)}")


# -----------------------------
# Commands
# -----------------------------
def cmd_train(args: argparse.Namespace) -> int:
    cfg = load_experiment(args)
    out = output_dir(args, cfg)
    result = train(cfg.train)
    write_run(result, out, "", charts_enabled(args, cfg))

    if result.metrics:
        last = result.metrics[-1]
        print(
            f"[OK] {cfg.train.mode.value} | reward={fmt_float(last.batch_mean_reward)} | "
            f"tokens/réponse={fmt_float(last.batch_mean_tokens, 1)} | "
            f"tokens cumulés={fmt_int(last.cumulative_rollout_tokens)}"
        )
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = load_experiment(args)
    out = output_dir(args, cfg)
    config_b = cfg.train.with_(mode=cfg.compare.mode_b)
    report = compare_runs(cfg.train, config_b)

    charts = charts_enabled(args, cfg)
    write_run(report.run_a, out, "a_", charts)
    write_run(report.run_b, out, "b_", charts)
    path = os.path.join(out, "comparison.csv")
    write_comparison_csv(path, report)

    print(f"[OK] {path} | {report.mode_a} vs {report.mode_b}")
    print(
        f"- reward final: {fmt_float(report.final_reward_a)} vs {fmt_float(report.final_reward_b)} "
        f"(écart {fmt_delta(report.reward_difference)})"
    )
    print(f"- longueur de réponse: {fmt_ratio(report.response_length_ratio)}")
    print(f"- tokens de rollout cumulés: {fmt_ratio(report.cumulative_token_ratio)}")
    return EXIT_OK


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = load_experiment(args)
    out = output_dir(args, cfg)
    base = cfg.train
    if base.mode is not TrainingMode.ADA_GRPO:
        print(f"[WARN] mode={base.mode.value} ignoré: l'ablation porte sur ada_grpo.")
        base = base.with_(mode=TrainingMode.ADA_GRPO)

    report = ablate_decay(
        base,
        eval_interval=cfg.ablate.eval_interval,
        eval_tasks=cfg.eval.n_tasks,
        eval_seed=cfg.eval.eval_seed,
    )
    points = os.path.join(out, "ablation.csv")
    write_ablation_csvs(points, os.path.join(out, "ablation_summary.csv"), report)

    print(f"[OK] {points}")
    for arm in report.arms:
        label = "avec decay" if arm.decay_enabled else "sans decay"
        print(
            f"- {label}: points={len(arm.eval_rewards)} | final={fmt_float(arm.final_reward)}"
            f" | variance 2e moitié={arm.second_half_variance:.6g}"
        )
        if arm.degenerate:
            print(f"[WARN] {label}: moins de deux points d'évaluation en seconde moitié.")
    return EXIT_OK


def cmd_modes(args: argparse.Namespace) -> int:
    cfg = load_experiment(args)
    out = output_dir(args, cfg)
    if args.checkpoint:
        policy = load_checkpoint(args.checkpoint).policy
    else:
        print("[WARN] Pas de --checkpoint: politique uniforme.")
        policy = uniform_policy()

    env = cfg.train.env
    reports = []
    for mode in all_modes():
        # same seed for every mode: every mode sees the same tasks
        rng = rngs.stream(cfg.eval.eval_seed, rngs.INFERENCE)
        reports.append(mode_report(mode, cfg.eval.n_tasks, env, policy, rng))
    path = os.path.join(out, "modes.csv")
    write_modes_csv(path, reports)

    print(f"[OK] {path} | tâches par difficulté={cfg.eval.n_tasks}")
    for report in reports:
        cells = " | ".join(
            f"{d.label}: acc={fmt_pct(s.accuracy)} tok={fmt_int(s.mean_tokens)} long={fmt_pct(s.long_cot_usage)}"
            for d, s in sorted(report.items())
        )
        print(f"- {next(iter(report.values())).mode}: {cells}")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    records = load_replay(args.corpus, args.truth)
    summary = summarize_replay(records)
    if summary.n == 0:
        print("[WARN] Corpus vide.")
        return EXIT_OK

    print(f"[OK] {summary.n} transcriptions | accuracy={fmt_float(summary.accuracy)} | tokens={fmt_float(summary.mean_tokens, 1)}")
    for fmt, s in summary.by_format.items():
        print(f"- {fmt.tag}: n={s.n} | accuracy={fmt_float(s.accuracy)} | tokens={fmt_float(s.mean_tokens, 1)}")
    ref = summary.reflection
    correct = fmt_float(ref.correct_ratio_in_reflection_texts) if ref.correct_ratio_defined else "— (aucune)"
    print(f"- reflection_ratio={fmt_float(ref.reflection_ratio)} | correct_ratio_in_reflection_texts={correct}")
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "compare": cmd_compare,
    "ablate": cmd_ablate,
    "modes": cmd_modes,
    "replay": cmd_replay,
}


# -----------------------------
# CLI
# -----------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="python -m arm_lab.main")
    sub = p.add_subparsers(dest="cmd", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Fichier YAML d'expérience")
    common.add_argument("--out", default=None, help=f"Dossier de sortie (surchargé par {ENV_OUT})")
    common.add_argument("--seed", type=int, default=None, help="Remplace train.seed")
    common.add_argument("--no-charts", action="store_true", help="Pas de graphiques SVG")

    sub.add_parser("train", parents=[common], help="Entraîne une politique, écrit metrics.csv + checkpoints")
    sub.add_parser("compare", parents=[common], help="Deux entraînements (mode vs compare.mode_b)")
    sub.add_parser("ablate", parents=[common], help="Ada-GRPO avec / sans decay")

    p_modes = sub.add_parser("modes", parents=[common], help="Modes d'inférence, écrit modes.csv")
    p_modes.add_argument("--checkpoint", default=None, help="Checkpoint JSON de la politique")

    p_replay = sub.add_parser("replay", help="Note un corpus de transcriptions")
    p_replay.add_argument("corpus", help="Transcriptions séparées par des lignes '---'")
    p_replay.add_argument("truth", help="Une réponse attendue par ligne")

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging()

    try:
        return COMMANDS[args.cmd](args)
    except (ConfigError, CheckpointError, CorpusError) as e:
        print(f"[ERR] {e}", file=sys.stderr)
        return EXIT_INPUT
    except ArmLabError as e:
        print(f"[ERR] {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as e:
        logger.exception("unexpected failure in %s", args.cmd)
        print(f"[ERR] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
