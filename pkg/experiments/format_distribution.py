"""Format distribution by difficulty at every checkpoint, Ada-GRPO next to GRPO.

    PYTHONPATH=. python experiments/format_distribution.py [config.yaml]
"""

import sys
from typing import List

from arm_lab.config import load_config
from arm_lab.core.checkpoint import Checkpoint
from arm_lab.core.shaping import TrainingMode
from arm_lab.domain.reasoning_format import FORMATS
from arm_lab.domain.task import DIFFICULTIES
from arm_lab.training.trainer import train


def print_table(title: str, checkpoints: List[Checkpoint]) -> None:
    print(f"\n{title}")
    header = "step  diff    " + " ".join(f"{f.short_name:>7}" for f in FORMATS)
    print(header)
    print("-" * len(header))
    for ckpt in checkpoints:
        probs = ckpt.policy.probs_table()
        for d in DIFFICULTIES:
            cells = " ".join(f"{p:7.3f}" for p in probs[d])
            print(f"{ckpt.step:4d}  {d.label:<6}  {cells}")


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else None
    base = load_config(path).train

    for mode in (TrainingMode.ADA_GRPO, TrainingMode.GRPO):
        result = train(base.with_(mode=mode))
        print_table(f"{mode.value} (T={base.total_steps}, G={base.group_size})", result.checkpoints)


if __name__ == "__main__":
    main()
