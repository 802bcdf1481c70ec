"""Policy checkpoints as small JSON documents.

Floats are stored through ``repr``, which round-trips bit-exactly.
"""

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from arm_lab.core.policy import TabularPolicy
from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.task import Difficulty
from arm_lab.errors import CheckpointError

CHECKPOINT_FORMAT = "arm-lab-policy/1"


@dataclass
class Checkpoint:
    step: int
    policy: TabularPolicy
    meta: Dict[str, Any] = field(default_factory=dict)


def _key(d: Difficulty, f: ReasoningFormat) -> str:
    return f"{d.label}.{f.short_name}"


def checkpoint_to_dict(ckpt: Checkpoint) -> Dict[str, Any]:
    logits = {}
    for d in Difficulty:
        for f in ReasoningFormat:
            logits[_key(d, f)] = float(ckpt.policy.logits[d, f])
    return {
        "format": CHECKPOINT_FORMAT,
        "step": int(ckpt.step),
        "meta": dict(ckpt.meta),
        "logits": logits,
    }


def checkpoint_from_dict(doc: Any) -> Checkpoint:
    if not isinstance(doc, dict) or doc.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"not an {CHECKPOINT_FORMAT} document")
    raw = doc.get("logits")
    if not isinstance(raw, dict):
        raise CheckpointError("missing 'logits' record")
    table = np.zeros((len(Difficulty), len(ReasoningFormat)))
    for d in Difficulty:
        for f in ReasoningFormat:
            k = _key(d, f)
            v = raw.get(k)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise CheckpointError(f"logit {k!r} missing or not a finite number")
            table[d, f] = float(v)
    step = doc.get("step", 0)
    if isinstance(step, bool) or not isinstance(step, int) or step < 0:
        raise CheckpointError("'step' must be a nonnegative integer")
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise CheckpointError("'meta' must be a mapping")
    return Checkpoint(step=step, policy=TabularPolicy(table), meta=meta)


def save_checkpoint(ckpt: Checkpoint, path: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(checkpoint_to_dict(ckpt), f, indent=2, sort_keys=False)
        f.write("\n")


def load_checkpoint(path: str) -> Checkpoint:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CheckpointError(f"corrupt checkpoint {path}: line {e.lineno}: {e.msg}") from e
    return checkpoint_from_dict(doc)
