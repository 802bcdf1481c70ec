"""Tabular softmax policy over reasoning formats, one logit row per difficulty.

The clipped surrogate works at format granularity: each rollout is one action
(its format), so the per-token average of the objective reduces to a single
ratio per rollout and the advantage is constant over the rollout's tokens.
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.domain.rollout import RolloutGroup
from arm_lab.domain.task import Difficulty
from arm_lab.errors import MisalignmentError, NonFiniteError, SupportError

N_DIFFICULTIES = len(Difficulty)
N_FORMATS = len(ReasoningFormat)


@dataclass
class TabularPolicy:
    logits: np.ndarray = field(default_factory=lambda: np.zeros((N_DIFFICULTIES, N_FORMATS)))

    def __post_init__(self):
        self.logits = np.array(self.logits, dtype=float)
        if self.logits.shape != (N_DIFFICULTIES, N_FORMATS):
            raise ValueError(f"logits must be {N_DIFFICULTIES}x{N_FORMATS}, got {self.logits.shape}")
        if not np.all(np.isfinite(self.logits)):
            raise NonFiniteError("policy logits must be finite")

    def copy(self) -> "TabularPolicy":
        return TabularPolicy(self.logits.copy())

    def probs_table(self) -> np.ndarray:
        z = self.logits - self.logits.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class SurrogateConfig:
    clip_epsilon: float = 0.2
    kl_coefficient: float = 1e-3

    def __post_init__(self):
        if not (0.0 < self.clip_epsilon < 1.0):
            raise ValueError(f"clip_epsilon must lie in (0, 1), got {self.clip_epsilon}")
        if self.kl_coefficient < 0.0:
            raise ValueError(f"kl_coefficient must be >= 0, got {self.kl_coefficient}")


def uniform_policy() -> TabularPolicy:
    return TabularPolicy()


# -----------------------
# Sampling
# -----------------------
def action_probs(policy: TabularPolicy, difficulty: Union[Difficulty, int]) -> np.ndarray:
    row = policy.logits[int(difficulty)]
    e = np.exp(row - row.max())
    return e / e.sum()


def sample_format(
    policy: TabularPolicy,
    difficulty: Union[Difficulty, int],
    rng: np.random.Generator,
    argmax: bool = False,
) -> Tuple[ReasoningFormat, float]:
    p = action_probs(policy, difficulty)
    if argmax:
        idx = int(np.argmax(p))
    else:
        idx = int(np.searchsorted(np.cumsum(p), rng.random(), side="right"))
        idx = min(idx, N_FORMATS - 1)
        while p[idx] == 0.0:
            # cumsum rounding can land on a zero-probability tail
            idx -= 1
    return ReasoningFormat(idx), float(np.log(p[idx]))


# -----------------------
# KL
# -----------------------
def kl_categorical(p: Sequence[float], q: Sequence[float]) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    support = p > 0
    if np.any(q[support] <= 0):
        raise SupportError("KL undefined: q is zero where p is positive")
    return float(np.sum(p[support] * (np.log(p[support]) - np.log(q[support]))))


# -----------------------
# Clipped surrogate
# -----------------------
def _log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def surrogate_loss_and_grad(
    policy: TabularPolicy,
    old_policy: TabularPolicy,
    ref_policy: TabularPolicy,
    groups: Sequence[RolloutGroup],
    advantages: Sequence[Sequence[float]],
    cfg: SurrogateConfig,
) -> Tuple[float, np.ndarray]:
    """Loss = -(clipped objective) + beta * KL(pi || pi_ref), and its gradient w.r.t. logits.

    The clipped term is a mean over groups of the mean over each group's
    rollouts; the KL term averages the exact categorical KL over the
    difficulties present in the batch.
    """
    if len(advantages) != len(groups):
        raise MisalignmentError(f"{len(advantages)} advantage rows for {len(groups)} groups")
    if not groups:
        return 0.0, np.zeros((N_DIFFICULTIES, N_FORMATS))

    d_idx: List[int] = []
    a_idx: List[int] = []
    adv: List[float] = []
    weight: List[float] = []
    n_groups = len(groups)
    for g, (group, group_adv) in enumerate(zip(groups, advantages)):
        if len(group_adv) != group.size:
            raise MisalignmentError(f"group {g}: {len(group_adv)} advantages for {group.size} rollouts")
        w = 1.0 / (n_groups * group.size)
        for rollout, a in zip(group.rollouts, group_adv):
            d_idx.append(int(group.difficulty))
            a_idx.append(int(rollout.format))
            adv.append(float(a))
            weight.append(w)

    d = np.array(d_idx)
    a = np.array(a_idx)
    A = np.array(adv)
    W = np.array(weight)

    logp = _log_softmax(policy.logits)
    p = np.exp(logp)
    p_old = old_policy.probs_table()
    if np.any(p_old[d, a] <= 0.0):
        raise SupportError("old policy gives zero probability to a taken action")
    logp_old = _log_softmax(old_policy.logits)

    eps = cfg.clip_epsilon
    ratio = np.exp(logp[d, a] - logp_old[d, a])
    unclipped = ratio * A
    clipped = np.clip(ratio, 1.0 - eps, 1.0 + eps) * A
    objective = np.minimum(unclipped, clipped)
    # gradient only flows where the unclipped branch is the minimum
    active = unclipped <= clipped

    coeff = W * active * A * ratio                 # d(objective_i) / d(log pi(a_i|d_i))
    grad_obj = np.zeros_like(policy.logits)
    np.add.at(grad_obj, (d, a), coeff)
    per_row = np.zeros(N_DIFFICULTIES)
    np.add.at(per_row, d, coeff)
    grad_obj -= per_row[:, None] * p

    loss = -float(np.sum(W * objective))
    grad = -grad_obj

    if cfg.kl_coefficient > 0.0:
        present = sorted(set(d_idx))
        logp_ref = _log_softmax(ref_policy.logits)
        kl_total = 0.0
        for row in present:
            diff = logp[row] - logp_ref[row]
            kl = float(np.sum(p[row] * diff))
            kl_total += kl
            grad[row] += cfg.kl_coefficient / len(present) * p[row] * (diff - kl)
        loss += cfg.kl_coefficient * kl_total / len(present)

    return loss, grad


def mean_kl_to_reference(policy: TabularPolicy, ref_policy: TabularPolicy) -> float:
    logp = _log_softmax(policy.logits)
    logq = _log_softmax(ref_policy.logits)
    return float(np.mean(np.sum(np.exp(logp) * (logp - logq), axis=1)))


# -----------------------
# Optimizer step
# -----------------------
def apply_update(policy: TabularPolicy, grad: np.ndarray, learning_rate: float) -> TabularPolicy:
    grad = np.asarray(grad, dtype=float)
    if not np.all(np.isfinite(grad)):
        raise NonFiniteError("gradient contains non-finite values")
    if learning_rate < 0.0:
        raise ValueError(f"learning_rate must be >= 0, got {learning_rate}")
    return TabularPolicy(policy.logits - learning_rate * grad)
