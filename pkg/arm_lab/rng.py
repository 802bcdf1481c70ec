"""Deterministic random streams.

Every stream is keyed by the run seed plus a purpose tag and optional integer
indices (step, group, ...). Streams built from the same key are bit-identical;
streams built from different keys are statistically independent.
"""

import numpy as np

# Purpose tags
TASKS = 1
ROLLOUTS = 2
EVAL = 3
INFERENCE = 4


def stream(seed: int, *keys: int) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
