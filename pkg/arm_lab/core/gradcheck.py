"""Central finite differences, for checking analytic gradients."""

import logging
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)


def central_difference(func: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    x0 = np.array(x, dtype=float)
    grad = np.zeros_like(x0)
    for j in range(x0.size):
        xp = x0.copy()
        xm = x0.copy()
        xp.flat[j] += h
        xm.flat[j] -= h
        grad.flat[j] = (func(xp) - func(xm)) / (2.0 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """max |a - n| scaled by the larger gradient magnitude (never below floor)."""
    a = np.asarray(analytic, dtype=float)
    n = np.asarray(numeric, dtype=float)
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(n))), floor)
    err = float(np.max(np.abs(a - n))) / scale
    logger.debug("gradcheck: max abs diff %.3e, scale %.3e", float(np.max(np.abs(a - n))), scale)
    return err
