"""Deterministic derivative-free minimization used by the separation searches."""

from __future__ import annotations

from typing import Callable, Tuple

import numpy as np


def pattern_search(f: Callable[[np.ndarray], float], x0: np.ndarray,
                   step: float, tol: float, budget: int,
                   spent: int = 0) -> Tuple[np.ndarray, float, int, bool]:
    """Coordinate descent with shrinking steps and a fixed scan order.

    Returns (argmin, value, evaluations, converged); converged is False when
    the evaluation budget ran out before the step shrank below tol.
    """
    x = x0.copy()
    fx = f(x)
    spent += 1
    while step > tol:
        improved = False
        for i in range(len(x)):
            for d in (step, -step):
                if spent >= budget:
                    return x, fx, spent, False
                trial = x.copy()
                trial[i] += d
                ft = f(trial)
                spent += 1
                if ft < fx:
                    x, fx = trial, ft
                    improved = True
        if not improved:
            step *= 0.5
    return x, fx, spent, True
