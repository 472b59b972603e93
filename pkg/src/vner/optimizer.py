"""Limited-memory BFGS with a backtracking Armijo line search."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

log = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], "tuple[float, np.ndarray]"]

ARMIJO_C1 = 1e-4
MAX_HALVINGS = 50
CURVATURE_EPS = 1e-10


class OptimizationError(RuntimeError):
    """Raised when the search cannot continue; ``x`` is the last good iterate."""

    def __init__(self, message: str, x: np.ndarray, value: float):
        super().__init__(message)
        self.x = x
        self.value = value


@dataclass(frozen=True)
class OptimizerConfig:
    memory: int = 10
    tolerance: float = 1e-6
    max_iterations: int = 300

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class OptimizeResult:
    x: np.ndarray
    trace: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def value(self) -> float:
        return self.trace[-1]

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1


def _two_loop(g: np.ndarray, pairs) -> np.ndarray:
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * s.dot(q)
        q -= a * y
        alphas.append(a)
    s, y, _ = pairs[-1]
    q *= s.dot(y) / y.dot(y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * y.dot(q)
        q += (a - b) * s
    return -q


def minimize(
    fun: Objective,
    x0: np.ndarray,
    config: OptimizerConfig = OptimizerConfig(),
    callback: Callable[[int, float], None] | None = None,
) -> OptimizeResult:
    """Minimize ``fun`` (returning value and gradient) from ``x0``.

    Stops when the relative decrease ``|f_k - f_{k-1}| / max(1, |f_k|)``
    drops below ``config.tolerance`` or after ``config.max_iterations``
    iterations. ``trace`` holds the objective at x0 and after every
    iteration and is non-increasing.
    """
    x = np.array(x0, dtype=np.float64)
    f, g = fun(x)
    f = float(f)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise OptimizationError("non-finite objective at the starting point", x, f)
    result = OptimizeResult(x, [f])
    pairs: deque = deque(maxlen=config.memory)

    for k in range(1, config.max_iterations + 1):
        if pairs:
            d = _two_loop(g, pairs)
            slope = g.dot(d)
            if not slope < 0:
                pairs.clear()
        if not pairs:
            gnorm = np.linalg.norm(g)
            if gnorm == 0:
                result.converged = True
                break
            d = -g / gnorm
            slope = g.dot(d)

        step = 1.0
        for _ in range(MAX_HALVINGS + 1):
            x_new = x + step * d
            f_new, g_new = fun(x_new)
            f_new = float(f_new)
            if not np.isfinite(f_new) or not np.all(np.isfinite(g_new)):
                raise OptimizationError(f"non-finite objective at iteration {k}", x, f)
            if f_new <= f + ARMIJO_C1 * step * slope:
                break
            step *= 0.5
        else:
            raise OptimizationError(f"line search failed at iteration {k}", x, f)

        s = x_new - x
        y = g_new - g
        sy = s.dot(y)
        if sy > CURVATURE_EPS:
            pairs.append((s, y, 1.0 / sy))

        decrease = abs(f - f_new) / max(1.0, abs(f_new))
        x, f, g = x_new, f_new, g_new
        result.x = x
        result.trace.append(f)
        if callback is not None:
            callback(k, f)
        if decrease < config.tolerance:
            result.converged = True
            break
    return result
