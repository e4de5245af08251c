"""Fixed-point value iteration, used as an independent check on the LP."""

from __future__ import annotations

import numpy as np

from .bellman import BellmanSystem

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


class ConvergenceError(RuntimeError):
    """Value iteration did not converge within the iteration budget."""


def bellman_backup(system: BellmanSystem, values: np.ndarray) -> np.ndarray:
    """One synchronous application of max_a [q + beta * P V]."""
    beta = system.beta
    deny = system.q[0] + beta * (system.transitions[0] @ values)
    allow = system.q[1] + beta * (system.transitions[1] @ values)
    return np.maximum(deny, allow)


def value_iterate(
    system: BellmanSystem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[np.ndarray, int]:
    """Iterate from zero until successive sweeps differ by less than tol.

    Returns the value vector and the number of backups performed.
    """
    values = np.zeros(system.num_states)
    if system.beta == 0.0:
        # the backup ignores V entirely; one sweep is exact
        return bellman_backup(system, values), 1
    for iteration in range(1, max_iter + 1):
        updated = bellman_backup(system, values)
        if np.max(np.abs(updated - values)) < tol:
            return updated, iteration
        values = updated
    raise ConvergenceError(
        f"no convergence to {tol} within {max_iter} iterations (beta={system.beta})"
    )
