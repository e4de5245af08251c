"""Assembly of the Bellman system and its linear program.

compile_system turns a scenario into sparse per-action transition matrices
and immediate-reward vectors; both solvers and the decision-value code work
from this shared representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .dynamics import successors
from .rewards import Scenario, reward_transition
from .simplex import LinearProgram
from .states import ACTIONS, StateSpace

VERIFY_TOL = 1e-9
TIGHT_TOL = 1e-7


@dataclass
class BellmanSystem:
    scenario: Scenario
    space: StateSpace
    transitions: tuple[sparse.csr_matrix, sparse.csr_matrix]  # indexed by Action
    q: np.ndarray  # (2, num_states) immediate rewards, indexed by Action

    @property
    def num_states(self) -> int:
        return len(self.space)

    @property
    def beta(self) -> float:
        return self.scenario.beta


def compile_system(sc: Scenario) -> BellmanSystem:
    space = StateSpace(sc.dims)
    model = sc.transition_model()
    n = len(space)
    q = np.zeros((2, n))
    mats = []
    for act in ACTIONS:
        rows: list[int] = []
        cols: list[int] = []
        data: list[float] = []
        for i, s in enumerate(space):
            total = 0.0
            for s2, p in successors(model, s, act):
                j = space.state_index(s2)
                rows.append(i)
                cols.append(j)
                data.append(p)
                total += p * reward_transition(sc, s, act, s2)
            q[int(act), i] = total
        mats.append(sparse.csr_matrix((data, (rows, cols)), shape=(n, n)))
    return BellmanSystem(sc, space, (mats[0], mats[1]), q)


def build_bellman_lp(system: BellmanSystem) -> LinearProgram:
    """One >= constraint per (state, action), objective min sum of values.

    Constraints are emitted state-major, action-minor (deny first) so solver
    runs are reproducible.
    """
    n = system.num_states
    beta = system.beta
    lhs = np.zeros((2 * n, n))
    rhs = np.zeros(2 * n)
    for act in ACTIONS:
        block = -beta * system.transitions[int(act)].toarray()
        block[np.arange(n), np.arange(n)] += 1.0
        lhs[2 * np.arange(n) + int(act)] = block
        rhs[2 * np.arange(n) + int(act)] = system.q[int(act)]
    return LinearProgram(np.ones(n), lhs, rhs)


@dataclass
class VerificationReport:
    max_violation: float  # largest amount any Bellman constraint is broken by
    min_slack: np.ndarray  # per state, the smallest slack over both actions
    max_min_slack: float  # worst tightness: 0 when every state has a tight row

    def feasible(self, tol: float = VERIFY_TOL) -> bool:
        return self.max_violation <= tol

    def all_tight(self, tol: float = TIGHT_TOL) -> bool:
        return self.max_min_slack <= tol


def verify_solution(system: BellmanSystem, values: np.ndarray) -> VerificationReport:
    """Slack analysis of a candidate value vector against the Bellman rows."""
    beta = system.beta
    slacks = np.empty((2, system.num_states))
    for act in ACTIONS:
        backup = system.q[int(act)] + beta * (system.transitions[int(act)] @ values)
        slacks[int(act)] = values - backup
    min_slack = slacks.min(axis=0)
    return VerificationReport(
        max_violation=float(max(0.0, -slacks.min())),
        min_slack=min_slack,
        max_min_slack=float(min_slack.max()),
    )
