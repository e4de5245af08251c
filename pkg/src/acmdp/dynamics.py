"""Transition dynamics: the product of three independent factors.

The emergency status evolves by a 2x2 stochastic matrix, the granted set
changes deterministically (allow inserts the pending access, deny keeps the
set), and the next pending request is drawn according to the configured
request behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .states import (
    ACTIONS,
    Action,
    Emergency,
    ModelDims,
    Request,
    State,
    StateSpace,
    access_bit_index,
    set_insert,
)

ROW_SUM_TOL = 1e-9


class RequestBehavior(str, Enum):
    # unique: a single request is controlled, then only the empty request.
    # once: each access can be granted at most once; the next request is
    #       uniform over the non-granted accesses and the empty request,
    #       and the empty request ends the sequence for good.
    # all: every concrete access stays requestable forever, uniformly.
    UNIQUE = "unique"
    ONCE = "once"
    ALL = "all"


@dataclass(frozen=True)
class EmergencyMatrix:
    """Row-stochastic 2x2 matrix over (calm, alert)."""

    rows: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self) -> None:
        for row in self.rows:
            for p in row:
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"emergency probability {p} outside [0, 1]")
            if abs(sum(row) - 1.0) > ROW_SUM_TOL:
                raise ValueError(f"emergency row {row} does not sum to 1")

    def prob(self, src: Emergency, dst: Emergency) -> float:
        return self.rows[int(src)][int(dst)]

    @property
    def prob_calm_to_alert(self) -> float:
        return self.rows[0][1]

    @property
    def prob_alert_to_alert(self) -> float:
        return self.rows[1][1]

    @classmethod
    def from_rates(cls, calm_to_alert: float, alert_to_alert: float) -> "EmergencyMatrix":
        return cls(
            (
                (1.0 - calm_to_alert, calm_to_alert),
                (1.0 - alert_to_alert, alert_to_alert),
            )
        )

    @classmethod
    def identity(cls) -> "EmergencyMatrix":
        return cls(((1.0, 0.0), (0.0, 1.0)))


@dataclass(frozen=True)
class TransitionModel:
    dims: ModelDims
    emergency: EmergencyMatrix
    behavior: RequestBehavior


def next_access_set(k: int, req: Request, act: Action, d: ModelDims) -> int:
    """Deterministic granted-set transition: allow inserts, deny keeps."""
    if act is Action.DENY or req is None:
        return k
    return set_insert(k, req, d)


def request_distribution(
    b: RequestBehavior, k_next: int, d: ModelDims, current: Request
) -> list[tuple[Request, float]]:
    """Distribution of the next pending request.

    Conditions on the post-decision granted set and, for the once
    behaviour, on the current request: after the empty request has been
    reached, no further requests arrive.
    """
    if b is RequestBehavior.UNIQUE:
        return [(None, 1.0)]
    if b is RequestBehavior.ALL:
        p = 1.0 / d.num_access_bits
        return [(a, p) for a in d.accesses()]
    # once: the empty request is terminal; otherwise draw uniformly among
    # the not-yet-granted accesses and the empty request
    if current is None:
        return [(None, 1.0)]
    pending = [a for a in d.accesses() if not (k_next >> access_bit_index(a, d)) & 1]
    p = 1.0 / (len(pending) + 1)
    return [(a, p) for a in pending] + [(None, p)]


def successors(m: TransitionModel, s: State, act: Action) -> list[tuple[State, float]]:
    """All positive-probability successor states of (s, act)."""
    k2 = next_access_set(s.granted, s.request, act, m.dims)
    requests = request_distribution(m.behavior, k2, m.dims, s.request)
    out: list[tuple[State, float]] = []
    for e2 in (Emergency.CALM, Emergency.ALERT):
        pe = m.emergency.prob(s.emergency, e2)
        if pe == 0.0:
            continue
        for req2, pr in requests:
            out.append((State(e2, k2, req2), pe * pr))
    return out


@dataclass(frozen=True)
class StochasticityViolation:
    state: State
    action: Action
    total_mass: float
    detail: str


def validate_stochastic(
    m: TransitionModel, tol: float = ROW_SUM_TOL
) -> list[StochasticityViolation]:
    """Check that every (state, action) successor list is a distribution.

    Returns the list of violations; empty means the model is well-formed.
    """
    violations = []
    for s in StateSpace(m.dims):
        for act in ACTIONS:
            succ = successors(m, s, act)
            total = sum(p for _, p in succ)
            bad_probs = [p for _, p in succ if not 0.0 < p <= 1.0]
            if bad_probs:
                violations.append(
                    StochasticityViolation(s, act, total, f"probabilities {bad_probs} outside (0, 1]")
                )
            elif abs(total - 1.0) > tol:
                violations.append(
                    StochasticityViolation(s, act, total, f"mass {total} != 1")
                )
    return violations
