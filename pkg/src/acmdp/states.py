"""State space of the access control decision process.

A state pairs an emergency status with the set of already-granted accesses
and the access request currently under control.  The granted set is encoded
as a bitmask: access (u, r) occupies bit u * num_resources + r, so set
membership and insertion are single bit operations and the whole powerset
is indexed by the integers [0, 2^(NU*NR)).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Optional

DEFAULT_CAP_BITS = 12


class CapacityError(ValueError):
    """Raised when the model dimensions exceed the state-space capacity."""


class Emergency(IntEnum):
    CALM = 0
    ALERT = 1

    @property
    def label(self) -> str:
        return "calm" if self is Emergency.CALM else "alert"

    @classmethod
    def from_label(cls, label: str) -> "Emergency":
        try:
            return {"calm": cls.CALM, "alert": cls.ALERT}[label]
        except KeyError:
            raise ValueError(f"unknown emergency status {label!r}") from None


class Action(IntEnum):
    # Deny sorts first: downstream tie-breaking falls back to the
    # fail-safe decision.
    DENY = 0
    ALLOW = 1

    @property
    def label(self) -> str:
        return "deny" if self is Action.DENY else "allow"

    @classmethod
    def from_label(cls, label: str) -> "Action":
        try:
            return {"deny": cls.DENY, "allow": cls.ALLOW}[label]
        except KeyError:
            raise ValueError(f"unknown action {label!r}") from None


ACTIONS = (Action.DENY, Action.ALLOW)


@dataclass(frozen=True, order=True)
class Access:
    """A (user, resource) pair; granting it adds it to the granted set."""

    user: int
    resource: int


# The empty ("eps") request: no access is pending control.
Request = Optional[Access]


@dataclass(frozen=True)
class ModelDims:
    num_users: int
    num_resources: int
    cap_bits: int = DEFAULT_CAP_BITS

    def __post_init__(self) -> None:
        if self.num_users < 1 or self.num_resources < 1:
            raise ValueError(
                f"need at least one user and one resource, got "
                f"{self.num_users} x {self.num_resources}"
            )
        if self.num_access_bits > self.cap_bits:
            raise CapacityError(
                f"{self.num_users} users x {self.num_resources} resources needs "
                f"{self.num_access_bits} bits, exceeding the cap of {self.cap_bits}; "
                f"the powerset state space would be intractable"
            )

    @property
    def num_access_bits(self) -> int:
        return self.num_users * self.num_resources

    @property
    def num_sets(self) -> int:
        return 1 << self.num_access_bits

    @property
    def num_states(self) -> int:
        return 2 * self.num_sets * (self.num_access_bits + 1)

    @property
    def full_set(self) -> int:
        return self.num_sets - 1

    def check_access(self, a: Access) -> None:
        if not (0 <= a.user < self.num_users and 0 <= a.resource < self.num_resources):
            raise ValueError(f"access {a} out of range for {self}")

    def accesses(self) -> Iterator[Access]:
        for u in range(self.num_users):
            for r in range(self.num_resources):
                yield Access(u, r)


def access_bit_index(a: Access, d: ModelDims) -> int:
    """Bit position of an access in the granted-set mask: u * NR + r."""
    return a.user * d.num_resources + a.resource


def set_contains(k: int, a: Access, d: ModelDims) -> bool:
    return (k >> access_bit_index(a, d)) & 1 == 1


def set_insert(k: int, a: Access, d: ModelDims) -> int:
    return k | (1 << access_bit_index(a, d))


def set_members(k: int, d: ModelDims) -> Iterator[Access]:
    for a in d.accesses():
        if set_contains(k, a, d):
            yield a


@dataclass(frozen=True)
class State:
    emergency: Emergency
    granted: int
    request: Request


class StateSpace:
    """Deterministic enumeration of all states with a bijective index.

    Ordering is emergency-major, then granted-set index, then request
    (concrete accesses in bit order, the empty request last).
    """

    def __init__(self, dims: ModelDims):
        self.dims = dims
        self._requests: list[Request] = list(dims.accesses()) + [None]
        self._states: list[State] | None = None

    def __len__(self) -> int:
        return self.dims.num_states

    def _request_index(self, req: Request) -> int:
        if req is None:
            return self.dims.num_access_bits
        self.dims.check_access(req)
        return access_bit_index(req, self.dims)

    def state_index(self, s: State) -> int:
        d = self.dims
        if not 0 <= s.granted < d.num_sets:
            raise ValueError(f"granted-set index {s.granted} out of range")
        per_set = d.num_access_bits + 1
        return (int(s.emergency) * d.num_sets + s.granted) * per_set + self._request_index(s.request)

    def index_state(self, i: int) -> State:
        d = self.dims
        if not 0 <= i < len(self):
            raise ValueError(f"state index {i} out of range [0, {len(self)})")
        per_set = d.num_access_bits + 1
        i, req = divmod(i, per_set)
        emergency, granted = divmod(i, d.num_sets)
        return State(Emergency(emergency), granted, self._requests[req])

    def states(self) -> list[State]:
        if self._states is None:
            self._states = [self.index_state(i) for i in range(len(self))]
        return self._states

    def __iter__(self) -> Iterator[State]:
        return iter(self.states())


def enumerate_states(d: ModelDims) -> StateSpace:
    return StateSpace(d)
