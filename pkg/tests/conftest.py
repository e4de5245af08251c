import pytest

from acmdp import Action, Emergency, State, builtin_scenario, solve_scenario

_SOLUTIONS = {}


@pytest.fixture
def solved():
    """Memoized access to solved built-in scenarios (shared across tests)."""

    def get(name, solver="lp"):
        key = (name, solver)
        if key not in _SOLUTIONS:
            _SOLUTIONS[key] = solve_scenario(builtin_scenario(name), solver=solver)
        return _SOLUTIONS[key]

    return get


def empty_set_grid(solution):
    """Decision values from the no-grants states, laid out like the reference
    tables: {(status_label, action_label): [values in access order]}."""
    sc = solution.scenario
    space = solution.system.space
    grid = {}
    for emergency in (Emergency.CALM, Emergency.ALERT):
        for action in (Action.DENY, Action.ALLOW):
            grid[(emergency.label, action.label)] = [
                solution.dv[int(action), space.state_index(State(emergency, 0, a))]
                for a in sc.dims.accesses()
            ]
    return grid
