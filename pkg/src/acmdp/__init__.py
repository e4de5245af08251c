"""Risk-aware access control decisions via discounted Markov decision processes."""

from .bellman import BellmanSystem, build_bellman_lp, compile_system, verify_solution
from .config import (
    BUILTIN_NAMES,
    ScenarioParseError,
    builtin_scenario,
    parse_scenario,
    render_scenario,
    scenario_fingerprint,
)
from .dynamics import (
    EmergencyMatrix,
    RequestBehavior,
    TransitionModel,
    next_access_set,
    request_distribution,
    successors,
    validate_stochastic,
)
from .experiments import SweepSpec, run_sweep, self_check, sweep_csv
from .policy import (
    PolicyMap,
    Solution,
    decision_value,
    decision_values,
    export_values,
    extract_policy,
    import_values,
    solve_scenario,
)
from .rewards import (
    RewardTables,
    RewardVariant,
    Scenario,
    immediate_reward,
    reward_emresource,
    reward_transition,
)
from .simplex import LinearProgram, LpSolution, SimplexStatus, simplex_solve
from .states import (
    Access,
    Action,
    CapacityError,
    Emergency,
    ModelDims,
    State,
    StateSpace,
    access_bit_index,
    enumerate_states,
    set_contains,
    set_insert,
)
from .value_iteration import ConvergenceError, bellman_backup, value_iterate

__version__ = "0.1.0"
