"""Exact inference in imprecise probability trees.

Predictive lower and upper previsions are computed by one backwards pass
over a finite event tree carrying a local imprecise model in every
non-terminal situation. A brute-force credal oracle, a weak law of large
numbers with its hedging selection, a prequential score and imprecise
Markov chains are built on top.
"""

from .desirability import (
    Assessment,
    avoids_partial_loss,
    conditional_lower,
    conditional_lower_on_partition,
    conditional_upper,
    lower_prevision,
    natural_extension_contains,
)
from .errors import *  # noqa: F401,F403
from .gambles import (
    Gamble,
    TreeProcess,
    distance_process,
    embed_from_cut,
    gamble_arith,
    is_cut_measurable,
    project_to_cut,
    stop_process,
)
from .inference import (
    ImpreciseProbabilityTree,
    Selection,
    backward_values,
    check_selection,
    natural_extension_member,
    optimal_selection,
    predictive_lower,
    predictive_lower_on_cut,
    predictive_upper,
)
from .laws import (
    CommitmentPlan,
    gain_gamble,
    prequential_score,
    score_function,
    validate_plan,
    verify_wlln,
    witness_slack,
    wlln_bound,
    wlln_witness_selection,
)
from .local_models import Credal, LinearVacuous, Precise, Vacuous, as_credal, local_lower, local_upper, vertex_count
from .markov import (
    ImpreciseMarkovChain,
    apply_T,
    apply_T_upper,
    benchmark_scaling,
    state_lower_prevision,
    state_upper_prevision,
    unroll_to_tree,
)
from .oracle import (
    PreciseTree,
    call_off_selection,
    credal_enumeration_lower,
    credal_enumeration_upper,
    gamble_process,
    precise_expectation,
)
from .tree import (
    Cut,
    EventTree,
    build_tree,
    children_cut,
    count_cuts,
    cut_of,
    distance,
    iter_cuts,
    paths_through,
    precedes,
    strictly_precedes,
    terminal_cut,
    trivial_cut,
    validate_cut,
)

__version__ = "0.1.0"
