"""QAOA workbench for small vehicle routing problems."""
from ._validation import ResourceError, ValidationError
from .analysis import (
    RouteSet,
    approximation_ratio,
    decode,
    exact_qubo_min,
    exact_vrp,
    feasibility_ratio,
    penalty_sweep,
)
from .estimator import QAOARouter
from .formulation import build_edge_model, build_time_expanded_model, enumerate_subtour_subsets
from .instance import VrpInstance, from_weights, generate_random, read_instance, write_instance
from .ising import IsingHamiltonian, ising_energy, normalize_coefficients, to_ising
from .optimizer import nelder_mead, optimize_qaoa, solve
from .qubo import PenaltyConfig, Qubo, default_penalty, qubit_count, qubo_value, to_qubo
from .resources import comparison_table, logical_gate_counts, qubit_requirements, scaling_fit, two_qubit_depth
from .simulator import apply_mixer, apply_phase_separator, expectation, qaoa_state, sample, uniform_state

__version__ = "0.1.0"
