"""Two qubits under classical white noise: dynamics, steady states and discord."""
from .correlations import CorrelationRecord, measure_all, measure_matrix, qd_cc, qd_oracle
from .noisedyn import EvolutionConfig, Trajectory, evolve, master_rhs, steady_map
from .qstate import (
    HamiltonianParams,
    NoiseConfig,
    Topology,
    XState,
    as_x_state,
    make_alpha_state,
    make_bell,
    make_beta_state,
    make_c_class,
    make_product,
    make_werner,
)

__version__ = "0.1.0"
