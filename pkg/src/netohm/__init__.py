"""Inverse problems with dissipated-power data on resistor networks."""

from .errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    EmptyPartitionError,
    LineSearchError,
    LoopEdgeError,
    NetworkError,
    SingularOperatorError,
)
from .forward import PowerData, ProblemSpec, States, Variant, forward_dataset, solve_states
from .invert import GNConfig, GNResult, add_noise, armijo_search, gauss_newton
from .linearize import Certificate, JacobianReport, assemble_jacobian, certify, fd_jacobian
from .network import (
    Network,
    build_network,
    dirichlet_solve,
    divergence,
    gradient,
    laplacian,
    schrodinger_solve,
)
from .thermal import ThermalConfig, covariance_set, power_from_thermal, run_thermal_experiment

__version__ = "0.1.0"
