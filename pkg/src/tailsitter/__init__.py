"""Tail-sitter hover/cruise transition control with recurrent-network estimators."""

from .control import (
    ErrorMatrix,
    InnerGains,
    OuterCommand,
    OuterGains,
    attitude_error_matrix,
    attitude_inner_loop,
    velocity_outer_loop,
)
from .dynamics import (
    AeroParams,
    AttState,
    ControlInput,
    LongState,
    VehicleParams,
    aero_forces,
    angle_of_attack,
    attitude_rates,
    h1,
    h2,
    longitudinal_rates,
)
from .errors import ConfigurationError, DivergenceError, DomainError, TailsitterError
from .guidance import (
    DesiredState,
    ShapingConstants,
    TransitionMode,
    alpha_hover_cruise,
    desired_state,
    reference_profile,
    theta_from_epsilon,
    ud_hover_cruise,
)
from .integrate import rk4_step
from .rnn import (
    EstimationError,
    RnnNetwork,
    init_network,
    load_weights,
    lyapunov_value,
    nonlinear_estimate,
    rnn_step,
    save_weights,
    weight_update_rates,
)
from .sim import ScenarioConfig, TrajectoryLog, run_transition
from .training import (
    Dataset,
    ExcitationConfig,
    LyapunovSample,
    TrainingReport,
    adapt_online,
    collect_dataset,
    generate_excitation,
    mse,
    network_for,
    predict,
    train_offline,
)

__version__ = "0.1.0"
