"""Momentum-based optimization as dissipative dynamical systems.

Continuous and discrete momentum dynamics, closed-form spectral rate analysis,
time-varying damping schedules and energy/Lyapunov audits.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    InvalidArgument,
    MboError,
    RegimeError,
    ScheduleInfeasible,
    UnsupportedOperation,
)
from .objective import (
    BUILTINS,
    CurvatureBounds,
    ObjectiveSpec,
    check_gradient,
    curvature_bounds,
    log_uniform_spectrum,
    make_builtin,
    make_quadratic,
    parse_selector,
)
from .dynamics import (
    AlgorithmParams,
    State,
    Trajectory,
    ct_flow,
    ct_flow_many,
    dt_iterate,
    dt_step,
    heavy_ball_params,
    heavy_ball_step,
    non_potential_force,
    rk4_integrate,
    split_step,
    symplectic_euler_step,
)
from .spectral import (
    AccelerationVerdict,
    RateReport,
    RateSample,
    classify_acceleration,
    ct_eigenvalues,
    ct_worst_rate,
    dt_complex_magnitude,
    dt_eigenvalues,
    dt_stability_ok,
    dt_worst_rate,
    eigen_loci,
    nesterov_params,
)
from .schedules import (
    ScheduleCT,
    ScheduleDT,
    ct_damping,
    ct_envelope,
    ct_fundamental,
    dt_fundamental,
    dt_roots,
    dt_schedule,
)
from .energy import (
    DampingBounds,
    EnergyAudit,
    TheoryConstants,
    convex_stability_matrix,
    ct_energy_rate,
    d_bounds,
    energy_audit,
    hamiltonian,
    lipschitz_H,
    lyapunov_V,
    region_membership,
    shadow_energy,
    theory_constants,
    transformed_energy,
)

from .harness import (
    EXPERIMENTS,
    FIGURES,
    ExperimentConfig,
    Manifest,
    RateFit,
    emit_figure_data,
    fit_decay,
    fit_rate,
    load_config,
    run_experiment,
    transition_time,
)
