"""shelvesim: steady states and frequency-filtered photon correlations of
shelving emitters, at desk scale.

The package is organized in five layers:

* :mod:`shelvesim.operators` -- dense operator/superoperator algebra,
  Liouvillian assembly, steady states, and time propagation;
* :mod:`shelvesim.spin` -- Wigner 3j symbols and angular-momentum operators;
* :mod:`shelvesim.models` -- builders for the shelving emitter, the
  emitter-sensor cascade, the rubidium-87 D2 realization, and the cavity-QED
  variant;
* :mod:`shelvesim.correlations` -- steady-state formulas, conditional
  dynamics, and frequency-filtered correlation functions of arbitrary order;
* :mod:`shelvesim.sweep` -- scenario presets, parallel parameter sweeps, and
  deterministic CSV/JSON output (also exposed as the ``shelvesim`` CLI).
"""

__version__ = "0.1.0"

from .operators import (
    OperatorMatrix,
    DensityMatrix,
    SuperOperator,
    ShelvesimError,
    DimensionMismatchError,
    DegenerateSteadyStateError,
    SteadyStateConvergenceError,
    kron,
    dissipator,
    build_liouvillian,
    steady_state,
    propagate,
    expectation,
)
from .spin import ThreeJArgs, wigner3j, angular_momentum_ops, zeeman_x_coupling
from .models import (
    LambdaParams,
    SensorConfig,
    RbParams,
    ModelSystem,
    build_lambda_emitter,
    build_cascaded_sensor,
    build_rb87_system,
    build_cavity_qed,
)
from .correlations import (
    SteadyStateAnalytic,
    CorrelationCurve,
    FilteredCorrelation,
    MomentUnderflowError,
    steady_state_analytic,
    conditional_excitation,
    g2_sigma_tau,
    g2_weak_analytic,
    filtered_gn,
    filtered_gn_orders,
    cavity_gn,
    cavity_gn_orders,
    quality_q,
    default_tau_grid,
    liouvillian_of,
)
from .sweep import (
    GridSpec,
    Scenario,
    SweepResult,
    ScenarioValidationError,
    load_scenario,
    run_sweep,
    emit_results,
    preset_names,
    SCHEMA_VERSION,
)

__all__ = [
    "__version__",
    "OperatorMatrix",
    "DensityMatrix",
    "SuperOperator",
    "ShelvesimError",
    "DimensionMismatchError",
    "DegenerateSteadyStateError",
    "SteadyStateConvergenceError",
    "kron",
    "dissipator",
    "build_liouvillian",
    "steady_state",
    "propagate",
    "expectation",
    "ThreeJArgs",
    "wigner3j",
    "angular_momentum_ops",
    "zeeman_x_coupling",
    "LambdaParams",
    "SensorConfig",
    "RbParams",
    "ModelSystem",
    "build_lambda_emitter",
    "build_cascaded_sensor",
    "build_rb87_system",
    "build_cavity_qed",
    "SteadyStateAnalytic",
    "CorrelationCurve",
    "FilteredCorrelation",
    "MomentUnderflowError",
    "steady_state_analytic",
    "conditional_excitation",
    "g2_sigma_tau",
    "g2_weak_analytic",
    "filtered_gn",
    "filtered_gn_orders",
    "cavity_gn",
    "cavity_gn_orders",
    "quality_q",
    "default_tau_grid",
    "liouvillian_of",
    "GridSpec",
    "Scenario",
    "SweepResult",
    "ScenarioValidationError",
    "load_scenario",
    "run_sweep",
    "emit_results",
    "preset_names",
    "SCHEMA_VERSION",
]
