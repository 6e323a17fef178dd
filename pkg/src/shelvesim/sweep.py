"""Scenario configuration, parameter sweeps, and deterministic tabular output.

A scenario names a model, a set of fixed parameters, up to two swept axes,
and the quantities to evaluate at every grid point.  Embedded presets
carry the parameter sets behind the reference figure panels (fig2-fig7); their
grid ranges are implementer-chosen and documented per preset.

Sweeps are embarrassingly parallel: each grid point is evaluated
independently and rows are assembled in grid order, so the emitted bytes are
identical for any worker count.  Per-point wall times are kept in memory for
profiling but never serialized, to preserve byte-identical output.
"""

import json
import math
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .correlations import (
    MomentUnderflowError,
    cavity_gn_orders,
    conditional_excitation,
    default_tau_grid,
    filtered_gn_orders,
    g2_sigma_tau,
    quality_q,
    stationary_excited_population,
)
from .models import DEFAULT_COUPLING, LambdaParams, RbParams, SensorConfig, build_lambda_emitter
from .operators import ShelvesimError

__all__ = [
    "GridSpec",
    "Scenario",
    "SweepResult",
    "ScenarioValidationError",
    "load_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "run_sweep",
    "emit_results",
    "preset_names",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "1"

_MODELS = ("lambda", "rb87", "cavity")

# Parameters accepted in `fixed` or as sweep axes, per model.  The sensor
# coupling is a physical parameter only for the cavity model; for the filter
# models it is a solver setting (the vanishing-coupling protocol owns it).
_PARAMS = {
    "lambda": {
        "omega", "omega_r", "omega_r_ratio", "delta_a", "delta_e",
        "gamma1", "gamma2", "kappa", "delta_b",
    },
    "rb87": {
        "v_eg", "omega_b_field", "delta_e", "delta_s", "gamma_total", "kappa",
    },
    "cavity": {
        "omega", "omega_r", "omega_r_ratio", "delta_a", "delta_e",
        "gamma1", "gamma2", "kappa", "delta_b", "g_c",
    },
}

_CURVE_QUANTITIES = {"g2_tau", "conditional"}
_GN_RE = re.compile(r"^g(\d+)$")


class ScenarioValidationError(ShelvesimError, ValueError):
    """Scenario description is invalid; ``errors`` lists every violation."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid scenario:\n  - " + "\n  - ".join(self.errors))


@dataclass(frozen=True)
class GridSpec:
    """A one-dimensional sweep grid."""

    scale: str  # "log" or "linear"
    min: float
    max: float
    count: int

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min], dtype=float)
        if self.scale == "log":
            return np.logspace(math.log10(self.min), math.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class Scenario:
    """A validated sweep description."""

    name: str
    model: str
    fixed: tuple          # of (param, value)
    sweep_axes: tuple     # of (param, GridSpec)
    quantities: tuple     # of strings: "g2", "g3", ..., "rho_ee", "Q", "g2_tau", "conditional"
    solver: tuple = ()    # of (key, value): optional g_c / n_max overrides
    description: str = ""

    @property
    def fixed_map(self) -> dict:
        return dict(self.fixed)

    @property
    def solver_map(self) -> dict:
        return dict(self.solver)

    def grid_shape(self) -> tuple:
        return tuple(spec.count for _, spec in self.sweep_axes)


@dataclass
class SweepResult:
    """Tabular sweep output plus provenance."""

    scenario: str
    columns: list
    rows: list            # list of tuples aligned with `columns`
    meta: dict
    wall_times: list = field(default_factory=list)  # seconds per row, not serialized


def _validate(d: dict):
    errors = []
    known_top = {"name", "model", "fixed", "sweep", "quantities", "solver", "description"}
    for k in d:
        if k not in known_top:
            errors.append(f"unknown field {k!r}")

    name = d.get("name")
    if not isinstance(name, str) or not name:
        errors.append("'name' must be a nonempty string")
    model = d.get("model")
    if model not in _MODELS:
        errors.append(f"'model' must be one of {_MODELS}, got {model!r}")
        model = "lambda"  # keep validating with a stand-in
    params = _PARAMS[model]

    fixed = d.get("fixed", {})
    if not isinstance(fixed, dict):
        errors.append("'fixed' must be a mapping of parameter name to number")
        fixed = {}
    for k, v in fixed.items():
        if k not in params:
            errors.append(f"unknown parameter {k!r} for model {model!r}")
        elif not isinstance(v, (int, float)) or isinstance(v, bool):
            errors.append(f"parameter {k!r} must be a number, got {v!r}")

    sweep = d.get("sweep", [])
    if not isinstance(sweep, list):
        errors.append("'sweep' must be a list of axis specifications")
        sweep = []
    if len(sweep) > 2:
        errors.append(f"at most 2 sweep axes are supported, got {len(sweep)}")
    axis_names = []
    axes = []
    for i, ax in enumerate(sweep):
        if not isinstance(ax, dict):
            errors.append(f"sweep axis {i} must be a mapping")
            continue
        p = ax.get("param")
        if p not in params:
            errors.append(f"sweep axis {i}: unknown parameter {p!r} for model {model!r}")
        elif p in fixed:
            errors.append(f"sweep axis {i}: parameter {p!r} is also fixed")
        elif p in axis_names:
            errors.append(f"sweep axis {i}: parameter {p!r} swept twice")
        scale = ax.get("scale")
        if scale not in ("log", "linear"):
            errors.append(f"sweep axis {i}: 'scale' must be 'log' or 'linear', got {scale!r}")
        lo, hi, count = ax.get("min"), ax.get("max"), ax.get("count")
        bounds_ok = True
        for fname, v in (("min", lo), ("max", hi)):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                errors.append(f"sweep axis {i}: {fname!r} must be a number")
                bounds_ok = False
        count_ok = isinstance(count, int) and not isinstance(count, bool) and count >= 1
        if not count_ok:
            errors.append(f"sweep axis {i}: 'count' must be a positive integer")
        if bounds_ok:
            if lo > hi:
                errors.append(f"sweep axis {i}: min {lo} exceeds max {hi}")
            if scale == "log" and lo <= 0:
                errors.append(f"sweep axis {i}: log grids require min > 0")
        ok_numbers = bounds_ok and count_ok and lo <= hi and not (scale == "log" and lo <= 0)
        if p in params and p not in fixed and p not in axis_names and ok_numbers and scale in ("log", "linear"):
            axis_names.append(p)
            axes.append((p, GridSpec(scale, float(lo), float(hi), int(count))))

    quantities = d.get("quantities", [])
    if not isinstance(quantities, list) or not quantities:
        errors.append("'quantities' must be a nonempty list")
        quantities = []
    seen = []
    for q in quantities:
        if not isinstance(q, str):
            errors.append(f"quantity {q!r} must be a string")
            continue
        m = _GN_RE.match(q)
        if m:
            if int(m.group(1)) < 2:
                errors.append(f"quantity {q!r}: correlation order must be >= 2")
        elif q not in {"rho_ee", "Q"} | _CURVE_QUANTITIES:
            errors.append(f"unknown quantity {q!r}")
        if q in seen:
            errors.append(f"quantity {q!r} listed twice")
        seen.append(q)
    curve = [q for q in quantities if q in _CURVE_QUANTITIES]
    point = [q for q in quantities if isinstance(q, str) and q not in _CURVE_QUANTITIES]
    if curve and point:
        errors.append("delay-curve quantities cannot be mixed with sweep quantities")
    if curve and axes:
        errors.append("delay-curve quantities do not admit sweep axes (the delay is the axis)")
    if curve and model != "lambda":
        errors.append("delay-curve quantities are defined for the bare emitter model 'lambda'")
    if any(q in ("rho_ee", "Q") for q in quantities) and model == "rb87":
        errors.append("'rho_ee' and 'Q' quantities are defined for the three-level models")

    all_params = set(fixed) | set(axis_names)
    if model in ("lambda", "cavity"):
        if "omega" not in all_params:
            errors.append("'omega' must be fixed or swept")
        if ("omega_r" in all_params) == ("omega_r_ratio" in all_params):
            errors.append("exactly one of 'omega_r' and 'omega_r_ratio' must be given")
    else:
        for req in ("v_eg", "omega_b_field"):
            if req not in all_params:
                errors.append(f"{req!r} must be fixed or swept")
    filtered = [q for q in point if _GN_RE.match(q) or q == "Q"]
    if filtered and "kappa" not in all_params:
        errors.append("'kappa' must be fixed or swept for filtered quantities")
    if model == "cavity" and "g_c" not in all_params:
        errors.append("the cavity model requires 'g_c' fixed or swept")

    solver = d.get("solver", {})
    if not isinstance(solver, dict):
        errors.append("'solver' must be a mapping")
        solver = {}
    for k, v in solver.items():
        if k not in ("g_c", "n_max"):
            errors.append(f"unknown solver override {k!r} (known: g_c, n_max)")
        elif k == "g_c" and (not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0):
            errors.append("solver override 'g_c' must be a positive number")
        elif k == "n_max" and (not isinstance(v, int) or isinstance(v, bool) or v < 1):
            errors.append("solver override 'n_max' must be a positive integer")
    if model == "cavity" and "g_c" in solver:
        errors.append("for the cavity model 'g_c' is a physical parameter, not a solver override")

    description = d.get("description", "")
    if not isinstance(description, str):
        errors.append("'description' must be a string")
        description = ""

    if errors:
        raise ScenarioValidationError(errors)
    return Scenario(
        name=name,
        model=model,
        fixed=tuple(sorted((k, float(v)) for k, v in fixed.items())),
        sweep_axes=tuple(axes),
        quantities=tuple(quantities),
        solver=tuple(sorted(solver.items())),
        description=description,
    )


def scenario_from_dict(d: dict) -> Scenario:
    """Validate a scenario description, reporting every violation at once."""
    return _validate(d)


def scenario_to_dict(s: Scenario) -> dict:
    """JSON-serializable description; inverse of :func:`scenario_from_dict`."""
    return {
        "name": s.name,
        "model": s.model,
        "fixed": {k: v for k, v in s.fixed},
        "sweep": [
            {"param": p, "scale": g.scale, "min": g.min, "max": g.max, "count": g.count}
            for p, g in s.sweep_axes
        ],
        "quantities": list(s.quantities),
        "solver": {k: v for k, v in s.solver},
        "description": s.description,
    }


# ---------------------------------------------------------------------------
# Embedded presets.  Fixed parameter sets follow the captions of the
# reference figure panels; grid ranges and point counts are implementer-chosen
# to cover the described features (limits, optima, sidebands).

_KAPPA_61 = {"param": "kappa", "scale": "log", "min": 1e-3, "max": 1e3, "count": 61}
_OMEGA_R_49 = {"param": "omega_r", "scale": "log", "min": 1e-3, "max": 10.0, "count": 49}
_OMEGA_49 = {"param": "omega", "scale": "log", "min": 1e-2, "max": 1e2, "count": 49}
_OMEGA_B_49 = {"param": "omega_b_field", "scale": "log", "min": 1e-3, "max": 10.0, "count": 49}
_GC_41 = {"param": "g_c", "scale": "log", "min": 1e-3, "max": 1e2, "count": 41}
_OBAR_FIG7 = math.sqrt(1e8 + 100.0)  # dressed splitting at omega = 1e4, omega_r = 10


def _preset_dicts() -> dict:
    return {
        "fig2a": {
            "name": "fig2a",
            "model": "lambda",
            "fixed": {"omega": 10.0},
            "sweep": [dict(_KAPPA_61), dict(_OMEGA_R_49)],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
            "description": "Filtered second-order correlation vs bandwidth and shelving drive at strong optical drive.",
        },
        "fig2b": {
            "name": "fig2b",
            "model": "lambda",
            "fixed": {"kappa": 1.0},
            "sweep": [dict(_OMEGA_49), dict(_OMEGA_R_49)],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
            "description": "Filtered second-order correlation vs both drive strengths at unit bandwidth.",
        },
        "fig2cd": {
            "name": "fig2cd",
            "model": "lambda",
            "fixed": {"omega": 10.0, "omega_r": 0.1},
            "sweep": [],
            "quantities": ["g2_tau", "conditional"],
            "description": "Frequency-blind correlation and conditional excitation vs delay.",
        },
        "fig3": {
            "name": "fig3",
            "model": "lambda",
            "fixed": {"omega_r_ratio": 1e-3},
            "sweep": [
                dict(_KAPPA_61),
                {"param": "omega", "scale": "log", "min": 0.1, "max": 10.0, "count": 2},
            ],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
            "description": "Bandwidth scans in the weak- and strong-drive regimes (shelving drive locked to 1e-3 of the optical drive).",
        },
        "fig3a": {
            "name": "fig3a",
            "model": "lambda",
            "fixed": {"omega": 10.0, "omega_r": 1e-2},
            "sweep": [],
            "quantities": ["g2_tau"],
            "description": "Frequency-blind correlation vs delay, strong drive.",
        },
        "fig3c": {
            "name": "fig3c",
            "model": "lambda",
            "fixed": {"omega": 0.1, "omega_r": 1e-4},
            "sweep": [],
            "quantities": ["g2_tau"],
            "description": "Frequency-blind correlation vs delay, weak drive.",
        },
        "fig4": {
            "name": "fig4",
            "model": "lambda",
            "fixed": {"omega": 100.0, "omega_r": 0.1},
            "sweep": [dict(_KAPPA_61)],
            "quantities": ["g2", "g3", "g4"],
            "description": "Filtered correlations of orders 2-4 vs bandwidth at strong drive.",
        },
        "fig5b": {
            "name": "fig5b",
            "model": "rb87",
            "fixed": {"v_eg": 10.0},
            "sweep": [dict(_KAPPA_61), dict(_OMEGA_B_49)],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
            "description": "Rubidium realization: filtered second-order correlation vs bandwidth and magnetic mixing.",
        },
        "fig5c": {
            "name": "fig5c",
            "model": "rb87",
            "fixed": {"v_eg": 100.0, "omega_b_field": 0.1},
            "sweep": [dict(_KAPPA_61)],
            "quantities": ["g2", "g3", "g4"],
            "description": "Rubidium realization: filtered correlations of orders 2-4 vs bandwidth.",
        },
        "fig5e": {
            "name": "fig5e",
            "model": "cavity",
            "fixed": {"omega": 100.0, "omega_r": 1e-2},
            "sweep": [dict(_KAPPA_61), dict(_GC_41)],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
            "description": "Cavity field: second-order correlation vs bandwidth and physical coupling.",
        },
        "fig5f": {
            "name": "fig5f",
            "model": "cavity",
            "fixed": {"omega": 100.0, "omega_r": 0.1, "g_c": 1e-2},
            "sweep": [dict(_KAPPA_61)],
            "quantities": ["g2", "g3", "g4"],
            "description": "Cavity field: correlations of orders 2-4 vs bandwidth at weak coupling.",
        },
        "fig6a": {
            "name": "fig6a",
            "model": "lambda",
            "fixed": {"omega": 10.0},
            "sweep": [dict(_KAPPA_61), dict(_OMEGA_R_49)],
            "quantities": ["Q"],
            "solver": {"n_max": 3},
            "description": "Quality of the filtered field vs bandwidth and shelving drive.",
        },
        "fig6b": {
            "name": "fig6b",
            "model": "lambda",
            "fixed": {"kappa": 1.0},
            "sweep": [dict(_OMEGA_49), dict(_OMEGA_R_49)],
            "quantities": ["Q"],
            "solver": {"n_max": 3},
            "description": "Quality of the filtered field vs both drive strengths.",
        },
        "fig6c": {
            "name": "fig6c",
            "model": "lambda",
            "fixed": {"omega_r": 1e-4},
            "sweep": [dict(_KAPPA_61), dict(_OMEGA_49)],
            "quantities": ["Q"],
            "solver": {"n_max": 3},
            "description": "Quality of the filtered field vs bandwidth and optical drive.",
        },
        "fig7": {
            "name": "fig7",
            "model": "lambda",
            # the reference panel leaves the bandwidth open; kappa = 1 chosen
            "fixed": {"omega": 1e4, "omega_r": 10.0, "kappa": 1.0},
            "sweep": [
                {
                    "param": "delta_b",
                    "scale": "linear",
                    "min": -3 * _OBAR_FIG7,
                    "max": 3 * _OBAR_FIG7,
                    "count": 241,
                }
            ],
            "quantities": ["g2"],
            "description": "Filtered second-order correlation vs filter detuning across the dressed-state sidebands.",
        },
    }


def preset_names() -> list:
    return sorted(_preset_dicts())


def load_scenario(source) -> Scenario:
    """Load a scenario by preset name, from a JSON file path, or from a dict."""
    if isinstance(source, dict):
        return scenario_from_dict(source)
    presets = _preset_dicts()
    if source in presets:
        return scenario_from_dict(presets[source])
    path = os.fspath(source)
    if not os.path.exists(path):
        raise ScenarioValidationError(
            [f"{source!r} is neither an embedded preset ({', '.join(sorted(presets))}) nor an existing file"]
        )
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioValidationError([f"could not parse {path}: {exc}"]) from exc
    return scenario_from_dict(data)


# ---------------------------------------------------------------------------
# Evaluation


def _lambda_params(p: dict) -> LambdaParams:
    omega = p["omega"]
    omega_r = p["omega_r"] if "omega_r" in p else p["omega_r_ratio"] * omega
    return LambdaParams(
        omega=omega,
        omega_r=omega_r,
        delta_a=p.get("delta_a", 0.0),
        delta_e=p.get("delta_e", 0.0),
        gamma1=p.get("gamma1", 1.0),
        gamma2=p.get("gamma2", 1.0),
    )


def _rb_params(p: dict) -> RbParams:
    return RbParams(
        v_eg=p["v_eg"],
        omega_b_field=p["omega_b_field"],
        delta_e=p.get("delta_e", 0.0),
        delta_s=p.get("delta_s", 0.0),
        gamma_total=p.get("gamma_total", 1.0),
    )


def _point_columns(s: Scenario) -> list:
    cols = [p for p, _ in s.sweep_axes]
    for q in s.quantities:
        cols.append(q)
    cols += ["g_c_used", "n_max_used", "converged", "error"]
    return cols


def _curve_columns(s: Scenario) -> list:
    cols = ["tau"]
    if "g2_tau" in s.quantities:
        cols.append("g2_sigma")
    if "conditional" in s.quantities:
        cols.append("rho_ee_c")
    cols += ["converged", "error"]
    return cols


def _evaluate_point(scenario: Scenario, point: dict) -> tuple:
    """One grid point -> row tail (quantity values + provenance)."""
    orders = sorted({int(_GN_RE.match(q).group(1)) for q in scenario.quantities if _GN_RE.match(q)})
    needs_g2 = "Q" in scenario.quantities
    solve_orders = sorted(set(orders) | ({2} if needs_g2 else set()))
    solver = scenario.solver_map

    try:
        if scenario.model == "rb87":
            params = _rb_params(point)
        else:
            params = _lambda_params(point)
        values = {}
        g_c_used = float("nan")
        n_max_used = -1
        converged = True
        if solve_orders:
            sensor = SensorConfig(
                kappa=point["kappa"],
                g_c=point.get("g_c", solver.get("g_c", DEFAULT_COUPLING)),
                delta_b=point.get("delta_b", 0.0) if scenario.model != "rb87" else 0.0,
                n_max=solver.get("n_max"),
            )
            if scenario.model == "cavity":
                res = cavity_gn_orders(params, sensor, solve_orders)
            else:
                res = filtered_gn_orders(params, sensor, solve_orders)
            for k in orders:
                values[f"g{k}"] = res[k].value
            any_res = res[solve_orders[0]]
            g_c_used = any_res.g_c_used
            n_max_used = any_res.n_max_used
            converged = all(r.converged for r in res.values())
            if needs_g2:
                values["Q"] = res[2].value * stationary_excited_population(params)
        if "rho_ee" in scenario.quantities:
            values["rho_ee"] = stationary_excited_population(params)
        tail = [values[q] for q in scenario.quantities]
        return tuple(tail) + (g_c_used, n_max_used, int(converged), "")
    except (ShelvesimError, ValueError, FloatingPointError) as exc:
        nan = float("nan")
        tail = [nan for _ in scenario.quantities]
        reason = f"{type(exc).__name__}: {exc}"
        return tuple(tail) + (nan, -1, 0, reason.replace("\n", " "))


def _grid_points(scenario: Scenario):
    fixed = scenario.fixed_map
    axes = [(p, spec.points()) for p, spec in scenario.sweep_axes]
    if not axes:
        return [dict(fixed)]
    out = []
    if len(axes) == 1:
        p0, pts0 = axes[0]
        for v0 in pts0:
            d = dict(fixed)
            d[p0] = float(v0)
            out.append(d)
    else:
        (p0, pts0), (p1, pts1) = axes
        for v0 in pts0:
            for v1 in pts1:
                d = dict(fixed)
                d[p0] = float(v0)
                d[p1] = float(v1)
                out.append(d)
    return out


def _worker_eval(args):
    scenario, point = args
    t0 = time.perf_counter()
    tail = _evaluate_point(scenario, point)
    return tail, time.perf_counter() - t0


def _run_curve_scenario(scenario: Scenario) -> SweepResult:
    params = _lambda_params(scenario.fixed_map)
    model = build_lambda_emitter(params)
    grid = default_tau_grid(params)
    t0 = time.perf_counter()
    series = {}
    if "g2_tau" in scenario.quantities:
        series["g2_sigma"] = g2_sigma_tau(model, grid).values
    if "conditional" in scenario.quantities:
        series["rho_ee_c"] = conditional_excitation(model, grid).values
    elapsed = time.perf_counter() - t0
    cols = _curve_columns(scenario)
    rows = []
    for i, tau in enumerate(grid):
        row = [float(tau)]
        if "g2_sigma" in series:
            row.append(float(series["g2_sigma"][i]))
        if "rho_ee_c" in series:
            row.append(float(series["rho_ee_c"][i]))
        row += [1, ""]
        rows.append(tuple(row))
    meta = _result_meta(scenario)
    meta["tau_grid"] = {"scale": "log", "min": grid[0], "max": grid[-1], "count": len(grid)}
    return SweepResult(
        scenario=scenario.name,
        columns=cols,
        rows=rows,
        meta=meta,
        wall_times=[elapsed / len(grid)] * len(grid),
    )


def _result_meta(scenario: Scenario) -> dict:
    solver = scenario.solver_map
    return {
        "scenario": scenario_to_dict(scenario),
        "toolkit_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "solver": {
            "g_c_requested": solver.get("g_c"),
            "n_max_requested": solver.get("n_max"),
        },
    }


def default_worker_count() -> int:
    env = os.environ.get("SHELVESIM_WORKERS")
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return 1


def run_sweep(scenario: Scenario, workers: int | None = None) -> SweepResult:
    """Evaluate every grid point of a scenario.

    Results are identical for any positive ``workers`` count; grid points
    that fail numerically are flagged in their row and never abort the sweep.
    """
    if workers is None:
        workers = default_worker_count()
    if workers < 1:
        raise ValueError("workers must be a positive integer")
    if any(q in _CURVE_QUANTITIES for q in scenario.quantities):
        return _run_curve_scenario(scenario)

    points = _grid_points(scenario)
    tasks = [(scenario, pt) for pt in points]
    if workers == 1 or len(points) <= 1:
        evaluated = [_worker_eval(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            evaluated = list(pool.map(_worker_eval, tasks, chunksize=chunk))

    cols = _point_columns(scenario)
    axis_names = [p for p, _ in scenario.sweep_axes]
    rows = []
    times = []
    for pt, (tail, dt) in zip(points, evaluated):
        head = tuple(float(pt[p]) for p in axis_names)
        rows.append(head + tail)
        times.append(dt)
    return SweepResult(
        scenario=scenario.name,
        columns=cols,
        rows=rows,
        meta=_result_meta(scenario),
        wall_times=times,
    )


# ---------------------------------------------------------------------------
# Serialization


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def emit_results(result: SweepResult, fmt: str, path) -> None:
    """Write a sweep result as CSV (17 significant digits, LF endings) or JSON."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        if fmt == "csv":
            import csv as _csv

            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = _csv.writer(fh, lineterminator="\n")
                writer.writerow(result.columns)
                for row in result.rows:
                    writer.writerow([_format_cell(v) for v in row])
        else:
            payload = {
                "meta": dict(result.meta, scenario_name=result.scenario),
                "rows": [
                    {c: (float(v) if isinstance(v, (np.floating,)) else v)
                     for c, v in zip(result.columns, row)}
                    for row in result.rows
                ],
            }
            with open(path, "w", encoding="utf-8", newline="") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
    except OSError as exc:
        raise ShelvesimError(f"could not write {fmt} output to {path}: {exc}") from exc
