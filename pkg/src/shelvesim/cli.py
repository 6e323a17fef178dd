"""Command-line interface.

Subcommands
-----------
run
    Evaluate a scenario (embedded preset name or JSON file) and write the
    result table as CSV or JSON.
gn
    Print a single frequency-filtered correlation value with its convergence
    record.
presets
    List the embedded scenarios, optionally exporting them as editable JSON.

Exit codes: 0 on success, 1 on usage or validation errors, 2 on numerical
failure (with ``--strict``, any unconverged result).
"""

import argparse
import json
import os
import sys

from . import __version__
from .correlations import MomentUnderflowError, cavity_gn, filtered_gn
from .models import RbParams, LambdaParams, SensorConfig
from .operators import ShelvesimError
from .sweep import (
    SCHEMA_VERSION,
    ScenarioValidationError,
    _preset_dicts,
    default_worker_count,
    emit_results,
    load_scenario,
    run_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shelvesim",
        description="Shelving-emitter photon correlation toolkit",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"shelvesim {__version__} (schema {SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep scenario and write a table")
    run.add_argument("--scenario", required=True, help="embedded preset name or path to a JSON scenario file")
    run.add_argument("--out", required=True, help="output file path")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--workers", type=int, default=None,
                     help="worker processes (default: SHELVESIM_WORKERS or 1)")
    run.add_argument("--strict", action="store_true",
                     help="exit with code 2 if any row is unconverged")

    gn = sub.add_parser("gn", help="print one filtered correlation value")
    gn.add_argument("--model", choices=("lambda", "rb87", "cavity"), default="lambda")
    gn.add_argument("--omega", type=float, help="optical drive (lambda/cavity)")
    gn.add_argument("--omega-r", type=float, help="shelving drive (lambda/cavity)")
    gn.add_argument("--v-eg", type=float, help="sigma+ interaction energy (rb87)")
    gn.add_argument("--omega-b-field", type=float, help="magnetic mixing strength (rb87)")
    gn.add_argument("--delta-e", type=float, default=0.0)
    gn.add_argument("--delta-s", type=float, default=0.0, help="sensor detuning (rb87)")
    gn.add_argument("--kappa", type=float, required=True)
    gn.add_argument("--order", type=int, default=2)
    gn.add_argument("--gc", type=float, default=None, help="sensor coupling override")
    gn.add_argument("--nmax", type=int, default=None, help="Fock truncation override")
    gn.add_argument("--delta-b", type=float, default=0.0, help="filter detuning (lambda/cavity)")
    gn.add_argument("--strict", action="store_true",
                    help="exit with code 2 if the value did not converge")

    pre = sub.add_parser("presets", help="list embedded scenarios")
    pre.add_argument("--export", metavar="DIR", default=None,
                     help="write each preset as an editable JSON file in DIR")
    return parser


def _cmd_run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    workers = args.workers if args.workers is not None else default_worker_count()
    if workers < 1:
        print("--workers must be a positive integer", file=sys.stderr)
        return EXIT_USAGE
    result = run_sweep(scenario, workers=workers)
    try:
        emit_results(result, args.format, args.out)
    except ShelvesimError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    n_bad = sum(1 for row in result.rows if row[result.columns.index("converged")] == 0)
    print(f"{scenario.name}: {len(result.rows)} rows -> {args.out}"
          + (f" ({n_bad} unconverged)" if n_bad else ""))
    if args.strict and n_bad:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_gn(args) -> int:
    sensor_kwargs = dict(kappa=args.kappa, delta_b=args.delta_b, n_max=args.nmax)
    if args.gc is not None:
        sensor_kwargs["g_c"] = args.gc
    try:
        if args.model == "rb87":
            if args.v_eg is None or args.omega_b_field is None:
                print("rb87 requires --v-eg and --omega-b-field", file=sys.stderr)
                return EXIT_USAGE
            if args.delta_b != 0.0:
                print("rb87 uses --delta-s for the sensor detuning", file=sys.stderr)
                return EXIT_USAGE
            params = RbParams(v_eg=args.v_eg, omega_b_field=args.omega_b_field,
                              delta_e=args.delta_e, delta_s=args.delta_s)
        else:
            if args.omega is None or args.omega_r is None:
                print(f"{args.model} requires --omega and --omega-r", file=sys.stderr)
                return EXIT_USAGE
            params = LambdaParams(omega=args.omega, omega_r=args.omega_r,
                                  delta_e=args.delta_e)
        sensor = SensorConfig(**sensor_kwargs)
        if args.model == "cavity":
            res = cavity_gn(params, sensor, args.order)
        else:
            res = filtered_gn(params, sensor, args.order)
    except MomentUnderflowError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ShelvesimError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(f"g{res.order}(0) = {res.value:.12g}")
    print(f"  converged: {'yes' if res.converged else 'NO'}"
          f"  g_c_used: {res.g_c_used:g}  n_max_used: {res.n_max_used}")
    if args.strict and not res.converged:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_presets(args) -> int:
    presets = _preset_dicts()
    for name in sorted(presets):
        d = presets[name]
        axes = ", ".join(ax["param"] for ax in d.get("sweep", [])) or "tau curve"
        print(f"{name:8s} [{d['model']:6s}] axes: {axes:24s} {d.get('description', '')}")
    if args.export:
        os.makedirs(args.export, exist_ok=True)
        for name, d in sorted(presets.items()):
            path = os.path.join(args.export, f"{name}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(d, fh, indent=2, sort_keys=True)
                fh.write("\n")
        print(f"exported {len(presets)} presets to {args.export}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "gn":
        return _cmd_gn(args)
    return _cmd_presets(args)


if __name__ == "__main__":
    sys.exit(main())
