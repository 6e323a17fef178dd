"""Regenerate tests/oracles/sensor_reference.json.

Independent oracle for the filtered-correlation solver: the cascade
steady state is solved in 40-digit arithmetic with mpmath's generic LU,
with no grading, no refinement, and no shared code with the package
solver beyond the model matrices themselves.  Slow (minutes); run
manually when the reference cases change.

Usage: python tests/oracles/generate_sensor_reference.py
"""

import json
import pathlib

import numpy as np
from mpmath import mp, mpc, mpf, matrix, lu_solve

from shelvesim.correlations import liouvillian_of
from shelvesim.models import (
    LambdaParams,
    RbParams,
    SensorConfig,
    build_cavity_qed,
    build_rb87_system,
)

mp.dps = 40


def steady_moments_mp(model, orders):
    lm = liouvillian_of(model).entries
    d = model.dim
    d2 = d * d
    a = matrix(d2, d2)
    for i in range(d2):
        for j in range(d2):
            a[i, j] = mpc(lm[i, j].real, lm[i, j].imag)
    for j in range(d2):
        a[0, j] = mpc(1) if j % (d + 1) == 0 else mpc(0)
    rhs = matrix(d2, 1)
    rhs[0] = mpc(1)
    x = lu_solve(a, rhs)

    _, nf = model.hilbert_factors
    moments = {}
    for k in sorted(set(orders) | {1}):
        acc = mpf(0)
        for idx in range(d):
            n = idx % nf
            if n < k:
                continue
            w = mpf(1)
            for t in range(k):
                w *= n - t
            acc += x[idx + idx * d].real * w
        moments[k] = acc
    return {k: float(moments[k] / moments[1] ** k) for k in orders}


def main():
    cases = []

    def lam(name, omega, omega_r, kappa, g_c, n_max, orders, delta_b=0.0):
        model = build_cavity_qed(
            LambdaParams(omega=omega, omega_r=omega_r),
            SensorConfig(kappa=kappa, g_c=g_c, delta_b=delta_b, n_max=n_max),
        )
        cases.append({
            "name": name,
            "model": "lambda",
            "params": {"omega": omega, "omega_r": omega_r, "kappa": kappa,
                       "g_c": g_c, "n_max": n_max, "delta_b": delta_b},
            "values": steady_moments_mp(model, orders),
        })

    def rb(name, v_eg, omega_b, kappa, g_c, n_max, orders):
        model = build_rb87_system(
            RbParams(v_eg=v_eg, omega_b_field=omega_b),
            SensorConfig(kappa=kappa, g_c=g_c, n_max=n_max),
        )
        cases.append({
            "name": name,
            "model": "rb87",
            "params": {"v_eg": v_eg, "omega_b_field": omega_b, "kappa": kappa,
                       "g_c": g_c, "n_max": n_max},
            "values": steady_moments_mp(model, orders),
        })

    lam("superbunching_orders23", 10.0, 0.1, 1.0, 1e-3, 4, [2, 3])
    lam("broadband", 10.0, 0.1, 1e3, 1e-3, 3, [2])
    lam("narrowband", 10.0, 0.1, 1e-3, 1e-3, 3, [2])
    lam("detuned_filter", 10.0, 0.1, 1.0, 1e-3, 3, [2], delta_b=20.0)
    lam("cavity_unit_coupling", 100.0, 1e-2, 1.0, 1.0, 3, [2])
    rb("rb_mixing", 10.0, 0.5, 1.0, 1e-3, 2, [2])

    out = pathlib.Path(__file__).with_name("sensor_reference.json")
    payload = {c["name"]: c for c in cases}
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} with {len(cases)} cases")


if __name__ == "__main__":
    main()
