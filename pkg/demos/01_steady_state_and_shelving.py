"""Stationary state of the shelving emitter: closed form vs nullspace solve.

With a strong optical drive and a weak shelving drive, almost all population
sits in the undriven ground state; the excited population that normalizes the
photon correlations is tiny.
"""

import numpy as np

from shelvesim import (
    LambdaParams,
    build_lambda_emitter,
    liouvillian_of,
    steady_state,
    steady_state_analytic,
)

p = LambdaParams(omega=10.0, omega_r=0.1)

analytic = steady_state_analytic(p)
numeric = steady_state(liouvillian_of(build_lambda_emitter(p)))

print("populations (g, a, e):")
print("  closed form :", analytic.rho_gg, analytic.rho_aa, analytic.rho_ee)
print("  nullspace   :", np.diag(numeric.entries).real)
print("max componentwise deviation:",
      np.max(np.abs(numeric.entries - analytic.to_matrix())))

print("\nshelving vs repump strength (omega = 10):")
print(f"{'omega_r':>10} {'rho_aa':>12} {'rho_ee':>12} {'1/rho_ee':>12}")
for omr in (1e-3, 1e-2, 1e-1, 1.0):
    an = steady_state_analytic(LambdaParams(omega=10.0, omega_r=omr))
    print(f"{omr:10.0e} {an.rho_aa:12.6f} {an.rho_ee:12.3e} {1 / an.rho_ee:12.4g}")
