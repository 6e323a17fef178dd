"""From filter stand-in to physical cavity.

The same cascade read at finite coupling describes a driven emitter in a
lossy cavity.  Backaction leaves the giant correlation untouched through the
weak and intermediate coupling regimes and erodes it only deep in the
strong-coupling regime.
"""

import numpy as np

from shelvesim import LambdaParams, SensorConfig, cavity_gn

p = LambdaParams(omega=100.0, omega_r=1e-2)

print(f"{'g_c':>10} {'g2(0)':>14} {'n_max used':>10} {'converged':>10}")
for gc in np.logspace(-2, 2, 9):
    res = cavity_gn(p, SensorConfig(kappa=1.0, g_c=float(gc)), 2)
    print(f"{gc:10.2e} {res.value:14.6g} {res.n_max_used:10d} {str(res.converged):>10}")
