"""Frequency-filtered correlations from the emitter-sensor cascade.

Sweeping the sensor bandwidth interpolates between the antibunched raw
fluorescence (broadband), a giant superbunching window around the lifetime
scale, and slow decay of the bunching as the filter integrates past the
blinking period (narrowband).
"""

import numpy as np

from shelvesim import LambdaParams, SensorConfig, filtered_gn, steady_state_analytic

p = LambdaParams(omega=10.0, omega_r=0.1)
print("stationary excitation:", steady_state_analytic(p).rho_ee)
print(f"\n{'kappa':>10} {'g2(0)':>12} {'converged':>10} {'g_c used':>10} {'n_max':>6}")
for kappa in np.logspace(-3, 4, 15):
    res = filtered_gn(p, SensorConfig(kappa=float(kappa)), 2)
    print(f"{kappa:10.2e} {res.value:12.5g} {str(res.converged):>10} "
          f"{res.g_c_used:10.2e} {res.n_max_used:6d}")

print("\nhigher orders at omega = 100, omega_r = 0.1, kappa = 1:")
from shelvesim import filtered_gn_orders

strong = LambdaParams(omega=100.0, omega_r=0.1)
rho_ee = steady_state_analytic(strong).rho_ee
res = filtered_gn_orders(strong, SensorConfig(kappa=1.0), [2, 3, 4])
for n in (2, 3, 4):
    print(f"  g{n}(0) = {res[n].value:10.4g}   (1/rho_ee)^{n - 1} = {rho_ee ** (1 - n):10.4g}")
