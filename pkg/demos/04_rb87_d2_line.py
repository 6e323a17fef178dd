"""The rubidium-87 D2 realization.

A sigma+ laser cycles |1,-1> <-> |0,0| while a weak transverse magnetic field
plays the shelving drive: population hides in |1,0> and |1,1>, and the
filtered emission on the cycling transition superbunches exactly like the
three-level emitter.
"""

from shelvesim import (
    RbParams,
    SensorConfig,
    build_rb87_system,
    expectation,
    filtered_gn_orders,
    liouvillian_of,
    steady_state,
)

p = RbParams(v_eg=100.0, omega_b_field=0.1)

model = build_rb87_system(p, SensorConfig(kappa=1.0, n_max=2))
rho = steady_state(liouvillian_of(model))
print("stationary populations:")
for name in ("pop_1,-1", "pop_1,0", "pop_1,1", "sigma_ee"):
    print(f"  {name:10s} {expectation(model.observable(name), rho).real:.6g}")

res = filtered_gn_orders(p, SensorConfig(kappa=1.0), [2, 3])
for n in (2, 3):
    r = res[n]
    print(f"g{n}(0) of the cycling emission = {r.value:.5g} (converged: {r.converged})")
