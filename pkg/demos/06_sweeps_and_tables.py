"""Scenario sweeps and deterministic tables.

Presets carry the parameter sets behind the reference figure panels; any of
them (or a custom JSON scenario) runs through the same engine and lands in a
CSV whose bytes are independent of the worker count.  The same run is
available from the shell:

    shelvesim run --scenario fig4 --out fig4.csv
    shelvesim gn --omega 10 --omega-r 0.1 --kappa 1 --order 2
"""

import tempfile
from pathlib import Path

from shelvesim import emit_results, load_scenario, preset_names, run_sweep

print("embedded presets:", ", ".join(preset_names()))

scenario = load_scenario("fig4")
print(f"\nrunning {scenario.name}: {scenario.description}")
result = run_sweep(scenario, workers=1)
print("columns:", result.columns)
print("rows:", len(result.rows), " total wall time:", f"{sum(result.wall_times):.1f}s")

out = Path(tempfile.mkdtemp()) / "fig4.csv"
emit_results(result, "csv", out)
print("wrote", out, f"({out.stat().st_size} bytes)")

# the larger-order curves dominate everywhere on the sweep
peak = max(result.rows, key=lambda r: r[result.columns.index("g2")])
row = dict(zip(result.columns, peak))
print("peak row:", {k: row[k] for k in ("kappa", "g2", "g3", "g4", "converged")})
