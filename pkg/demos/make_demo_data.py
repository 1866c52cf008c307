"""
Generate the synthetic demo inputs
==================================

The published indicator data behind the carbon finance index is not
available, so the demos run on synthetic data with the same shape: three
pilot regions, eight indicators in two groups, 2015-2020. A driver table
for the panel regression is generated alongside.
"""

# %%
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent / "data"
rng = np.random.default_rng(2015)

pilots = ["BJ", "GD", "SH"]
years = range(2015, 2021)
scales = {
    "quota": 5e3, "ccer": 1e3, "price_sd": 2.0, "days": 240.0,
    "issuance": 80.0, "institutions": 0.5, "emissions": 3e5, "loan_rate": 5.0,
}

# %%
# Long-format indicator file: one row per (entity, year, indicator).
lines = ["entity,year,indicator,value"]
for e in pilots:
    level = rng.uniform(0.7, 1.3)
    for t, y in enumerate(years):
        for ind, s in scales.items():
            v = s * level * rng.lognormal(0.0, 0.25) * (1 + 0.04 * t)
            lines.append(f"{e},{y},{ind},{v:.6g}")
(HERE / "indicators.csv").write_text("\n".join(lines) + "\n")

# %%
# Driver table for the regression: the response depends on energy mix and
# patents, with a region effect.
rows = ["entity,year,cfi,psi,patent,size,location,energy"]
regions = [f"R{i:02d}" for i in range(12)]
for i, e in enumerate(regions):
    loc = int(i % 3 != 0)
    effect = rng.normal(0, 0.02)
    for y in range(2014, 2021):
        psi = rng.uniform(0.15, 0.5)
        patent = rng.uniform(4, 16)
        size = rng.uniform(2e4, 1.5e5)
        energy = rng.uniform(0.01, 0.36)
        cfi = 0.05 + 0.4 * energy + 0.006 * patent + 3e-7 * size + effect + rng.normal(0, 0.015)
        rows.append(f"{e},{y},{cfi:.6f},{psi:.6f},{patent:.4f},{size:.2f},{loc},{energy:.6f}")
(HERE / "drivers.csv").write_text("\n".join(rows) + "\n")
print("wrote", *sorted(p.name for p in HERE.glob("*.csv")))
