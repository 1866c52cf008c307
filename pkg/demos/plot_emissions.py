"""
Carbon dioxide from an energy bundle
====================================

Fuel use is converted with fixed factors and electricity with the grid
factor of the region's power network.
"""

# %%
from cfindex import EmissionFactorTable, estimate_emissions
from cfindex.emissions import FUEL_FACTORS, GRID_FACTORS, PILOT_GRIDS

print(FUEL_FACTORS)
print(GRID_FACTORS)

# %%
# Ten kilograms of coal, five of oil, twenty cubic metres of gas and thirty
# kWh from the North China grid.

print(round(estimate_emissions(10, 5, 20, 30, "north_china"), 3))

# %%
# A pilot region can be given instead of a grid; it is looked up in the
# pilot-to-grid table.

for pilot, grid in PILOT_GRIDS.items():
    print(pilot, grid, round(estimate_emissions(0, 0, 0, 1000, pilot), 1))

# %%
# Custom factors replace the defaults. Here coal is made cleaner.

table = EmissionFactorTable({**FUEL_FACTORS, "coal": 1.5}, GRID_FACTORS)
print(round(estimate_emissions(10, 5, 20, 30, "north_china", factors=table), 3))
