"""CO2 emissions from primary energy and electricity consumption.

Units are fixed: coal and oil in kg, natural gas in m^3, electricity in kWh;
results in kgCO2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from cfindex import errors

FUEL_FACTORS = MappingProxyType({
    "coal": 1.978,         # kgCO2/kg
    "oil": 3.065,          # kgCO2/kg
    "natural_gas": 1.809,  # kgCO2/m3
})

FUEL_UNITS = MappingProxyType({"coal": "kgCO2/kg", "oil": "kgCO2/kg", "natural_gas": "kgCO2/m3"})

GRID_FACTORS = MappingProxyType({  # kgCO2/kWh
    "north_china": 0.8843,
    "northeast_china": 0.7769,
    "east_china": 0.7035,
    "central_china": 0.5257,
    "northwest_china": 0.6671,
    "china_southern": 0.5271,
})

PILOT_GRIDS = MappingProxyType({
    "BJ": "north_china",
    "SH": "east_china",
    "GD": "china_southern",
})


@dataclass(frozen=True)
class EmissionFactorTable:
    fuels: Mapping[str, float] = field(default_factory=lambda: dict(FUEL_FACTORS))
    grids: Mapping[str, float] = field(default_factory=lambda: dict(GRID_FACTORS))

    def __post_init__(self):
        missing = set(FUEL_FACTORS) - set(self.fuels)
        if missing:
            raise errors.ConfigError(f"factor table lacks fuels {sorted(missing)}")
        for key, v in {**self.fuels, **self.grids}.items():
            if not (math.isfinite(v) and v > 0):
                raise errors.ConfigError(f"emission factor {key!r} must be positive, got {v!r}")
        object.__setattr__(self, "fuels", MappingProxyType(dict(self.fuels)))
        object.__setattr__(self, "grids", MappingProxyType(dict(self.grids)))

    @classmethod
    def from_csv(cls, path) -> "EmissionFactorTable":
        """Start from the built-in factors and override rows of a ``key,unit,factor`` file.

        Keys naming a fuel override that fuel; ``kgCO2/kWh`` rows are grid
        regions, and new region keys are added to the enumeration.
        """
        fuels, grids = dict(FUEL_FACTORS), dict(GRID_FACTORS)
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if set(reader.fieldnames or ()) < {"key", "unit", "factor"}:
                raise errors.ConfigError(f"{path}: expected columns key,unit,factor")
            for row in reader:
                key, unit = row["key"].strip(), row["unit"].strip()
                try:
                    factor = float(row["factor"])
                except ValueError:
                    raise errors.ConfigError(f"{path}: bad factor {row['factor']!r}") from None
                if key in fuels:
                    if unit != FUEL_UNITS[key]:
                        raise errors.ConfigError(f"{path}: {key} must be in {FUEL_UNITS[key]}")
                    fuels[key] = factor
                elif unit == "kgCO2/kWh":
                    grids[key] = factor
                else:
                    raise errors.ConfigError(f"{path}: unknown factor key {key!r} ({unit})")
        return cls(fuels, grids)


DEFAULT_FACTORS = EmissionFactorTable()


def estimate_emissions(coal_kg, oil_kg, gas_m3, electricity_kwh, grid_region,
                       factors: EmissionFactorTable = DEFAULT_FACTORS,
                       pilot_grids: Mapping[str, str] = PILOT_GRIDS) -> float:
    """Sum of quantity x factor; ``grid_region`` may also be a pilot code such as ``"BJ"``."""
    quantities = {"coal": coal_kg, "oil": oil_kg, "natural_gas": gas_m3,
                  "electricity": electricity_kwh}
    for name, q in quantities.items():
        if not q >= 0:
            raise errors.NegativeQuantity(f"{name} quantity must be >= 0, got {q!r}")
    region = pilot_grids.get(grid_region, grid_region)
    try:
        grid = factors.grids[region]
    except KeyError:
        raise errors.UnknownGridRegion(
            f"unknown grid region {grid_region!r}; expected one of {sorted(factors.grids)}"
        ) from None
    f = factors.fuels
    return (coal_kg * f["coal"] + oil_kg * f["oil"] + gas_m3 * f["natural_gas"]
            + electricity_kwh * grid)
