"""Run configuration: one YAML file naming the data, hierarchy and every switch.

Relative paths resolve against the directory holding the config file.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from cfindex import errors
from cfindex.aggregate import METHODS, AggregationMethod
from cfindex.core import HierarchySpec, IndicatorSpec, Polarity, Prep
from cfindex.panel import DEFAULT_REGRESSORS
from cfindex.pipeline import PipelineOptions


@dataclass(frozen=True)
class RegressionConfig:
    data: Path | None = None
    regressors: tuple[str, ...] = DEFAULT_REGRESSORS
    response: str = "cfi"
    time_effects: bool = False
    effects: str = "entity"
    hausman_threshold: float = 0.05
    simulate: dict | None = None


@dataclass(frozen=True)
class Rounding:
    index: int = 3
    ssm: int = 4
    regression: int = 6


@dataclass(frozen=True)
class RunConfig:
    dataset: Path | None
    hierarchy: HierarchySpec | None
    options: PipelineOptions
    entities: tuple[str, ...] | None = None
    years: tuple[int, ...] | None = None
    regression: RegressionConfig = field(default_factory=RegressionConfig)
    output: Path | None = None
    rounding: Rounding = field(default_factory=Rounding)

    def resolved(self) -> dict[str, Any]:
        """Plain-data echo of the configuration, for the run manifest."""
        h = None
        if self.hierarchy is not None:
            by_id = {i.id: i for i in self.hierarchy.indicators}
            h = {"top": self.hierarchy.top, "groups": [
                {"id": g.id, "label": g.label, "indicators": [
                    {"id": m, "label": by_id[m].label, "polarity": by_id[m].polarity.value,
                     "prep": by_id[m].prep.value} for m in g.members]}
                for g in self.hierarchy.groups]}
        o = self.options
        reg = asdict(self.regression)
        reg["data"] = None if self.regression.data is None else self.regression.data.name
        reg["regressors"] = list(reg["regressors"])
        return {
            "dataset": None if self.dataset is None else self.dataset.name,
            "entities": None if self.entities is None else list(self.entities),
            "years": None if self.years is None else list(self.years),
            "hierarchy": h,
            "normalization": o.normalization,
            "weighting": o.weighting,
            "methods": [m.value for m in o.candidates],
            "ssm_input": o.ssm_input,
            "renormalize_top": o.renormalize_top,
            "r0": None if o.r0 is None else list(o.r0),
            "regression": reg,
            "rounding": asdict(self.rounding),
        }


_TOP_KEYS = {"dataset", "entities", "years", "hierarchy", "normalization", "weighting",
             "methods", "ssm_input", "renormalize_top", "r0", "regression", "output", "rounding"}


def _enum(cls, value, what):
    try:
        return cls(str(value).lower())
    except ValueError:
        raise errors.ConfigError(f"invalid {what} {value!r}") from None


def _hierarchy(raw) -> HierarchySpec:
    if not isinstance(raw, dict) or "groups" not in raw:
        raise errors.ConfigError("hierarchy must be a mapping with a 'groups' list")
    groups = []
    for g in raw["groups"]:
        members = []
        for ind in g.get("indicators", []):
            if isinstance(ind, str):
                ind = {"id": ind}
            members.append(IndicatorSpec(
                str(ind["id"]), str(ind.get("label", ind["id"])),
                _enum(Polarity, ind.get("polarity", "benefit"), "polarity"),
                str(g["id"]),
                _enum(Prep, ind.get("prep", "none"), "prep"),
            ))
        groups.append((str(g["id"]), str(g.get("label", g["id"])), members))
    return HierarchySpec.from_groups(groups, str(raw.get("top", "CFI")))


def parse_config(raw: dict, base: Path = Path(".")) -> RunConfig:
    if not isinstance(raw, dict):
        raise errors.ConfigError("configuration must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise errors.ConfigError(f"unknown configuration keys {sorted(unknown)}")

    def path(v):
        return None if v is None else (base / str(v))

    try:
        options = PipelineOptions(
            normalization=str(raw.get("normalization", "maut")).lower(),
            weighting=str(raw.get("weighting", "cv")).lower(),
            candidates=tuple(raw.get("methods", [m.value for m in METHODS])),
            ssm_input=str(raw.get("ssm_input", "raw")).lower(),
            renormalize_top=bool(raw.get("renormalize_top", False)),
            r0=raw.get("r0"),
        )
        reg_raw = dict(raw.get("regression") or {})
        bad = set(reg_raw) - {f for f in RegressionConfig.__dataclass_fields__}
        if bad:
            raise errors.ConfigError(f"unknown regression keys {sorted(bad)}")
        reg = RegressionConfig(
            data=path(reg_raw.get("data")),
            regressors=tuple(reg_raw.get("regressors", DEFAULT_REGRESSORS)),
            response=str(reg_raw.get("response", "cfi")),
            time_effects=bool(reg_raw.get("time_effects", False)),
            effects=str(reg_raw.get("effects", "entity")),
            hausman_threshold=float(reg_raw.get("hausman_threshold", 0.05)),
            simulate=reg_raw.get("simulate"),
        )
        if reg.effects not in ("entity", "time"):
            raise errors.ConfigError(f"regression.effects must be entity or time, got {reg.effects!r}")
        rounding = Rounding(**(raw.get("rounding") or {}))
        hierarchy = _hierarchy(raw["hierarchy"]) if raw.get("hierarchy") is not None else None
        entities = raw.get("entities")
        years = raw.get("years")
        return RunConfig(
            dataset=path(raw.get("dataset")),
            hierarchy=hierarchy,
            options=options,
            entities=None if entities is None else tuple(str(e) for e in entities),
            years=None if years is None else tuple(int(y) for y in years),
            regression=reg,
            output=path(raw.get("output")),
            rounding=rounding,
        )
    except errors.CfiError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise errors.ConfigError(f"invalid configuration: {exc}") from None


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise errors.ConfigError(f"cannot read configuration {path}: {exc}") from None
    return parse_config(raw, path.parent)
