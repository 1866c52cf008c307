"""Panel-data domain types, the two-level indicator hierarchy and data preparation."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from cfindex import errors


class Polarity(str, enum.Enum):
    BENEFIT = "benefit"
    COST = "cost"


class Prep(str, enum.Enum):
    NONE = "none"
    RECIPROCAL = "reciprocal"


class Stage(str, enum.Enum):
    RAW = "raw"
    NORMALIZED = "normalized"
    WEIGHTED = "weighted"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class IndicatorSpec:
    id: str
    label: str = ""
    polarity: Polarity = Polarity.BENEFIT
    group: str = ""
    prep: Prep = Prep.NONE

    def __post_init__(self):
        object.__setattr__(self, "polarity", Polarity(self.polarity))
        object.__setattr__(self, "prep", Prep(self.prep))
        if not self.label:
            object.__setattr__(self, "label", self.id)


@dataclass(frozen=True)
class Group:
    id: str
    label: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class HierarchySpec:
    """Indicators grouped into sub-indices, sub-indices combined into one top index.

    Exactly two levels. Each indicator belongs to exactly one group and no
    group is empty.
    """

    groups: tuple[Group, ...]
    indicators: tuple[IndicatorSpec, ...]
    top: str = "CFI"

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "indicators", tuple(self.indicators))
        ids = [ind.id for ind in self.indicators]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise errors.HierarchyError(f"duplicate indicator ids: {dupes}")
        gids = [g.id for g in self.groups]
        if len(set(gids)) != len(gids):
            raise errors.HierarchyError(f"duplicate group ids: {gids}")
        if not self.groups:
            raise errors.HierarchyError("hierarchy has no groups")
        seen: dict[str, str] = {}
        for g in self.groups:
            if not g.members:
                raise errors.HierarchyError(f"group {g.id!r} is empty")
            for mid in g.members:
                if mid not in ids:
                    raise errors.HierarchyError(f"group {g.id!r} lists unknown indicator {mid!r}")
                if mid in seen:
                    raise errors.HierarchyError(
                        f"indicator {mid!r} belongs to both {seen[mid]!r} and {g.id!r}"
                    )
                seen[mid] = g.id
        orphans = [i for i in ids if i not in seen]
        if orphans:
            raise errors.HierarchyError(f"indicators without a group: {orphans}")
        for ind in self.indicators:
            if ind.group and ind.group != seen[ind.id]:
                raise errors.HierarchyError(
                    f"indicator {ind.id!r} declares group {ind.group!r} but is listed under {seen[ind.id]!r}"
                )

    @classmethod
    def from_groups(cls, groups: Sequence[tuple[str, str, Sequence[IndicatorSpec]]], top="CFI"):
        """Build from ``(group id, label, [IndicatorSpec, ...])`` triples.

        The indicator order of the result is group order, then member order.
        """
        gs, inds = [], []
        for gid, label, members in groups:
            gs.append(Group(gid, label, tuple(m.id for m in members)))
            for m in members:
                inds.append(IndicatorSpec(m.id, m.label, m.polarity, gid, m.prep))
        return cls(tuple(gs), tuple(inds), top)

    def ordered_indicators(self) -> tuple[IndicatorSpec, ...]:
        by_id = {ind.id: ind for ind in self.indicators}
        out = []
        for g in self.groups:
            for mid in g.members:
                ind = by_id[mid]
                out.append(IndicatorSpec(ind.id, ind.label, ind.polarity, g.id, ind.prep))
        return tuple(out)

    def group(self, gid: str) -> Group:
        for g in self.groups:
            if g.id == gid:
                return g
        raise errors.HierarchyError(f"unknown group {gid!r}")


@dataclass(frozen=True)
class PanelDataset:
    """Dense entities x indicators x years array with indicator metadata."""

    entities: tuple[str, ...]
    years: tuple[int, ...]
    indicators: tuple[IndicatorSpec, ...]
    values: np.ndarray = field(repr=False)
    prepped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "years", tuple(int(y) for y in self.years))
        object.__setattr__(self, "indicators", tuple(self.indicators))
        v = _frozen(self.values)
        shape = (len(self.entities), len(self.indicators), len(self.years))
        if v.shape != shape:
            raise errors.DimensionMismatch(f"values shape {v.shape} != {shape}")
        if not np.all(np.isfinite(v)):
            i, j, t = np.argwhere(~np.isfinite(v))[0]
            raise errors.NonFiniteValue(
                self.entities[i], self.years[t], self.indicators[j].id, v[i, j, t]
            )
        object.__setattr__(self, "values", v)

    @property
    def indicator_ids(self) -> tuple[str, ...]:
        return tuple(ind.id for ind in self.indicators)

    def subset(self, indicator_ids: Sequence[str]) -> "PanelDataset":
        """Dataset restricted to ``indicator_ids`` (in that order)."""
        pos = {iid: k for k, iid in enumerate(self.indicator_ids)}
        try:
            idx = [pos[i] for i in indicator_ids]
        except KeyError as exc:
            raise errors.UnknownIndicator(exc.args[0]) from None
        return PanelDataset(
            self.entities, self.years, tuple(self.indicators[k] for k in idx),
            self.values[:, idx, :], self.prepped,
        )


@dataclass(frozen=True)
class DecisionMatrix:
    """One year's m x n matrix at a given processing stage."""

    entities: tuple[str, ...]
    indicators: tuple[str, ...]
    cells: np.ndarray = field(repr=False)
    stage: Stage = Stage.RAW

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "indicators", tuple(self.indicators))
        object.__setattr__(self, "stage", Stage(self.stage))
        c = _frozen(self.cells)
        if c.ndim != 2 or c.shape != (len(self.entities), len(self.indicators)):
            raise errors.DimensionMismatch(
                f"cells shape {c.shape} != ({len(self.entities)}, {len(self.indicators)})"
            )
        if not np.all(np.isfinite(c)):
            raise errors.DataError("decision matrix contains non-finite cells")
        if self.stage is Stage.NORMALIZED and c.size and (c.min() < 0 or c.max() > 1):
            raise errors.DataError("normalized cells must lie in [0, 1]")
        object.__setattr__(self, "cells", c)

    @property
    def shape(self):
        return self.cells.shape

    def with_cells(self, cells, stage: Stage) -> "DecisionMatrix":
        return DecisionMatrix(self.entities, self.indicators, cells, stage)


Record = tuple[str, int, str, float]


def validate_dataset(
    raw_records: Iterable[Record],
    indicators: Sequence[IndicatorSpec] | HierarchySpec,
    entities: Sequence[str] | None = None,
    years: Sequence[int] | None = None,
) -> PanelDataset:
    """Assemble long-format records into a complete :class:`PanelDataset`.

    Indicator order follows ``indicators`` (hierarchy order when a
    :class:`HierarchySpec` is given). Entities and years follow the declared
    ``entities``/``years`` when supplied, otherwise their sorted order, so the
    result does not depend on record order.

    Raises MissingCell, DuplicateCell, NonFiniteValue or UnknownIndicator
    naming the offending coordinates.
    """
    if isinstance(indicators, HierarchySpec):
        indicators = indicators.ordered_indicators()
    indicators = tuple(indicators)
    ind_pos = {ind.id: k for k, ind in enumerate(indicators)}

    cells: dict[tuple[str, int, str], float] = {}
    for entity, year, indicator, value in raw_records:
        entity, year, indicator = str(entity), int(year), str(indicator)
        if indicator not in ind_pos:
            raise errors.UnknownIndicator(indicator, entity, year)
        if entities is not None and entity not in entities:
            raise errors.UnknownEntity(entity)
        if years is not None and year not in years:
            raise errors.UnknownYear(year)
        value = float(value)
        if not math.isfinite(value):
            raise errors.NonFiniteValue(entity, year, indicator, value)
        key = (entity, year, indicator)
        if key in cells:
            raise errors.DuplicateCell(*key)
        cells[key] = value

    ent = tuple(entities) if entities is not None else tuple(sorted({k[0] for k in cells}))
    yrs = tuple(int(y) for y in years) if years is not None else tuple(sorted({k[1] for k in cells}))
    if not ent or not yrs:
        raise errors.DataError("dataset is empty")

    values = np.empty((len(ent), len(indicators), len(yrs)))
    for i, e in enumerate(ent):
        for t, y in enumerate(yrs):
            for j, ind in enumerate(indicators):
                try:
                    values[i, j, t] = cells[(e, y, ind.id)]
                except KeyError:
                    raise errors.MissingCell(e, y, ind.id) from None
    return PanelDataset(ent, yrs, indicators, values)


def read_long_csv(path) -> list[Record]:
    """Read ``entity,year,indicator,value`` records from a UTF-8 CSV file."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"entity", "year", "indicator", "value"} - set(reader.fieldnames or ())
        if missing:
            raise errors.DataError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            year = row["year"].strip()
            if len(year) != 4 or not year.isdigit():
                raise errors.DataError(f"{path}:{lineno}: year {year!r} is not a 4-digit integer")
            try:
                value = float(row["value"])
            except ValueError:
                raise errors.DataError(f"{path}:{lineno}: value {row['value']!r} is not a number") from None
            records.append((row["entity"].strip(), int(year), row["indicator"].strip(), value))
    return records


def apply_prep(ds: PanelDataset) -> PanelDataset:
    """Replace reciprocal-flagged indicators by ``1/x``; everything else unchanged."""
    if ds.prepped:
        return ds
    values = ds.values.copy()
    for j, ind in enumerate(ds.indicators):
        if ind.prep is not Prep.RECIPROCAL:
            continue
        col = values[:, j, :]
        bad = np.argwhere(col <= 0)
        if bad.size:
            i, t = bad[0]
            raise errors.NonPositiveReciprocal(ds.entities[i], ds.years[t], ind.id, col[i, t])
        values[:, j, :] = 1.0 / col
    return PanelDataset(ds.entities, ds.years, ds.indicators, values, prepped=True)


def slice_year(ds: PanelDataset, year: int) -> DecisionMatrix:
    try:
        t = ds.years.index(int(year))
    except ValueError:
        raise errors.UnknownYear(year) from None
    return DecisionMatrix(ds.entities, ds.indicator_ids, ds.values[:, :, t], Stage.RAW)
