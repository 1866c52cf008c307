"""Two-level composite index construction and summary tables.

Per year, each group's indicators are normalized, weighted and aggregated
into a group score; the aggregation method is chosen by minimum mean
information loss pooled over groups. The group scores are then weighted and
aggregated again, with the same method, into the top-level index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cfindex import errors
from cfindex.aggregate import METHODS, AggregationMethod, aggregate
from cfindex.core import (
    DecisionMatrix, Group, HierarchySpec, PanelDataset, Polarity, Stage, apply_prep, slice_year,
)
from cfindex.ssm import SsmReport, YearInput, evaluate_methods
from cfindex.transform import (
    GlobalExtrema, cv_weights, equal_weights, global_extrema, normalize_ln, normalize_maut,
    normalize_vn, reverse_cost,
)

NORMALIZATIONS = ("maut", "ln", "vn")
WEIGHTINGS = ("cv", "equal")
SSM_INPUTS = ("raw", "normalized")


@dataclass(frozen=True)
class PipelineOptions:
    normalization: str = "maut"
    weighting: str = "cv"
    candidates: tuple[AggregationMethod, ...] = METHODS
    ssm_input: str = "raw"
    renormalize_top: bool = False
    r0: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise errors.ConfigError(f"normalization must be one of {NORMALIZATIONS}")
        if self.weighting not in WEIGHTINGS:
            raise errors.ConfigError(f"weighting must be one of {WEIGHTINGS}")
        if self.ssm_input not in SSM_INPUTS:
            raise errors.ConfigError(f"ssm_input must be one of {SSM_INPUTS}")
        cands = tuple(AggregationMethod.parse(m) for m in self.candidates)
        if not cands:
            raise errors.ConfigError("at least one candidate aggregation method is required")
        object.__setattr__(self, "candidates", cands)
        if self.r0 is not None:
            object.__setattr__(self, "r0", tuple(float(v) for v in self.r0))


DEFAULT_OPTIONS = PipelineOptions()


@dataclass(frozen=True)
class IndexSeries:
    """Scores on a complete entity x year grid."""

    name: str
    entities: tuple[str, ...]
    years: tuple[int, ...]
    values: np.ndarray = field(repr=False)
    method: AggregationMethod | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "years", tuple(int(y) for y in self.years))
        if v.shape != (len(self.entities), len(self.years)):
            raise errors.GridMismatch(
                f"{self.name}: grid {v.shape} != ({len(self.entities)}, {len(self.years)})"
            )
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise errors.DataError(f"{self.name}: scores must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SummaryTable:
    name: str
    entities: tuple[str, ...]
    years: tuple[int, ...]
    values: np.ndarray = field(repr=False)
    regional_average: np.ndarray = field(repr=False)
    period_average: np.ndarray = field(repr=False)
    period_std: np.ndarray = field(repr=False)
    grand_mean: float

    def rows(self, decimals: int = 3) -> list[list[str]]:
        """Entities x years plus summary rows and column, as formatted strings."""
        f = lambda v: f"{v:.{decimals}f}"  # noqa: E731
        out = [["Region", *map(str, self.years), "Regional average"]]
        for i, e in enumerate(self.entities):
            out.append([e, *map(f, self.values[i]), f(self.regional_average[i])])
        out.append(["Period average", *map(f, self.period_average), f(self.grand_mean)])
        out.append(["Standard deviation", *map(f, self.period_std), ""])
        return out


def summarize(series: IndexSeries) -> SummaryTable:
    v = series.values
    std = v.std(axis=0, ddof=1) if v.shape[0] > 1 else np.zeros(v.shape[1])
    return SummaryTable(
        series.name, series.entities, series.years, v,
        v.mean(axis=1), v.mean(axis=0), std, float(v.mean()),
    )


def _indicator_ids(ds: PanelDataset, group) -> tuple[str, ...]:
    if isinstance(group, Group):
        return group.members
    if isinstance(group, str):
        return tuple(ind.id for ind in ds.indicators if ind.group == group) or (group,)
    return tuple(group)


def _group_name(group, default="CI") -> str:
    if isinstance(group, Group):
        return group.id
    return group if isinstance(group, str) else default


def normalize_year(ds: PanelDataset, year: int, options: PipelineOptions = DEFAULT_OPTIONS,
                   ext: GlobalExtrema | None = None) -> DecisionMatrix:
    raw = slice_year(ds, year)
    polarity = [ind.polarity for ind in ds.indicators]
    if options.normalization == "maut":
        return normalize_maut(raw, ext if ext is not None else global_extrema(ds), polarity)
    norm = normalize_ln(raw) if options.normalization == "ln" else normalize_vn(raw)
    return reverse_cost(norm, polarity)


def year_weights(mat: DecisionMatrix, options: PipelineOptions = DEFAULT_OPTIONS):
    if options.weighting == "equal":
        return equal_weights(len(mat.indicators), mat.indicators)
    return cv_weights(mat)


def _year_inputs(ds: PanelDataset, options: PipelineOptions) -> list[YearInput]:
    ext = global_extrema(ds)
    out = []
    for year in ds.years:
        norm = normalize_year(ds, year, options, ext)
        ssm_mat = slice_year(ds, year) if options.ssm_input == "raw" else norm
        out.append(YearInput(year, ssm_mat, norm, year_weights(norm, options)))
    return out


def _prepared(ds: PanelDataset, group) -> PanelDataset:
    return apply_prep(ds).subset(_indicator_ids(ds, group))


def build_group_index(ds: PanelDataset, group, method,
                      options: PipelineOptions = DEFAULT_OPTIONS) -> IndexSeries:
    """Scores of one group for every year under a fixed aggregation method.

    ``group`` is a :class:`Group`, a group id (matched against the dataset's
    indicator metadata) or a sequence of indicator ids.
    """
    method = AggregationMethod.parse(method)
    sub = _prepared(ds, group)
    grid = np.empty((len(sub.entities), len(sub.years)))
    for t, yi in enumerate(_year_inputs(sub, options)):
        grid[:, t] = aggregate(method, yi.normalized, yi.weights).scores
    return IndexSeries(_group_name(group), sub.entities, sub.years, grid, method)


def group_ssm_report(ds: PanelDataset, group, candidates=None,
                     options: PipelineOptions = DEFAULT_OPTIONS) -> SsmReport:
    candidates = options.candidates if candidates is None else candidates
    sub = _prepared(ds, group)
    return evaluate_methods(_year_inputs(sub, options), candidates, options.r0)


def select_and_build(ds: PanelDataset, group, candidates=None,
                     options: PipelineOptions = DEFAULT_OPTIONS):
    report = group_ssm_report(ds, group, candidates, options)
    return build_group_index(ds, group, report.selected, options), report


def build_top_index(group_series: Sequence[IndexSeries], method, name: str = "CFI",
                    renormalize: bool = False, weighting: str = "cv") -> IndexSeries:
    """Aggregate group scores, treated as benefit indicators, into one index."""
    method = AggregationMethod.parse(method)
    if not group_series:
        raise errors.GridMismatch("no group series supplied")
    first = group_series[0]
    for s in group_series[1:]:
        if s.entities != first.entities or s.years != first.years:
            raise errors.GridMismatch(f"{s.name} grid does not match {first.name}")
    names = tuple(s.name for s in group_series)
    stack = np.stack([s.values for s in group_series], axis=1)  # m x k x T
    if renormalize:
        lo, hi = stack.min(axis=(0, 2)), stack.max(axis=(0, 2))
        ext = GlobalExtrema(names, hi, lo)
    grid = np.empty((len(first.entities), len(first.years)))
    for t in range(len(first.years)):
        mat = DecisionMatrix(first.entities, names, stack[:, :, t], Stage.NORMALIZED)
        if renormalize:
            mat = normalize_maut(mat.with_cells(mat.cells, Stage.RAW), ext, Polarity.BENEFIT)
        w = equal_weights(len(names), names) if weighting == "equal" else cv_weights(mat)
        grid[:, t] = aggregate(method, mat, w).scores
    return IndexSeries(name, first.entities, first.years, grid, method)


@dataclass(frozen=True)
class CompositeResult:
    groups: tuple[IndexSeries, ...]
    top: IndexSeries
    reports: dict[str, SsmReport]
    pooled: SsmReport
    selected: AggregationMethod


def build_composite(ds: PanelDataset, hierarchy: HierarchySpec,
                    options: PipelineOptions = DEFAULT_OPTIONS,
                    pooled_override: SsmReport | None = None) -> CompositeResult:
    """Full two-level construction with one method selected for both levels.

    The pooled report averages the groups' per-year losses, so its means are
    the mean over groups of each group's mean loss. ``pooled_override``
    replaces the pooled report (and hence the selection) with a given one.
    """
    ds = apply_prep(ds)
    reports = {g.id: group_ssm_report(ds, g, options=options) for g in hierarchy.groups}
    first = next(iter(reports.values()))
    pooled_losses = np.mean([r.losses for r in reports.values()], axis=0)
    pooled = SsmReport.from_losses(first.methods, first.years, pooled_losses)
    if pooled_override is not None:
        pooled = pooled_override
    selected = pooled.selected
    groups = tuple(build_group_index(ds, g, selected, options) for g in hierarchy.groups)
    top = build_top_index(groups, selected, hierarchy.top, options.renormalize_top,
                          options.weighting)
    return CompositeResult(groups, top, reports, pooled, selected)
