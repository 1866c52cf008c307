"""Composite index construction with information-loss method selection,
plus panel regressions for analysing what drives the index."""

from cfindex.aggregate import METHODS, AggregationMethod, CiVector, aggregate
from cfindex.core import (
    DecisionMatrix, Group, HierarchySpec, IndicatorSpec, PanelDataset, Polarity, Prep, Stage,
    apply_prep, read_long_csv, slice_year, validate_dataset,
)
from cfindex.emissions import EmissionFactorTable, estimate_emissions
from cfindex.panel import (
    PanelSample, RegressionResult, HausmanResult, describe, fixed_effects, hausman, pooled_ols,
    random_effects, regression_report,
)
from cfindex.pipeline import (
    IndexSeries, PipelineOptions, SummaryTable, build_composite, build_group_index,
    build_top_index, select_and_build, summarize,
)
from cfindex.ssm import SsmReport, diversity_factor, evaluate_methods, select_method, spearman, ssm_loss
from cfindex.transform import (
    GlobalExtrema, WeightVector, cv_weights, equal_weights, global_extrema, normalize_ln,
    normalize_maut, normalize_vn,
)

__version__ = "0.1.0"
