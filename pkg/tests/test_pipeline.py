import warnings

import numpy as np
import pytest

from cfindex import errors
from cfindex.aggregate import METHODS
from cfindex.core import HierarchySpec, IndicatorSpec, PanelDataset, apply_prep
from cfindex.pipeline import (
    IndexSeries, PipelineOptions, build_composite, build_group_index, build_top_index,
    select_and_build, summarize,
)
from cfindex.ssm import SsmReport

import oracles
from conftest import MEAN_LOSSES, PUBLISHED_GRIDS, PILOTS, YEARS


def grid_series(name, grid, method=None):
    return IndexSeries(name, PILOTS, YEARS, np.asarray(grid), method)


def random_panel(rng, m=3, n=4, T=6, cost=()):
    inds = [IndicatorSpec(f"c{j}", polarity="cost" if j in cost else "benefit", group="G")
            for j in range(n)]
    return PanelDataset([f"e{i}" for i in range(m)], range(2015, 2015 + T), inds,
                        rng.uniform(0.5, 20.0, size=(m, n, T)))


def test_single_indicator_group_is_its_normalized_column(rng):
    ds = random_panel(rng, n=1)
    v = ds.values[:, 0, :]
    expected = (v - v.min()) / (v.max() - v.min())
    for m in ("SAW", "WP", "WDI2", "WDIInf"):
        s = build_group_index(ds, ["c0"], m)
        np.testing.assert_allclose(s.values, expected, atol=1e-15)


def test_identical_indicators_saw(rng):
    ds = random_panel(rng, n=1)
    twin = PanelDataset(ds.entities, ds.years, [IndicatorSpec("a"), IndicatorSpec("b")],
                        np.repeat(ds.values, 2, axis=1))
    v = ds.values[:, 0, :]
    np.testing.assert_allclose(build_group_index(twin, ["a", "b"], "SAW").values,
                               (v - v.min()) / (v.max() - v.min()), atol=1e-15)


def test_wdi2_group_matches_reference_pipeline(rng):
    for _ in range(20):
        ds = random_panel(rng, cost=(1, 3))
        got = build_group_index(ds, ds.indicator_ids, "WDI2").values
        want = oracles.reference_group_index_wdi2(
            ds.values.tolist(), [ind.polarity.value == "cost" for ind in ds.indicators])
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


def test_select_and_build(rng):
    ds = random_panel(rng)
    series, report = select_and_build(ds, ds.indicator_ids)
    assert report.methods == METHODS
    assert report.mean_of(report.selected) == report.means.min()
    np.testing.assert_array_equal(
        series.values, build_group_index(ds, ds.indicator_ids, report.selected).values)
    _, rep = select_and_build(ds, ds.indicator_ids, ["TOPSIS"])
    assert rep.selected.value == "TOPSIS"
    with pytest.warns(RuntimeWarning, match="tie"):
        _, rep = select_and_build(ds, ds.indicator_ids, ["SAW", "SAW"])
    assert rep.selected.value == "SAW"


def test_published_losses_select_wdi2():
    rep = SsmReport.from_losses(list(MEAN_LOSSES), [2015], [[v] for v in MEAN_LOSSES.values()])
    assert rep.selected.value == "WDI2"


def test_top_index_single_group_is_identity():
    s = grid_series("CTI", PUBLISHED_GRIDS["CTI"]["grid"])
    for m in ("SAW", "WP", "WDI2", "WDIInf"):
        np.testing.assert_allclose(build_top_index([s], m).values, s.values, atol=1e-15)


def test_top_index_of_identical_groups_wdi2():
    g = PUBLISHED_GRIDS["CTI"]["grid"]
    top = build_top_index([grid_series("CTI", g), grid_series("CII", g)], "WDI2")
    # equal halves: sqrt((v/2)^2 + (v/2)^2) = v / sqrt(2)
    np.testing.assert_allclose(top.values, np.asarray(g) * np.sqrt(0.5), atol=1e-15)


def test_top_index_from_published_grids_has_summary_shape():
    cti = grid_series("CTI", PUBLISHED_GRIDS["CTI"]["grid"])
    cii = grid_series("CII", PUBLISHED_GRIDS["CII"]["grid"])
    for renorm in (False, True):
        top = build_top_index([cti, cii], "WDI2", renormalize=renorm)
        assert top.values.shape == (3, 6) and top.name == "CFI"


def test_top_index_grid_mismatch():
    a = grid_series("CTI", PUBLISHED_GRIDS["CTI"]["grid"])
    b = IndexSeries("CII", PILOTS, (2015,), np.ones((3, 1)))
    with pytest.raises(errors.GridMismatch):
        build_top_index([a, b], "SAW")


@pytest.mark.parametrize("name", ["CTI", "CII", "CFI"])
def test_summary_first_column(name):
    t = PUBLISHED_GRIDS[name]
    s = summarize(grid_series(name, t["grid"]))
    col = [row[0] for row in t["grid"]]
    assert s.period_average[0] == pytest.approx(sum(col) / 3, abs=1e-15)


def test_summary_worked_columns():
    s = summarize(grid_series("CTI", PUBLISHED_GRIDS["CTI"]["grid"]))
    assert round(s.period_average[0], 3) == 0.263
    s = summarize(grid_series("CFI", PUBLISHED_GRIDS["CFI"]["grid"]))
    assert round(s.period_average[0], 3) == 0.211
    assert round(s.period_std[0], 3) == 0.073


def test_summary_constant_grid():
    s = summarize(grid_series("X", np.full((3, 6), 0.2)))
    np.testing.assert_allclose(s.regional_average, 0.2)
    np.testing.assert_allclose(s.period_average, 0.2)
    np.testing.assert_allclose(s.period_std, 0.0, atol=1e-15)
    assert summarize(grid_series("X", np.full((3, 6), 0.2))).rows()[-1][1] == "0.000"


@pytest.mark.parametrize("name", ["CTI", "CII", "CFI"])
def test_grand_mean_consistency(name):
    s = summarize(grid_series(name, PUBLISHED_GRIDS[name]["grid"]))
    assert abs(s.regional_average.mean() - s.grand_mean) < 1e-12
    assert abs(s.period_average.mean() - s.grand_mean) < 1e-12


def test_summary_rows_layout():
    rows = summarize(grid_series("CTI", PUBLISHED_GRIDS["CTI"]["grid"])).rows()
    assert rows[0] == ["Region", *map(str, YEARS), "Regional average"]
    assert rows[1] == ["BJ", "0.228", "0.168", "0.177", "0.220", "0.237", "0.074", "0.184"]
    assert rows[-2][0] == "Period average" and rows[-1][0] == "Standard deviation"
    assert rows[-1][-1] == ""


def test_build_composite(dataset, hierarchy):
    res = build_composite(dataset, hierarchy)
    assert [g.name for g in res.groups] == ["CTI", "CII"]
    assert res.top.name == "CFI" and res.top.values.shape == (3, 6)
    np.testing.assert_allclose(
        res.pooled.means, np.mean([r.means for r in res.reports.values()], axis=0), atol=1e-15)
    assert res.selected is res.pooled.selected
    assert all(g.method is res.selected for g in (*res.groups, res.top))
    again = build_composite(dataset, hierarchy)
    assert np.array_equal(again.top.values, res.top.values)


def test_build_composite_respects_override(dataset, hierarchy):
    rep = SsmReport.from_losses(list(MEAN_LOSSES), [2015], [[v] for v in MEAN_LOSSES.values()])
    assert build_composite(dataset, hierarchy, pooled_override=rep).selected.value == "WDI2"


@pytest.mark.parametrize("opts", [
    PipelineOptions(normalization="ln"), PipelineOptions(normalization="vn"),
    PipelineOptions(weighting="equal"), PipelineOptions(ssm_input="normalized"),
    PipelineOptions(renormalize_top=True), PipelineOptions(r0=(1, 2, 3)),
])
def test_option_variants_run(dataset, hierarchy, opts):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = build_composite(dataset, hierarchy, opts)
    assert np.all(np.isfinite(res.top.values))


def test_bad_options():
    with pytest.raises(errors.ConfigError):
        PipelineOptions(normalization="zscore")
    with pytest.raises(errors.ConfigError):
        PipelineOptions(candidates=())
