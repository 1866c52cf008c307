"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary."""

import time
from dataclasses import replace

import numpy as np
import pytest
import yaml

from cfindex import cli
from cfindex.aggregate import METHODS, aggregate
from cfindex.core import DecisionMatrix, Stage
from cfindex.emissions import estimate_emissions
from cfindex.panel import (
    Description, describe_rows, fixed_effects, format_coefficient, hausman, hausman_rows,
    parse_describe_rows, pooled_ols, random_effects, simulate_panel,
)
from cfindex.pipeline import IndexSeries, summarize
from cfindex.ssm import reference_ranks, select_method, spearman, ssm_loss
from cfindex.transform import GlobalExtrema, WeightVector, cv_weights, normalize_maut, normalize_vn

import oracles
from conftest import MEAN_LOSSES, PUBLISHED_GRIDS, PILOTS, YEARS, synthetic_records
from test_cli import HIERARCHY_YAML, write_dataset, write_regression

SUMMARY_TOL = 0.0005


def _mat(cells, stage=Stage.RAW):
    cells = np.asarray(cells, dtype=float)
    m, n = cells.shape
    return DecisionMatrix([f"e{i}" for i in range(m)], [f"c{j}" for j in range(n)], cells, stage)


def _w(w):
    return WeightVector([f"c{j}" for j in range(len(w))], np.asarray(w, dtype=float))


@pytest.mark.criterion(1, "summary arithmetic reproduces the published CTI, CII and CFI summary rows within 0.0005")
def test_c1_summary_arithmetic():
    start = time.perf_counter()
    misses = []
    for name, t in PUBLISHED_GRIDS.items():
        s = summarize(IndexSeries(name, PILOTS, YEARS, t["grid"]))
        computed = {
            "regional": s.regional_average,
            "period": np.r_[s.period_average, s.grand_mean],
            "std": s.period_std,
        }
        for kind, values in computed.items():
            for k, (got, printed) in enumerate(zip(values, t[kind])):
                if abs(got - printed) > SUMMARY_TOL + 1e-12:
                    misses.append(f"{name} {kind}[{k}]: computed {got:.5f}, printed {printed}")
    elapsed = time.perf_counter() - start
    s_cti = summarize(IndexSeries("CTI", PILOTS, YEARS, PUBLISHED_GRIDS["CTI"]["grid"]))
    s_cfi = summarize(IndexSeries("CFI", PILOTS, YEARS, PUBLISHED_GRIDS["CFI"]["grid"]))
    print(f"CTI 2015: mean {s_cti.period_average[0]:.5f} sd {s_cti.period_std[0]:.5f}; "
          f"CFI 2015: mean {s_cfi.period_average[0]:.5f} sd {s_cfi.period_std[0]:.5f}")
    assert elapsed < 1.0
    assert not misses, "\n".join(misses)


@pytest.mark.criterion(2, "published mean losses select WDI2")
def test_c2_method_selection():
    assert select_method(MEAN_LOSSES).value == "WDI2"
    assert select_method(list(MEAN_LOSSES), list(MEAN_LOSSES.values())).value == "WDI2"


@pytest.mark.criterion(3, "single-column SAW loses no information (1e-12, 100 instances)")
def test_c3_zero_loss():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = int(rng.integers(2, 12))
        col = rng.uniform(0.0, 1.0, size=(m, 1))
        col[0, 0] += 0.01
        ci = aggregate("SAW", _mat(col, Stage.NORMALIZED), _w([1.0]))
        assert ssm_loss(_mat(col), _w([1.0]), ci) <= 1e-12


@pytest.mark.criterion(4, "dual-implementation oracles: Spearman, five aggregations, SSM loss (1e-12)")
def test_c4_dual_oracles():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        n = int(rng.integers(2, 25))
        a, b = rng.normal(size=n), rng.normal(size=n)
        assert abs(spearman(a, b) - oracles.spearman_rank_diff(a.tolist(), b.tolist())) <= 1e-12
    for method in METHODS:
        for _ in range(1000):
            m, n = int(rng.integers(2, 8)), int(rng.integers(1, 9))
            r = rng.uniform(0, 1, size=(m, n))
            w = rng.dirichlet(np.ones(n))
            got = aggregate(method, _mat(r, Stage.NORMALIZED), _w(w)).scores
            want = oracles.AGGREGATORS[method.value](r.tolist(), w.tolist())
            assert np.max(np.abs(got - want)) <= 1e-12
    for _ in range(1000):
        x = rng.uniform(0, 10, size=(3, 8))
        w = rng.dirichlet(np.ones(8))
        ci = rng.uniform(0, 1, size=3)
        r0 = reference_ranks(3)
        assert abs(ssm_loss(x, w, ci, r0)
                   - oracles.ssm_loss(x.tolist(), w.tolist(), ci.tolist(), r0.tolist())) <= 1e-12


@pytest.mark.criterion(5, "normalization: X+ + X- = 1, VN unit norms, CV weights on simplex")
def test_c5_normalization_properties():
    rng = np.random.default_rng(5)
    for _ in range(200):
        x = rng.uniform(-50, 50, size=(6, 5))
        m = _mat(x)
        ext = GlobalExtrema(m.indicators, x.max(0), x.min(0))
        total = normalize_maut(m, ext, "benefit").cells + normalize_maut(m, ext, "cost").cells
        assert np.max(np.abs(total - 1)) <= 1e-12
        v = normalize_vn(_mat(np.abs(x))).cells
        assert np.max(np.abs(np.sqrt((v ** 2).sum(0)) - 1)) <= 1e-12
        r = rng.uniform(0.05, 1, size=(6, 5))
        r[:, 1] = 0.3
        w = cv_weights(_mat(r, Stage.NORMALIZED)).weights
        assert abs(w.sum() - 1) <= 1e-9 and np.all(w >= 0) and w[1] == 0


@pytest.mark.criterion(6, "regression oracles: OLS, FE, LSDV, RE->pooled, Monte-Carlo RE bias; < 60 s")
def test_c6_regression_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    from test_panel import balanced, lsdv
    x = rng.normal(size=40)
    r = pooled_ols(balanced(8, 5, x[:, None], 2 + 3 * x, ("x",)))
    assert np.max(np.abs(r.params - [2, 3])) <= 1e-10

    n, T = 10, 6
    x = rng.normal(size=n * T)
    f = np.repeat(rng.normal(scale=1e3, size=n), T)
    assert abs(fixed_effects(balanced(n, T, x[:, None], f + 3 * x, ("x",))).param("x") - 3) <= 1e-10

    X = rng.normal(size=(n * T, 3))
    y = X @ [1, -1, 2] + f + rng.normal(size=n * T)
    s = balanced(n, T, X, y, ("a", "b", "c"))
    assert np.max(np.abs(fixed_effects(s).params - lsdv(s)[0])) <= 1e-8

    n, T = 40, 8
    X = rng.normal(size=(n * T, 2))
    y = 1 + X @ [0.5, 2.0] + rng.normal(size=n * T)
    ent = np.repeat(np.arange(n), T)
    e = pooled_ols(balanced(n, T, X, y, ("a", "b"))).resid
    s = balanced(n, T, X, y - (np.bincount(ent, weights=e) / T)[ent], ("a", "b"))
    with pytest.warns(RuntimeWarning, match="clamped"):
        re = random_effects(s)
    assert np.max(np.abs(re.params - pooled_ols(s).params)) <= 1e-6

    beta = np.array([0.5, -0.2, 1.0])
    draws = np.array([random_effects(simulate_panel(50, 10, beta, 1.0, 1.0, rng)).params[1:]
                      for _ in range(200)])
    bias = draws.mean(0) - beta
    mcse = draws.std(0, ddof=1) / np.sqrt(200)
    print(f"RE Monte-Carlo bias {bias}, 3*MCSE {3 * mcse}")
    assert np.all(np.abs(bias) < 3 * mcse)
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(7, "coincident FE/RE estimates give Hausman 0.000000, p 1.0000, random effects")
def test_c7_hausman_boundary():
    s = simulate_panel(30, 6, [0.3, 0.1, -0.4, 0.2, 0.8], 1.0, 1.0, np.random.default_rng(7))
    fe, re = fixed_effects(s), random_effects(s)
    idx = [re.names.index(n) for n in fe.names]
    params = re.params.copy()
    params[idx] = fe.params
    h = hausman(fe, replace(re, params=params), label="Period random")
    assert h.statistic == 0.0 and h.df == 5 and h.pvalue == 1.0
    assert h.recommendation == "RandomEffects"
    assert hausman_rows(h)[1] == ["Period random", "0.000000", "5", "1.0000"]


@pytest.mark.criterion(8, "emission factors: coal 1.978, worked bundle 95.461 (1e-9)")
def test_c8_emissions():
    assert estimate_emissions(1, 0, 0, 0, "north_china") == 1.978
    got = estimate_emissions(2, 1, 10, 100, "east_china")
    assert abs(got - 95.461) <= 1e-9
    assert abs(got - oracles.linear_emissions(2, 1, 10, 100, 0.7035)) <= 1e-9


@pytest.mark.criterion(9, "published index/regression values covered by fixture arithmetic and layout round-trips")
def test_c9_fixture_coverage():
    fixture = Description("CFI", 0.180280, 0.053018, 0.090296, 0.165106, 0.293644)
    assert parse_describe_rows(describe_rows([fixture])) == [fixture]
    assert format_coefficient(0.775972, 4.489495, 0.0005) == "0.775972*** (4.489495)"
    assert format_coefficient(0.010701, 2.222803, 0.03) == "0.010701** (2.222803)"
    for name, t in PUBLISHED_GRIDS.items():
        rows = summarize(IndexSeries(name, PILOTS, YEARS, t["grid"])).rows()
        assert [r[1:7] for r in rows[1:4]] == [[f"{v:.3f}" for v in row] for row in t["grid"]]


@pytest.mark.criterion(10, "repeated build and regress runs are byte-identical")
def test_c10_determinism(tmp_path):
    rng = np.random.default_rng(10)
    write_dataset(tmp_path / "indicators.csv", synthetic_records(rng))
    write_regression(tmp_path / "drivers.csv", rng, n=12)
    cfg = {"dataset": "indicators.csv", "hierarchy": HIERARCHY_YAML,
           "regression": {"data": "drivers.csv"}}
    (tmp_path / "run.yaml").write_text(yaml.safe_dump(cfg))
    for d in ("a", "b"):
        for cmd in ("build", "regress"):
            assert cli.main([cmd, "--config", str(tmp_path / "run.yaml"),
                             "--out", str(tmp_path / d)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert len(files) == 9
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
