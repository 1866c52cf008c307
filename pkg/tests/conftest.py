import numpy as np
import pytest

from cfindex.core import HierarchySpec, IndicatorSpec, validate_dataset

YEARS = (2015, 2016, 2017, 2018, 2019, 2020)
PILOTS = ("BJ", "GD", "SH")

# index grids, regional averages, period averages (last = grand mean) and
# standard deviations as printed for the three pilot regions
PUBLISHED_GRIDS = {
    "CTI": dict(
        grid=[[0.228, 0.168, 0.177, 0.220, 0.237, 0.074],
              [0.183, 0.244, 0.247, 0.224, 0.269, 0.327],
              [0.377, 0.202, 0.220, 0.208, 0.225, 0.181]],
        regional=[0.184, 0.249, 0.235],
        period=[0.263, 0.205, 0.215, 0.217, 0.244, 0.194, 0.223],
        std=[0.101, 0.038, 0.035, 0.008, 0.023, 0.127]),
    "CII": dict(
        grid=[[0.248, 0.182, 0.269, 0.293, 0.144, 0.212],
              [0.295, 0.349, 0.283, 0.233, 0.287, 0.269],
              [0.238, 0.219, 0.193, 0.188, 0.188, 0.120]],
        regional=[0.225, 0.286, 0.191],
        period=[0.261, 0.250, 0.249, 0.238, 0.206, 0.200, 0.234],
        std=[0.031, 0.088, 0.048, 0.052, 0.073, 0.075]),
    "CFI": dict(
        grid=[[0.184, 0.133, 0.167, 0.251, 0.124, 0.090],
              [0.156, 0.243, 0.191, 0.201, 0.234, 0.230],
              [0.294, 0.159, 0.145, 0.163, 0.156, 0.123]],
        regional=[0.158, 0.209, 0.173],
        period=[0.211, 0.178, 0.168, 0.205, 0.172, 0.148, 0.180],
        std=[0.073, 0.058, 0.023, 0.044, 0.056, 0.073]),
}

MEAN_LOSSES = {"SAW": 0.0352, "WP": 0.0287, "WDI2": 0.0254, "WDIInf": 0.0278, "TOPSIS": 0.0266}


def carbon_hierarchy() -> HierarchySpec:
    cti = [
        IndicatorSpec("quota", "quota volume per controlled enterprise"),
        IndicatorSpec("ccer", "CCER volume per controlled enterprise"),
        IndicatorSpec("price_sd", "1 / std of daily price", "benefit", prep="reciprocal"),
        IndicatorSpec("days", "1 / number of trading days", "cost", prep="reciprocal"),
    ]
    cii = [
        IndicatorSpec("issuance", "green issuance per controlled enterprise"),
        IndicatorSpec("institutions", "financial institutions per issuance"),
        IndicatorSpec("emissions", "regional emissions per controlled enterprise"),
        IndicatorSpec("loan_rate", "weighted RMB loan rate", "cost", prep="reciprocal"),
    ]
    return HierarchySpec.from_groups([("CTI", "carbon emission trading", cti),
                                      ("CII", "carbon reduction investment", cii)])


def synthetic_records(rng, entities=PILOTS, years=YEARS, hierarchy=None):
    hierarchy = hierarchy or carbon_hierarchy()
    out = []
    for e in entities:
        for y in years:
            for ind in hierarchy.ordered_indicators():
                out.append((e, y, ind.id, float(rng.uniform(1.0, 300.0))))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hierarchy():
    return carbon_hierarchy()


@pytest.fixture
def dataset(rng, hierarchy):
    return validate_dataset(synthetic_records(rng, hierarchy=hierarchy), hierarchy)


# --- acceptance criterion reporting ----------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, num, title in getattr(report, "criterion", ()):
        _CRITERIA[num] = (title, report.outcome)


import pytest as _pytest  # noqa: E402


@_pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = [("criterion", m.args[0], m.args[1])]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, outcome = _CRITERIA[num]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {num:2d}. {title}")
