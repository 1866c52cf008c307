"""The five aggregation functions: SAW, WP, WDI2, WDI-infinity and TOPSIS."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from cfindex import errors
from cfindex.core import DecisionMatrix
from cfindex.transform import WeightVector


class AggregationMethod(str, enum.Enum):
    SAW = "SAW"
    WP = "WP"
    WDI2 = "WDI2"
    WDI_INF = "WDIInf"
    TOPSIS = "TOPSIS"

    @classmethod
    def parse(cls, name) -> "AggregationMethod":
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("∞", "INF").replace("_", "")
        for m in cls:
            if m.value.upper() == key:
                return m
        raise errors.ConfigError(f"unknown aggregation method {name!r}")


# canonical order, also the tie-break order for method selection
METHODS = tuple(AggregationMethod)


@dataclass(frozen=True)
class CiVector:
    entities: tuple[str, ...]
    scores: np.ndarray = field(repr=False)
    method: AggregationMethod

    def __post_init__(self):
        s = np.array(self.scores, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "scores", s)


def saw(r, w):
    return r @ w


def wp(r, w):
    # numpy defines 0.0 ** 0.0 == 1, so zero-weighted columns are inert
    return np.prod(r ** w, axis=1)


def wdi2(r, w):
    return np.sqrt(((r * w) ** 2).sum(axis=1))


def wdi_inf(r, w):
    return (r * w).min(axis=1)


def topsis(r, w):
    """Relative closeness of each weighted row to the column-wise maxima.

    Rows at zero total distance (every row identical) score 0.5.
    """
    v = r * w
    d_minus = np.sqrt(((v - v.min(axis=0)) ** 2).sum(axis=1))
    d_plus = np.sqrt(((v - v.max(axis=0)) ** 2).sum(axis=1))
    total = d_minus + d_plus
    out = np.full(len(v), 0.5)
    ok = total > 0
    if not ok.all():
        warnings.warn("TOPSIS: entities coincide with both ideal points; scored 0.5",
                      RuntimeWarning, stacklevel=3)
    out[ok] = d_minus[ok] / total[ok]
    return out


_FUNCS = {
    AggregationMethod.SAW: saw,
    AggregationMethod.WP: wp,
    AggregationMethod.WDI2: wdi2,
    AggregationMethod.WDI_INF: wdi_inf,
    AggregationMethod.TOPSIS: topsis,
}


def aggregate(method, R: DecisionMatrix, w: WeightVector) -> CiVector:
    """Aggregate a normalized decision matrix into one score per entity."""
    method = AggregationMethod.parse(method)
    if R.shape[1] != len(w):
        raise errors.DimensionMismatch(f"matrix has {R.shape[1]} columns, weights {len(w)}")
    scores = _FUNCS[method](R.cells, w.weights)
    return CiVector(R.entities, scores, method)
