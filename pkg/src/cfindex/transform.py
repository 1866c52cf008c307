"""Normalization (LN, VN, global min-max MAUT) and indicator weighting."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cfindex import errors
from cfindex.core import DecisionMatrix, PanelDataset, Polarity, Stage


@dataclass(frozen=True)
class GlobalExtrema:
    """Per-indicator max and min pooled over all entities and all years."""

    indicators: tuple[str, ...]
    maxima: np.ndarray = field(repr=False)
    minima: np.ndarray = field(repr=False)

    def __post_init__(self):
        mx = np.array(self.maxima, dtype=float)
        mn = np.array(self.minima, dtype=float)
        if mx.shape != mn.shape or mx.shape != (len(self.indicators),):
            raise errors.DimensionMismatch("extrema do not match indicator list")
        if not (np.all(np.isfinite(mx)) and np.all(np.isfinite(mn))) or np.any(mx < mn):
            raise errors.DataError("extrema must be finite with max >= min")
        mx.setflags(write=False)
        mn.setflags(write=False)
        object.__setattr__(self, "indicators", tuple(self.indicators))
        object.__setattr__(self, "maxima", mx)
        object.__setattr__(self, "minima", mn)

    def select(self, indicator_ids: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
        pos = {iid: k for k, iid in enumerate(self.indicators)}
        try:
            idx = [pos[i] for i in indicator_ids]
        except KeyError as exc:
            raise errors.UnknownIndicator(exc.args[0]) from None
        return self.maxima[idx], self.minima[idx]


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative per-indicator weights summing to one."""

    indicators: tuple[str, ...]
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (len(self.indicators),):
            raise errors.DimensionMismatch("weights do not match indicator list")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise errors.DataError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise errors.DataError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "indicators", tuple(self.indicators))
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.indicators)


def global_extrema(ds: PanelDataset) -> GlobalExtrema:
    return GlobalExtrema(ds.indicator_ids, ds.values.max(axis=(0, 2)), ds.values.min(axis=(0, 2)))


def _polarity_array(polarity, n) -> np.ndarray:
    if isinstance(polarity, (str, Polarity)):
        polarity = [polarity] * n
    pol = [Polarity(p) for p in polarity]
    if len(pol) != n:
        raise errors.DimensionMismatch(f"{len(pol)} polarities for {n} indicators")
    return np.array([p is Polarity.COST for p in pol])


def normalize_maut(mat: DecisionMatrix, ext: GlobalExtrema, polarity) -> DecisionMatrix:
    """Min-max normalization against global extrema.

    Benefit columns map to ``(x - m)/(M - m)``, cost columns to ``(M - x)/(M - m)``.
    A column whose global range is zero maps to 0.5 everywhere and emits a
    warning (it then carries no coefficient-of-variation weight).
    """
    cost = _polarity_array(polarity, len(mat.indicators))
    mx, mn = ext.select(mat.indicators)
    x = mat.cells
    rng = mx - mn
    out = np.empty_like(x)
    for j in range(x.shape[1]):
        if rng[j] == 0:
            warnings.warn(
                f"indicator {mat.indicators[j]!r} has a degenerate global range; mapped to 0.5",
                RuntimeWarning, stacklevel=2,
            )
            out[:, j] = 0.5
        elif cost[j]:
            out[:, j] = (mx[j] - x[:, j]) / rng[j]
        else:
            out[:, j] = (x[:, j] - mn[j]) / rng[j]
    # extrema taken from a different dataset can push cells slightly outside
    if out.size and (out.min() < -1e-12 or out.max() > 1 + 1e-12):
        raise errors.DataError("cells fall outside the supplied global extrema")
    return mat.with_cells(np.clip(out, 0.0, 1.0), Stage.NORMALIZED)


def normalize_ln(mat: DecisionMatrix) -> DecisionMatrix:
    """Divide each column by its maximum within this matrix."""
    x = mat.cells
    if np.any(x < 0):
        j = int(np.argwhere(x < 0)[0][1])
        raise errors.NegativeCell(mat.indicators[j])
    colmax = x.max(axis=0)
    for j, v in enumerate(colmax):
        if v <= 0:
            raise errors.NonPositiveColumnMax(mat.indicators[j])
    return mat.with_cells(x / colmax, Stage.NORMALIZED)


def normalize_vn(mat: DecisionMatrix) -> DecisionMatrix:
    """Divide each column by its Euclidean norm."""
    x = mat.cells
    if np.any(x < 0):
        j = int(np.argwhere(x < 0)[0][1])
        raise errors.NegativeCell(mat.indicators[j])
    norms = np.sqrt((x * x).sum(axis=0))
    for j, v in enumerate(norms):
        if v == 0:
            raise errors.ZeroColumn(mat.indicators[j])
    return mat.with_cells(x / norms, Stage.NORMALIZED)


def reverse_cost(mat: DecisionMatrix, polarity) -> DecisionMatrix:
    """Flip cost columns of a normalized matrix to ``1 - r``.

    LN and VN carry no polarity of their own; this puts cost indicators on
    the same larger-is-better footing as MAUT does.
    """
    cost = _polarity_array(polarity, len(mat.indicators))
    cells = mat.cells.copy()
    cells[:, cost] = 1.0 - cells[:, cost]
    return mat.with_cells(cells, mat.stage)


def cv_weights(mat: DecisionMatrix) -> WeightVector:
    """Coefficient-of-variation weights across entities.

    ``V_j = s_j / mean_j`` with the sample standard deviation (divisor m-1),
    then ``w_j = V_j / sum(V)``. If every column is constant all V are zero;
    equal weights are returned with a warning.
    """
    x = mat.cells
    m = x.shape[0]
    if m < 2:
        raise errors.SingleEntity()
    means = x.mean(axis=0)
    for j, mu in enumerate(means):
        if mu <= 0:
            raise errors.ZeroMeanColumn(mat.indicators[j])
    cv = x.std(axis=0, ddof=1) / means
    total = cv.sum()
    if total == 0:
        warnings.warn("all columns are constant; falling back to equal weights",
                      RuntimeWarning, stacklevel=2)
        return equal_weights(len(mat.indicators), mat.indicators)
    return WeightVector(mat.indicators, cv / total)


def equal_weights(n: int, indicators: Sequence[str] | None = None) -> WeightVector:
    if n < 1:
        raise ValueError("n must be at least 1")
    if indicators is None:
        indicators = tuple(f"x{j}" for j in range(n))
    return WeightVector(tuple(indicators), np.full(n, 1.0 / n))
