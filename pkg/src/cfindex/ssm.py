"""Shannon-Spearman information-loss scoring and minimum-loss method selection."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from cfindex import errors
from cfindex.aggregate import METHODS, AggregationMethod, CiVector, aggregate
from cfindex.core import DecisionMatrix
from cfindex.transform import WeightVector


def shares(x) -> np.ndarray:
    """Column shares ``x_ij / sum_i x_ij`` (a 1-D input is one column)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise errors.NegativeCell("shares")
    total = x.sum(axis=0)
    if np.any(total <= 0):
        raise errors.DataError("share normalization needs a positive column sum")
    return x / total


def diversity_factor(p) -> float:
    """``1 + sum(p ln p) / ln m``: 0 for a uniform vector, 1 for a point mass."""
    p = np.asarray(p, dtype=float)
    m = p.size
    if m < 2:
        raise errors.TooFewEntities(f"need at least 2 entries, got {m}")
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise errors.NotASimplex(f"not a probability vector (sum={p.sum()!r})")
    pos = p[p > 0]
    h = float(np.sum(pos * np.log(pos)))
    return min(1.0, max(0.0, 1.0 + h / math.log(m)))


def spearman(a, b) -> float:
    """Spearman rank correlation as the Pearson correlation of average ranks."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise errors.LengthMismatch(f"shapes {a.shape} and {b.shape}")
    if a.size < 2:
        raise errors.LengthMismatch("need at least 2 observations")
    ra = rankdata(a) - (a.size + 1) / 2
    rb = rankdata(b) - (b.size + 1) / 2
    saa, sbb = ra @ ra, rb @ rb
    if saa == 0 or sbb == 0:
        raise errors.ZeroRankVariance("constant vector has no rank variance")
    return float(ra @ rb / math.sqrt(saa * sbb))


def spearman_rank_difference(a, b) -> float:
    """``1 - 6 sum d^2 / (n (n^2 - 1))``; valid only when neither vector has ties."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise errors.LengthMismatch(f"shapes {a.shape} and {b.shape}")
    if np.unique(a).size < a.size or np.unique(b).size < b.size:
        raise errors.DataError("rank-difference formula requires tie-free inputs")
    n = a.size
    d = rankdata(a) - rankdata(b)
    return 1.0 - 6.0 * float(d @ d) / (n * (n * n - 1))


def reference_ranks(m: int) -> np.ndarray:
    """The default reference sequence ``(m, m-1, ..., 1)``."""
    return np.arange(m, 0, -1, dtype=float)


def _term(x, r0) -> float:
    div = diversity_factor(shares(x))
    # constant vector: uniform shares, zero diversity, undefined rank correlation
    if np.ptp(x) == 0:
        return 0.0
    return div * spearman(x, r0)


def ssm_loss(R, w, ci, r0=None) -> float:
    """Information lost going from the indicator matrix to the composite scores.

    ``R`` is the matrix whose column shares and ranks describe the inputs,
    ``w`` the aggregation weights and ``ci`` the composite scores. ``r0``
    defaults to ``(m, m-1, ..., 1)``.
    """
    cells = R.cells if isinstance(R, DecisionMatrix) else np.asarray(R, dtype=float)
    weights = w.weights if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    scores = ci.scores if isinstance(ci, CiVector) else np.asarray(ci, dtype=float)
    m, n = cells.shape
    if weights.shape != (n,) or scores.shape != (m,):
        raise errors.DimensionMismatch(
            f"matrix {cells.shape}, weights {weights.shape}, scores {scores.shape}"
        )
    if np.any(cells < 0):
        j = int(np.argwhere(cells < 0)[0][1])
        name = R.indicators[j] if isinstance(R, DecisionMatrix) else str(j)
        raise errors.NegativeCell(name)
    r0 = reference_ranks(m) if r0 is None else np.asarray(r0, dtype=float)
    inputs = sum(weights[j] * _term(cells[:, j], r0) for j in range(n))
    return abs(inputs - _term(scores, r0))


@dataclass(frozen=True)
class SsmReport:
    """Per-method, per-year losses, their means over years, and the winner."""

    methods: tuple[AggregationMethod, ...]
    years: tuple[int, ...]
    losses: np.ndarray = field(repr=False)
    means: np.ndarray = field(repr=False)
    selected: AggregationMethod

    @classmethod
    def from_losses(cls, methods, years, losses) -> "SsmReport":
        methods = tuple(AggregationMethod.parse(m) for m in methods)
        losses = np.array(losses, dtype=float).reshape(len(methods), len(years))
        if np.any(losses < 0):
            raise errors.DataError("losses must be nonnegative")
        means = losses.mean(axis=1)
        return cls(methods, tuple(years), losses, means, select_method(methods, means))

    def mean_of(self, method) -> float:
        return float(self.means[self.methods.index(AggregationMethod.parse(method))])

    def table(self, decimals: int = 4) -> list[list[str]]:
        """Rows of ``method, loss per year..., mean`` as strings."""
        rows = [["method", *map(str, self.years), "mean"]]
        for k, m in enumerate(self.methods):
            rows.append([m.value, *(f"{v:.{decimals}f}" for v in self.losses[k]),
                         f"{self.means[k]:.{decimals}f}"])
        return rows


def select_method(methods: Sequence | Mapping, means: Sequence[float] | None = None) -> AggregationMethod:
    """Argmin of mean losses; ties go to the earlier method in canonical order.

    ``methods`` may instead be a mapping of method to mean loss.
    """
    if isinstance(methods, Mapping):
        means = list(methods.values())
        methods = list(methods)
    methods = [AggregationMethod.parse(m) for m in methods]
    if not methods:
        raise errors.ConfigError("no candidate methods")
    means = np.asarray(means, dtype=float)
    tied = [m for m, v in zip(methods, means) if v == means.min()]
    chosen = min(tied, key=METHODS.index)
    if len(tied) > 1:
        warnings.warn(f"tie in minimum loss between {[m.value for m in tied]}; "
                      f"choosing {chosen.value}", RuntimeWarning, stacklevel=2)
    return chosen


@dataclass(frozen=True)
class YearInput:
    """What one year contributes to method evaluation."""

    year: int
    ssm_matrix: DecisionMatrix   # matrix whose shares/ranks describe the inputs
    normalized: DecisionMatrix   # matrix the aggregation runs on
    weights: WeightVector


def evaluate_methods(per_year: Sequence[YearInput], methods=METHODS, r0=None) -> SsmReport:
    if not per_year:
        raise errors.DataError("need at least one year")
    methods = tuple(AggregationMethod.parse(m) for m in methods)
    if not methods:
        raise errors.ConfigError("no candidate methods")
    losses = np.empty((len(methods), len(per_year)))
    for t, yi in enumerate(per_year):
        for k, method in enumerate(methods):
            ci = aggregate(method, yi.normalized, yi.weights)
            losses[k, t] = ssm_loss(yi.ssm_matrix, yi.weights, ci, r0)
    return SsmReport.from_losses(methods, [yi.year for yi in per_year], losses)
