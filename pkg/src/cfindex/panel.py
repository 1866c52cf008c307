"""Panel regressions of the composite index on its candidate drivers.

Pooled OLS, the within (fixed effects) estimator, Swamy-Arora random
effects by feasible GLS, and the Hausman test comparing the last two.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from cfindex import errors

DEFAULT_REGRESSORS = ("psi", "patent", "size", "location", "energy")
DISPLAY_NAMES = {"psi": "PSI", "patent": "Patent", "size": "Size", "location": "Location",
                 "energy": "Energy", "cfi": "CFI", "const": "C"}
CONST = "const"


@dataclass(frozen=True)
class PanelSample:
    """Long-format panel: one row per (entity, year)."""

    entities: np.ndarray
    years: np.ndarray
    y: np.ndarray
    X: np.ndarray
    regressors: tuple[str, ...]
    response: str = "cfi"

    def __post_init__(self):
        ent = np.asarray(self.entities).astype(str)
        yrs = np.asarray(self.years).astype(int)
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float).reshape(len(y), -1)
        names = tuple(self.regressors)
        if not (len(ent) == len(yrs) == len(y)) or X.shape[1] != len(names):
            raise errors.DimensionMismatch("panel columns have inconsistent lengths")
        if len(y) == 0:
            raise errors.EmptySample("sample has no rows")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
            raise errors.DataError("sample contains non-finite values")
        keys = set(zip(ent.tolist(), yrs.tolist()))
        if len(keys) != len(y):
            raise errors.DataError("duplicate (entity, year) rows")
        if "location" in names:
            loc = X[:, names.index("location")]
            if not np.all((loc == 0) | (loc == 1)):
                raise errors.DataError("location must be 0 (inland) or 1 (coastal)")
        for a in (ent, yrs, y, X):
            a.setflags(write=False)
        object.__setattr__(self, "entities", ent)
        object.__setattr__(self, "years", yrs)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "regressors", names)

    @property
    def nobs(self) -> int:
        return len(self.y)

    def check_shape(self, k: int) -> None:
        """Require >= 2 entities, >= 2 periods and more than ``k + 2`` rows."""
        if len(np.unique(self.entities)) < 2 or len(np.unique(self.years)) < 2:
            raise errors.DataError("panel needs at least 2 entities and 2 periods")
        if self.nobs <= k + 2:
            raise errors.DataError(f"{self.nobs} observations is too few for {k} parameters")

    def column(self, name: str) -> np.ndarray:
        if name == self.response:
            return self.y
        return self.X[:, self.regressors.index(name)]

    @classmethod
    def from_csv(cls, path, regressors: Sequence[str] = DEFAULT_REGRESSORS,
                 response: str = "cfi") -> "PanelSample":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            need = {"entity", "year", response, *regressors}
            missing = need - set(reader.fieldnames or ())
            if missing:
                raise errors.DataError(f"{path}: missing columns {sorted(missing)}")
            ent, yrs, y, X = [], [], [], []
            for lineno, row in enumerate(reader, start=2):
                try:
                    yrs.append(int(row["year"]))
                    y.append(float(row[response]))
                    X.append([float(row[r]) for r in regressors])
                except ValueError as exc:
                    raise errors.DataError(f"{path}:{lineno}: {exc}") from None
                ent.append(row["entity"].strip())
        if not y:
            raise errors.EmptySample(f"{path}: no rows")
        return cls(np.array(ent), np.array(yrs), np.array(y), np.array(X),
                   tuple(regressors), response)


@dataclass(frozen=True)
class RegressionResult:
    estimator: str                      # "Pooled", "FixedEffects" or "RandomEffects"
    names: tuple[str, ...]
    params: np.ndarray = field(repr=False)
    bse: np.ndarray = field(repr=False)
    tvalues: np.ndarray = field(repr=False)
    pvalues: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)
    rsquared: float
    rsquared_adj: float
    fvalue: float
    f_pvalue: float
    nobs: int
    df_resid: int
    resid: np.ndarray = field(repr=False)
    dropped: tuple[str, ...] = ()
    effects: Mapping[str, float] | None = None
    variance_components: Mapping[str, float] | None = None
    theta: np.ndarray | None = field(default=None, repr=False)

    def param(self, name: str) -> float:
        return float(self.params[self.names.index(name)])

    def pvalue(self, name: str) -> float:
        return float(self.pvalues[self.names.index(name)])

    def resid_summary(self) -> dict[str, float]:
        r = self.resid
        return {"mean": float(r.mean()), "std": float(r.std(ddof=1)) if r.size > 1 else 0.0,
                "min": float(r.min()), "max": float(r.max())}


@dataclass(frozen=True)
class HausmanResult:
    statistic: float
    df: int
    pvalue: float
    recommendation: str      # "RandomEffects" or "FixedEffects"
    threshold: float = 0.05
    label: str = "Cross-section random"


# ---------------------------------------------------------------------------
# helpers


def _design(sample: PanelSample, time_effects: bool, constant: bool = True):
    names = list(sample.regressors)
    cols = [sample.X]
    if time_effects:
        yrs = np.unique(sample.years)
        dummies = (sample.years[:, None] == yrs[None, 1:]).astype(float)
        cols.append(dummies)
        names += [f"year_{y}" for y in yrs[1:]]
    if constant:
        cols.insert(0, np.ones((sample.nobs, 1)))
        names.insert(0, CONST)
    return names, np.hstack(cols)


def _collinear(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Names of columns taking part in an exact linear dependence, or []."""
    if X.shape[0] < X.shape[1]:
        return list(names)
    scale = np.sqrt((X * X).sum(axis=0))
    scale[scale == 0] = 1.0
    Xs = X / scale
    _, s, vt = np.linalg.svd(Xs, full_matrices=False)
    tol = s.max(initial=0.0) * max(X.shape) * np.finfo(float).eps * 10
    null = vt[s <= tol]
    if null.size == 0:
        return []
    involved = np.any(np.abs(null) > 1e-8, axis=0)
    return [n for n, flag in zip(names, involved) if flag]


def _ols(y, X, names):
    bad = _collinear(X, names)
    if bad:
        raise errors.RankDeficient(bad)
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ (X.T @ y)
    resid = y - X @ beta
    return beta, xtx_inv, resid


def _inference(beta, xtx_inv, resid, df_resid):
    s2 = float(resid @ resid) / df_resid
    cov = s2 * xtx_inv
    bse = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(bse > 0, beta / bse, np.where(beta == 0, 0.0, np.inf * np.sign(beta)))
    pvals = 2 * stats.t.sf(np.abs(tvals), df_resid)
    return cov, bse, tvals, pvals


def _fit_stats(resid, y_centered_ss, n_slopes, df_resid, df_total):
    ssr = float(resid @ resid)
    if y_centered_ss > 0:
        r2 = 1.0 - ssr / y_centered_ss
    else:
        r2 = 1.0 if ssr == 0 else 0.0
    r2_adj = 1.0 - (1.0 - r2) * df_total / df_resid
    if n_slopes == 0:
        return r2, r2_adj, float("nan"), float("nan")
    if r2 >= 1.0:
        return r2, r2_adj, float("inf"), 0.0
    f = (r2 / n_slopes) / ((1.0 - r2) / df_resid)
    return r2, r2_adj, f, float(stats.f.sf(f, n_slopes, df_resid))


def _groups(sample: PanelSample, effects: str):
    if effects == "entity":
        labels = sample.entities
    elif effects == "time":
        labels = sample.years.astype(str)
    else:
        raise errors.ConfigError(f"effects must be 'entity' or 'time', got {effects!r}")
    uniq, codes = np.unique(labels, return_inverse=True)
    return uniq, codes, np.bincount(codes).astype(float)


def _group_mean(a, codes, counts):
    if a.ndim == 1:
        return np.bincount(codes, weights=a) / counts
    return np.column_stack([np.bincount(codes, weights=a[:, j]) / counts
                            for j in range(a.shape[1])]).reshape(len(counts), a.shape[1])


def _result(estimator, names, beta, xtx_inv, resid, df_resid, y_ss, n_slopes, df_total,
            **extra) -> RegressionResult:
    cov, bse, tv, pv = _inference(beta, xtx_inv, resid, df_resid)
    r2, r2a, f, fp = _fit_stats(resid, y_ss, n_slopes, df_resid, df_total)
    for a in (beta, bse, tv, pv, cov, resid):
        a.setflags(write=False)
    return RegressionResult(estimator, tuple(names), beta, bse, tv, pv, cov, r2, r2a, f, fp,
                            len(resid), int(df_resid), resid, **extra)


# ---------------------------------------------------------------------------
# estimators


def pooled_ols(sample: PanelSample, time_effects: bool = False) -> RegressionResult:
    """Least squares on the stacked panel with an intercept."""
    names, X = _design(sample, time_effects)
    sample.check_shape(X.shape[1])
    y = sample.y
    beta, xtx_inv, resid = _ols(y, X, names)
    n, k = X.shape
    yc = y - y.mean()
    return _result("Pooled", names, beta, xtx_inv, resid, n - k, float(yc @ yc), k - 1, n - 1)


def _within(sample, time_effects, effects, warn=True):
    names, X = _design(sample, time_effects, constant=False)
    uniq, codes, counts = _groups(sample, effects)
    Xw = X - _group_mean(X, codes, counts)[codes]
    yw = sample.y - _group_mean(sample.y, codes, counts)[codes]
    keep, dropped = [], []
    for j, name in enumerate(names):
        scale = max(1.0, float(np.abs(X[:, j]).max()))
        if np.abs(Xw[:, j]).max() <= 1e-12 * scale:
            dropped.append(name)
        else:
            keep.append(j)
    if dropped and warn:
        warnings.warn(f"no within-{effects} variation; dropped {dropped}",
                      RuntimeWarning, stacklevel=3)
    return [names[j] for j in keep], X[:, keep], Xw[:, keep], yw, uniq, codes, counts, dropped


def fixed_effects(sample: PanelSample, time_effects: bool = False,
                  effects: str = "entity") -> RegressionResult:
    """Within estimator; regressors constant within a group are dropped with a warning.

    The reported intercept is ``mean(y) - mean(X) @ b`` and each group effect
    is its deviation from that intercept.
    """
    names, X, Xw, yw, uniq, codes, counts, dropped = _within(sample, time_effects, effects)
    if not names:
        raise errors.DataError("no regressor has within variation")
    g = len(uniq)
    n, k = Xw.shape
    sample.check_shape(k)
    beta, xtx_inv, resid = _ols(yw, Xw, names)
    df_resid = n - g - k
    if df_resid <= 0:
        raise errors.DataError("not enough degrees of freedom for fixed effects")
    intercept = float(sample.y.mean() - X.mean(axis=0) @ beta)
    ybar = _group_mean(sample.y, codes, counts)
    xbar = _group_mean(X, codes, counts)
    fx = {str(u): float(ybar[i] - xbar[i] @ beta - intercept) for i, u in enumerate(uniq)}
    fx["const"] = intercept
    return _result("FixedEffects", names, beta, xtx_inv, resid, df_resid, float(yw @ yw), k,
                   n - g, dropped=tuple(dropped), effects=fx)


def _variance_components(sample, time_effects, effects):
    """Swamy-Arora: idiosyncratic variance from within residuals, effect variance
    from the between regression of group means."""
    names, X, Xw, yw, uniq, codes, counts, _ = _within(sample, time_effects, effects, warn=False)
    n, g = sample.nobs, len(uniq)
    k = Xw.shape[1]
    if names:
        b_w, _, e_w = _ols(yw, Xw, names)
    else:
        b_w, e_w = np.zeros(0), yw
    if n - g - k <= 0:
        raise errors.DataError("not enough degrees of freedom for the within variance")
    sigma2_e = float(e_w @ e_w) / (n - g - k)

    full_names, Xf = _design(sample, time_effects)
    ybar = _group_mean(sample.y, codes, counts)
    xbar = _group_mean(Xf, codes, counts)
    t_bar = g / float(np.sum(1.0 / counts))          # harmonic mean group size
    kb = Xf.shape[1]
    if g > kb and not _collinear(xbar, full_names):
        b_b, _, e_b = _ols(ybar, xbar, full_names)
        sigma2_between = float(e_b @ e_b) / (g - kb)
        sigma2_u = sigma2_between - sigma2_e / t_bar
    else:
        warnings.warn(
            f"between regression has {g} groups for {kb} parameters; "
            "effect variance taken from the dispersion of fixed-effect estimates",
            RuntimeWarning, stacklevel=3,
        )
        fx = ybar - _group_mean(X, codes, counts) @ b_w if names else ybar
        sigma2_u = float(np.var(fx, ddof=1)) - sigma2_e * float(np.mean(1.0 / counts))
    if sigma2_u < 0:
        warnings.warn(f"negative effect variance {sigma2_u:.3g} clamped to 0",
                      RuntimeWarning, stacklevel=3)
        sigma2_u = 0.0
    return sigma2_e, sigma2_u


def random_effects(sample: PanelSample, time_effects: bool = False, effects: str = "entity",
                   theta: float | None = None) -> RegressionResult:
    """Feasible GLS with Swamy-Arora variance components.

    Each group is quasi-demeaned by ``theta_i = 1 - sqrt(s2_e / (T_i s2_u + s2_e))``.
    Passing ``theta`` fixes the quasi-demeaning weight instead: 0 gives pooled
    OLS, 1 gives the within estimator (columns annihilated by the transform
    are then dropped).
    """
    names, X = _design(sample, time_effects)
    sample.check_shape(X.shape[1])
    uniq, codes, counts = _groups(sample, effects)
    if theta is None:
        s2e, s2u = _variance_components(sample, time_effects, effects)
        denom = counts * s2u + s2e
        th = np.where(denom > 0, 1.0 - np.sqrt(np.divide(s2e, denom, where=denom > 0,
                                                         out=np.ones_like(denom))), 0.0)
        vc = {"sigma2_e": s2e, "sigma2_u": s2u}
    else:
        th = np.full(len(uniq), float(theta))
        vc = {"sigma2_e": float("nan"), "sigma2_u": float("nan")}
    th_row = th[codes]
    ys = sample.y - th_row * _group_mean(sample.y, codes, counts)[codes]
    Xs = X - th_row[:, None] * _group_mean(X, codes, counts)[codes]
    keep = [j for j in range(X.shape[1])
            if np.abs(Xs[:, j]).max() > 1e-12 * max(1.0, float(np.abs(X[:, j]).max()))]
    dropped = tuple(names[j] for j in range(len(names)) if j not in keep)
    if dropped and theta is None:
        warnings.warn(f"quasi-demeaning annihilated {list(dropped)}; dropped",
                      RuntimeWarning, stacklevel=2)
    names = [names[j] for j in keep]
    Xs = Xs[:, keep]
    beta, xtx_inv, resid = _ols(ys, Xs, names)
    n, k = Xs.shape
    has_const = CONST in names
    yc = ys - ys.mean() if has_const else ys
    n_slopes = k - 1 if has_const else k
    return _result("RandomEffects", names, beta, xtx_inv, resid, n - k, float(yc @ yc),
                   n_slopes, n - 1 if has_const else n, dropped=dropped,
                   variance_components=vc, theta=th)


def hausman(fe: RegressionResult, re: RegressionResult, threshold: float = 0.05,
            label: str = "Cross-section random") -> HausmanResult:
    """Chi-square test of the gap between fixed- and random-effects slopes.

    Uses the coefficients both fits share (the intercept excluded). A gap
    covariance that is singular or not positive definite falls back to the
    pseudo-inverse with a warning.
    """
    common = [n for n in fe.names if n in re.names and n != CONST]
    if not common:
        raise errors.DataError("fixed- and random-effects fits share no coefficients")
    i_fe = [fe.names.index(n) for n in common]
    i_re = [re.names.index(n) for n in common]
    d = fe.params[i_fe] - re.params[i_re]
    gap = fe.cov[np.ix_(i_fe, i_fe)] - re.cov[np.ix_(i_re, i_re)]
    gap = (gap + gap.T) / 2
    # rescale to unit diagonal so regressors on very different scales compare fairly
    diag = np.diag(gap)
    scale = 1.0 / np.sqrt(np.where(diag > 0, diag, 1.0))
    gap_s = gap * np.outer(scale, scale)
    d_s = d * scale
    eig = np.linalg.eigvalsh(gap_s)
    if np.any(diag <= 0) or eig.min() <= 1e-10 * eig.max():
        warnings.warn("covariance gap is not positive definite; using pseudo-inverse",
                      RuntimeWarning, stacklevel=2)
        stat = float(d_s @ np.linalg.pinv(gap_s) @ d_s)
    else:
        stat = float(d_s @ np.linalg.solve(gap_s, d_s))
    stat = max(stat, 0.0)
    df = len(common)
    p = float(stats.chi2.sf(stat, df))
    rec = "RandomEffects" if p > threshold else "FixedEffects"
    return HausmanResult(stat, df, p, rec, threshold, label)


# ---------------------------------------------------------------------------
# descriptive statistics and reporting


@dataclass(frozen=True)
class Description:
    name: str
    mean: float
    std: float
    min: float
    median: float
    max: float


def describe(sample: PanelSample | Mapping[str, Sequence[float]],
             variables: Sequence[str] | None = None) -> list[Description]:
    """Mean, sample standard deviation, min, median and max per variable."""
    if isinstance(sample, PanelSample):
        cols = {sample.response: sample.y}
        cols.update({r: sample.X[:, j] for j, r in enumerate(sample.regressors)})
    else:
        cols = {k: np.asarray(v, dtype=float) for k, v in sample.items()}
    variables = list(cols) if variables is None else list(variables)
    out = []
    for name in variables:
        v = cols[name]
        if v.size == 0:
            raise errors.EmptySample(f"{name}: no observations")
        std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
        out.append(Description(name, float(v.mean()), std, float(v.min()),
                               float(np.median(v)), float(v.max())))
    return out


DESCRIBE_HEADER = ("Variables", "Mean value", "Standard deviation", "Minimum value",
                   "Median", "Maximum value")


def describe_rows(descs: Sequence[Description], decimals: int = 6) -> list[list[str]]:
    rows = [list(DESCRIBE_HEADER)]
    for d in descs:
        rows.append([DISPLAY_NAMES.get(d.name, d.name),
                     *(f"{v:.{decimals}f}" for v in (d.mean, d.std, d.min, d.median, d.max))])
    return rows


def parse_describe_rows(rows: Sequence[Sequence[str]]) -> list[Description]:
    if tuple(rows[0]) != DESCRIBE_HEADER:
        raise errors.DataError("unexpected descriptive-statistics header")
    return [Description(r[0], *(float(v) for v in r[1:])) for r in rows[1:]]


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


def _fixed(v: float, decimals: int) -> str:
    # small nonzero values keep two significant digits, e.g. 0.0000026
    if v != 0 and abs(v) < 10.0 ** (2 - decimals):
        decimals = max(decimals, 1 - int(np.floor(np.log10(abs(v)))))
    return f"{v:.{decimals}f}"


def format_coefficient(coef: float, t: float, p: float, decimals: int = 6) -> str:
    return f"{_fixed(coef, decimals)}{significance_stars(p)} ({t:.{decimals}f})"


def _ordered_names(results: Sequence[RegressionResult]) -> list[str]:
    names = []
    for r in results:
        for n in r.names:
            if n != CONST and n not in names:
                names.append(n)
    if any(CONST in r.names for r in results):
        names.append(CONST)
    return names


def regression_rows(results: Sequence[RegressionResult], decimals: int = 6) -> list[list[str]]:
    """Coefficient cells ``coef*** (t)`` per variable, then fit statistics."""
    if not results:
        raise errors.DataError("no regression results to report")
    rows = [["Variable", *(r.estimator for r in results)]]
    for name in _ordered_names(results):
        row = [DISPLAY_NAMES.get(name, name)]
        for r in results:
            if name in r.names:
                k = r.names.index(name)
                row.append(format_coefficient(r.params[k], r.tvalues[k], r.pvalues[k], decimals))
            else:
                row.append("")
        rows.append(row)
    f = lambda v: f"{v:.{decimals}f}"  # noqa: E731
    rows.append(["R-squared", *(f(r.rsquared) for r in results)])
    rows.append(["Adjusted R-squared", *(f(r.rsquared_adj) for r in results)])
    rows.append(["F-statistic", *(f(r.fvalue) for r in results)])
    rows.append(["Prob(F-statistic)", *(f(r.f_pvalue) for r in results)])
    rows.append(["Observations", *(str(r.nobs) for r in results)])
    return rows


def hausman_rows(h: HausmanResult) -> list[list[str]]:
    return [["Test Summary", "Chi-Sq. Statistic", "Chi-Sq. d.f.", "Prob."],
            [h.label, f"{h.statistic:.6f}", str(h.df), f"{h.pvalue:.4f}"]]


def render_text(rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned first column, right-aligned others, two-space gutters."""
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def regression_report(results: Sequence[RegressionResult],
                      hausman_result: HausmanResult | None = None) -> str:
    text = render_text(regression_rows(results))
    text += "\nNotes: *, **, *** significant at 10%, 5%, 1%; t values in parentheses.\n"
    if hausman_result is not None:
        text += "\n" + render_text(hausman_rows(hausman_result))
        text += f"Recommendation: {hausman_result.recommendation}\n"
    return text


def simulate_panel(n_entities: int, n_periods: int, beta: Sequence[float], sigma_u: float,
                   sigma_e: float, rng: np.random.Generator, intercept: float = 1.0,
                   correlated: float = 0.0) -> PanelSample:
    """Balanced panel ``y = intercept + X beta + u_i + e_it`` with standard normal X.

    ``correlated`` adds that multiple of ``u_i`` to every regressor, breaking
    the random-effects orthogonality assumption.
    """
    beta = np.asarray(beta, dtype=float)
    k = beta.size
    u = rng.normal(0.0, sigma_u, n_entities)
    ent = np.repeat([f"E{i:03d}" for i in range(n_entities)], n_periods)
    yrs = np.tile(np.arange(2000, 2000 + n_periods), n_entities)
    X = rng.normal(size=(n_entities * n_periods, k)) + correlated * np.repeat(u, n_periods)[:, None]
    y = intercept + X @ beta + np.repeat(u, n_periods) + rng.normal(0.0, sigma_e, len(yrs))
    return PanelSample(ent, yrs, y, X, tuple(f"x{j + 1}" for j in range(k)), "y")
