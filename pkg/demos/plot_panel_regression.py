"""
What drives the index: panel regressions
========================================

Pooled, fixed-effects and random-effects fits of the index on its candidate
drivers, and a Hausman test to choose between the last two.

Run ``python demos/make_demo_data.py`` first.
"""

# %%
import warnings
from pathlib import Path

import numpy as np

from cfindex import PanelSample, describe, fixed_effects, hausman, pooled_ols, random_effects
from cfindex.panel import describe_rows, regression_report, simulate_panel

sample = PanelSample.from_csv(Path(__file__).parent / "data" / "drivers.csv")
cols = {sample.response: sample.y, **{n: sample.X[:, j] for j, n in enumerate(sample.regressors)}}
for row in describe_rows(describe(cols)):
    print(row)

# %%
# Location never changes within a region, so the within transformation
# removes it from the fixed-effects fit.

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    po, fe, re = pooled_ols(sample), fixed_effects(sample), random_effects(sample)
    h = hausman(fe, re)
for w in caught:
    print("warning:", w.message)
print(re.variance_components, "theta", np.round(re.theta[0], 3))

# %%
# When the random-effects covariance is not smaller than the fixed-effects
# one the quadratic form is not positive and the statistic clamps to zero.

print(h)
print(regression_report([po, fe, re], h))

# %%
# Correlated effects
# ------------------
#
# If the regional effect moves with a regressor, random effects is
# inconsistent and the test should reject it.

rng = np.random.default_rng(7)
sim = simulate_panel(60, 8, [0.5, 1.0], 1.0, 1.0, rng, correlated=1.0)
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    print(hausman(fixed_effects(sim), random_effects(sim)))
