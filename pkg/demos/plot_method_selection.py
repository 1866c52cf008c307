"""
Choosing an aggregation method by information loss
==================================================

A small decision matrix is normalized, weighted by coefficient of variation
and aggregated five ways. The method whose scores lose the least of the
indicators' diversity and ranking information is the one to keep.
"""

# %%
# A toy year
# ----------
#
# Four regions, three indicators. The last one is a cost: lower is better.

import numpy as np

from cfindex import (
    METHODS, DecisionMatrix, GlobalExtrema, Polarity, Stage, aggregate, cv_weights,
    normalize_maut, ssm_loss,
)

entities = ("A", "B", "C", "D")
indicators = ("volume", "liquidity", "cost")
raw = np.array([
    [120.0, 0.8, 4.1],
    [ 80.0, 0.5, 3.2],
    [200.0, 0.9, 5.0],
    [ 40.0, 0.3, 2.9],
])
mat = DecisionMatrix(entities, indicators, raw, Stage.RAW)

# %%
# Min-max against fixed extrema. In a panel the extrema come from all years.

ext = GlobalExtrema(indicators, raw.max(axis=0), raw.min(axis=0))
polarity = [Polarity.BENEFIT, Polarity.BENEFIT, Polarity.COST]
norm = normalize_maut(mat, ext, polarity)
print(np.round(norm.cells, 3))

# %%
# Indicators that vary more across regions get more weight.

w = cv_weights(norm)
print(dict(zip(indicators, (round(float(v), 4) for v in w.weights))))

# %%
# Aggregate and score
# -------------------
#
# The loss compares the index with the raw indicators: how evenly the shares
# are spread, and how far each ranking is from a reference ranking.

for method in METHODS:
    ci = aggregate(method, norm, w)
    print(f"{method.value:7s} scores {np.round(ci.scores, 3)}  "
          f"loss {ssm_loss(mat, w, ci.scores):.4f}")

# %%
# Ties in the smallest loss are broken in the order SAW, WP, WDI2, WDIInf,
# TOPSIS, with a warning.
