"""
Rectangular stochastic decomposition
====================================

A row-stochastic matrix is a convex combination of matrices with a single 1
per row.  The greedy peel below takes, in each row, the largest entry still
left and removes the smallest of those.
"""
import numpy as np

from geneo import decompose_stochastic, reconstruct

# %%
# A 2x3 matrix whose rows are not rearrangements of each other.
B = np.array([[1 / 2, 0, 1 / 2], [1 / 3, 1 / 3, 1 / 3]])
combo = decompose_stochastic(B)

for weight, rows in combo:
    print(f"{weight:.4f}  rows -> columns {rows}")

# %%
# The weights sum to one and the terms rebuild B.
print("sum of weights:", combo.weights.sum())
print("max error:", np.max(np.abs(reconstruct(combo, *B.shape) - B)))

# %%
# The decomposition is not unique.  Spreading the weight over all six
# choices whose first row picks column 0 or 2 also rebuilds B, for instance
# with weights 1/12, 5/24, 5/24 and 1/4, 1/8, 1/8.
