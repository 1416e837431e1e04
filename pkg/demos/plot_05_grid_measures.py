"""
Permutant measures on a grid
============================

``X`` is a 2x3 grid of cells and ``Y`` its two rows.  Row swaps and column
permutations act on ``X``; ``T`` keeps only the row part.
"""
from geneo import grid_setting, is_permutant, measure_from_function

T = grid_setting(2, 3)

# %%
# The number of cells a function hits is invariant under the action.
image_size = measure_from_function(T, lambda h: len(set(h)))
print("|Im(h)|:", is_permutant(image_size))

# %%
# So is the indicator of "row i is sent into row i".
row_cells = measure_from_function(T, lambda h: float(all(h[i] // 3 == i for i in range(2))))
print("row-cell indicator:", is_permutant(row_cells), " support size", len(row_cells.support))

# %%
# A measure on a single function is not.
single = measure_from_function(T, lambda h: float(h == (0, 3)))
print("single point:", is_permutant(single))
