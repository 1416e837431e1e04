"""
The averaging operator on three points
======================================

``Sym(3)`` acts on ``X = Y = {0, 1, 2}``.  The operator sending a signal to
its mean is equivariant and non-expansive.  Two different permutant
measures produce it.
"""
import numpy as np

from geneo import GeoProblem, SignedMeasure, identity_homomorphism, is_geneo, is_permutant, symmetric_group
from geneo.representation import matrix_of_measure

T = identity_homomorphism(symmetric_group(3))
B = np.full((3, 3), 1 / 3)

# %%
# Represent B by a measure and read off the verdict.
ok, triple = is_geneo(GeoProblem(T, B))
print("GENEO:", ok, " total variation:", triple.mu.total_variation())
print("measure found:", dict(triple.mu.items()))

# %%
# The rotations and the reflections each carry weight 1/3 and give the same matrix.
mu = SignedMeasure(T, {(0, 1, 2): 1 / 3, (1, 2, 0): 1 / 3, (2, 0, 1): 1 / 3})
nu = SignedMeasure(T, {(2, 1, 0): 1 / 3, (1, 0, 2): 1 / 3, (0, 2, 1): 1 / 3})
print("permutant:", is_permutant(mu), is_permutant(nu))
print(matrix_of_measure(mu))
print("same matrix:", np.array_equal(matrix_of_measure(mu), matrix_of_measure(nu)))
