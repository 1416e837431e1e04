"""
Orbit basis and the polytope of linear GENEOs
=============================================

Permutant measures are combinations of orbit indicators.  A combination
``sum a_i nu_i`` is non-expansive when ``sum |a_i| |O_i| <= 1``.
"""
import numpy as np

from geneo import (
    check_redundancy_identity,
    identity_homomorphism,
    is_linear_geneo_hull,
    orbit_basis,
    symmetric_group,
    weighted_l1,
)

T = identity_homomorphism(symmetric_group(3))
basis = orbit_basis(T)

# %%
# Seven orbits on the 27 functions, listed by their smallest member.
for o, M in zip(basis.orbits, basis.basis_matrices):
    print(o.representative, "size", len(o))

# %%
# The bijection orbits give I, J - I and J.  Scaled by orbit size, the
# transposition vertex is a mix of the other two, so it is not a vertex.
print("redundancy identity:", check_redundancy_identity(basis))

# %%
# Membership in the ball.
a = np.zeros(len(basis))
a[[i for i, o in enumerate(basis.orbits) if (0, 1, 2) in o][0]] = 1 / 3
a[[i for i, o in enumerate(basis.orbits) if (1, 2, 0) in o][0]] = 1 / 3
print("weighted l1:", weighted_l1(a, basis), "inside:", is_linear_geneo_hull(a, basis))
print("doubled inside:", is_linear_geneo_hull(2 * a, basis))
