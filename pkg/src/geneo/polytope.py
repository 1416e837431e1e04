"""Orbit indicator basis for permutant measures and the polytope of linear GENEOs.

Every permutant measure is constant on orbits, so it is a combination
``sum_i a_i nu_i`` of the orbit indicators ``nu_i``.  Its total variation
is ``sum_i |a_i| |O_i|``, which makes the non-expansive operators the
weighted l1 ball in the coefficients ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import DEFAULT_GUARD, Orbit, SignedMeasure, all_orbits, is_permutant, orbit_of
from .errors import NotPermutant, ShapeMismatch, WrongSetting
from .groups import Homomorphism
from .representation import TOL, matrix_of_measure


@dataclass
class OrbitBasis:
    hom: Homomorphism
    orbits: list[Orbit]
    nu: list[SignedMeasure]
    basis_matrices: list[np.ndarray]

    def __len__(self):
        return len(self.orbits)

    @property
    def orbit_sizes(self) -> np.ndarray:
        return np.array([len(o) for o in self.orbits])

    def combination(self, a) -> SignedMeasure:
        """The measure ``sum_i a_i nu_i``."""
        a = _check_length(a, self)
        entries = {}
        for ai, orbit in zip(a, self.orbits):
            for h in orbit.members:
                entries[h] = float(ai)
        return SignedMeasure(self.hom, entries, permutant=True)

    def combination_matrix(self, a) -> np.ndarray:
        a = _check_length(a, self)
        out = np.zeros((self.hom.target.degree, self.hom.source.degree))
        for ai, M in zip(a, self.basis_matrices):
            out += ai * M
        return out


def _check_length(a, basis: OrbitBasis) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (len(basis),):
        raise ShapeMismatch(f"expected {len(basis)} coefficients, got shape {a.shape}")
    return a


def orbit_basis(hom: Homomorphism, guard: int = DEFAULT_GUARD, functions=None) -> OrbitBasis:
    """Orbit indicators and their operator matrices.

    By default every orbit of ``X^Y`` is used.  ``functions`` restricts the
    basis to the orbits meeting the given functions, which is how the
    bijection orbits of ``X^X`` are singled out.
    """
    if functions is None:
        orbits = all_orbits(hom, guard)
    else:
        found = {}
        for h in functions:
            h = tuple(int(v) for v in h)
            if any(h in o for o in found.values()):
                continue
            o = orbit_of(h, hom)
            found[o.representative] = o
        orbits = [found[r] for r in sorted(found)]
    nu = [SignedMeasure(hom, {h: 1.0 for h in o.members}, permutant=True) for o in orbits]
    return OrbitBasis(hom, orbits, nu, [matrix_of_measure(v) for v in nu])


def measure_coefficients(mu: SignedMeasure, basis: OrbitBasis) -> np.ndarray:
    """Coefficients ``a`` with ``mu == sum_i a_i nu_i``."""
    if mu.hom is not basis.hom:
        raise ValueError("measure and basis belong to different settings")
    if not (mu.permutant or is_permutant(mu)):
        raise NotPermutant("only permutant measures have orbit coefficients")
    a = np.array([mu[o.representative] for o in basis.orbits])
    covered = sum(len(o) for o, ai in zip(basis.orbits, a) if ai != 0.0)
    if covered != len(mu.entries):
        raise ValueError("measure has mass outside the orbits of this basis")
    return a


def weighted_l1(a, basis: OrbitBasis) -> float:
    a = _check_length(a, basis)
    return float(np.sum(np.abs(a) * basis.orbit_sizes))


def is_linear_geneo_hull(a, basis: OrbitBasis, tol: float = TOL) -> bool:
    """Membership of ``sum_i a_i F_{nu_i}`` in ``conv(+-F_{nu_i} / |O_i|)``."""
    return weighted_l1(a, basis) <= 1.0 + tol


_IDENTITY = (0, 1, 2)
_THREE_CYCLE = (1, 2, 0)
_TRANSPOSITION = (1, 0, 2)


def check_redundancy_identity(basis: OrbitBasis, tol: float = 1e-12) -> bool:
    """In ``Sym(3)`` acting on itself by conjugation, the transposition vertex is redundant.

    Checks ``M3/|O3| == (1/3) M1/|O1| + (2/3) M2/|O2|`` where ``O1``, ``O2``,
    ``O3`` are the orbits of the identity, the 3-cycles and the
    transpositions.
    """
    hom = basis.hom
    G = hom.source
    if (
        G.degree != 3
        or hom.target.degree != 3
        or G.order != 6
        or not np.array_equal(hom.images, G.elements)
    ):
        raise WrongSetting("the identity is stated for Sym(3) with T = id")
    found = {}
    for key in (_IDENTITY, _THREE_CYCLE, _TRANSPOSITION):
        for i, o in enumerate(basis.orbits):
            if key in o:
                found[key] = i
                break
        else:
            raise WrongSetting(f"basis lacks the orbit of {key}")
    scaled = {
        key: basis.basis_matrices[i] / len(basis.orbits[i]) for key, i in found.items()
    }
    rhs = scaled[_IDENTITY] / 3.0 + 2.0 * scaled[_THREE_CYCLE] / 3.0
    return bool(np.max(np.abs(scaled[_TRANSPOSITION] - rhs)) <= tol)
