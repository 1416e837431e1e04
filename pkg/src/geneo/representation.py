"""Represent an equivariant matrix by a permutant measure, and decide non-expansivity.

The pipeline for a matrix ``B`` (shape ``|Y| x |X|``, acting on column
vectors) that is equivariant for ``T: G -> K``:

1. split ``B`` into its positive and negative parts;
2. scale each part to a row-stochastic matrix and decompose it into
   rectangular permutation matrices, giving coefficient functions ``c+`` and
   ``c-`` on ``X^Y``;
3. average each coefficient function along the orbits of the twisted
   action, which turns it into a permutant measure with the same matrix.

Only the functions appearing in a decomposition are ever touched, so
``X^Y`` is never enumerated.  Measures reconstructing ``B`` are not unique,
so callers should compare matrices, not measures.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import SignedMeasure, orbit_of
from .errors import (
    ConsistencyError,
    NotEquivariant,
    NotTransitive,
    ShapeMismatch,
    UnequalRowSums,
)
from .groups import Homomorphism, Permutation, build_homomorphism, group_closure, is_transitive, orbit_partition
from .stochastic import decompose_stochastic

TOL = 1e-9


@dataclass(frozen=True)
class GeoProblem:
    """A candidate linear GEO: the homomorphism ``T`` and the matrix ``B`` of ``F``.

    ``rows`` records which rows of a larger problem this one was cut from
    (see :func:`split_by_target_orbits`); it is ``None`` for whole problems.
    """

    hom: Homomorphism
    B: np.ndarray
    rows: tuple[int, ...] | None = None

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        if B.ndim != 2 or B.shape != (self.hom.target.degree, self.hom.source.degree):
            raise ShapeMismatch(
                f"matrix has shape {B.shape}, expected "
                f"({self.hom.target.degree}, {self.hom.source.degree})"
            )
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def G(self):
        return self.hom.source

    @property
    def K(self):
        return self.hom.target


@dataclass(frozen=True)
class SplitParts:
    Bplus: np.ndarray
    Bminus: np.ndarray
    beta_plus: np.ndarray | None
    beta_minus: np.ndarray | None


@dataclass(frozen=True)
class MeasureTriple:
    mu_plus: SignedMeasure
    mu_minus: SignedMeasure

    @property
    def mu(self) -> SignedMeasure:
        return self.mu_plus - self.mu_minus


def check_equivariance(P: GeoProblem, tol: float = TOL, all_elements: bool = False) -> bool:
    """Check ``B[T(g)(i), g(j)] == B[i, j]`` for every generator ``g`` of ``G``.

    With ``all_elements`` the identity is checked for the whole group, which
    is redundant in exact arithmetic but guards against tolerance creep.
    """
    G = P.G
    if all_elements:
        indices = range(G.order)
    else:
        indices = G.generator_indices()
    for gi in indices:
        g, tg = G.elements[gi], P.hom.images[gi]
        if np.max(np.abs(P.B[tg][:, g] - P.B), initial=0.0) > tol:
            return False
    return True


def check_row_permutation(B, tol: float = TOL) -> np.ndarray | None:
    """The first row if every row is a rearrangement of it, else ``None``."""
    B = np.asarray(B, dtype=float)
    ordered = np.sort(B, axis=1)
    if np.all(np.abs(ordered - ordered[0]) <= tol):
        return B[0].copy()
    return None


def split_pos_neg(B) -> SplitParts:
    B = np.asarray(B, dtype=float)
    Bplus = np.maximum(B, 0.0)
    Bminus = np.maximum(-B, 0.0)
    return SplitParts(Bplus, Bminus, check_row_permutation(Bplus), check_row_permutation(Bminus))


def extract_coeffs(part, tol: float = TOL) -> dict[tuple[int, ...], float]:
    """Nonnegative coefficients ``c`` with ``sum_h c(h) R(h) == part``.

    ``part`` must be nonnegative with equal row sums; it is scaled by its
    row sum to a stochastic matrix, decomposed, and scaled back.
    """
    part = np.asarray(part, dtype=float)
    sums = part.sum(axis=1)
    if np.max(sums) - np.min(sums) > tol * max(1.0, float(np.max(sums))):
        raise UnequalRowSums(f"row sums range over [{np.min(sums)}, {np.max(sums)}]")
    scale = float(sums[0])
    if scale <= tol:
        return {}
    # tolerances are absolute on the scale of ``part``
    scaled_tol = tol * max(1.0, scale) / scale
    coeffs: dict[tuple[int, ...], float] = {}
    for gamma, rows in decompose_stochastic(part / scale, tol=scaled_tol):
        coeffs[rows] = coeffs.get(rows, 0.0) + scale * gamma
    return coeffs


def orbit_average(coeffs, hom: Homomorphism) -> SignedMeasure:
    """Spread each coefficient evenly over the orbit of its function.

    ``mu(h) = sum_{f in O(h)} c(f) / |O(h)|``; the mass carried by every
    orbit is unchanged.
    """
    orbit_mass: dict[tuple[int, ...], float] = {}
    orbits = {}
    member_of: dict[tuple[int, ...], tuple[int, ...]] = {}
    for h, c in sorted(dict(coeffs).items()):
        h = tuple(h)
        rep = member_of.get(h)
        if rep is None:
            orbit = orbit_of(h, hom)
            rep = orbit.representative
            orbits[rep] = orbit
            for f in orbit.members:
                member_of[f] = rep
        orbit_mass[rep] = orbit_mass.get(rep, 0.0) + float(c)
    entries = {}
    for rep, mass in orbit_mass.items():
        orbit = orbits[rep]
        for f in orbit.members:
            entries[f] = mass / len(orbit)
    return SignedMeasure(hom, entries, permutant=True)


def represent(P: GeoProblem, tol: float = TOL) -> MeasureTriple:
    """Permutant measures ``mu+``, ``mu-`` whose difference has matrix ``B``.

    Requires ``T(G)`` to act transitively on ``Y``; otherwise split the
    problem with :func:`split_by_target_orbits` first.
    """
    if not check_equivariance(P, tol):
        raise NotEquivariant("matrix is not equivariant with respect to T")
    if not is_transitive(P.hom.image_group()):
        raise NotTransitive("T(G) is not transitive on Y; use split_by_target_orbits")
    parts = split_pos_neg(P.B)
    mu_plus = orbit_average(extract_coeffs(parts.Bplus, tol), P.hom)
    mu_minus = orbit_average(extract_coeffs(parts.Bminus, tol), P.hom)
    return MeasureTriple(mu_plus, mu_minus)


def apply_measure(mu: SignedMeasure, phi) -> np.ndarray:
    """``psi(y) = sum_h phi(h(y)) mu(h)``."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (mu.x_size,):
        raise ShapeMismatch(f"signal has shape {phi.shape}, expected ({mu.x_size},)")
    if not mu.entries:
        return np.zeros(mu.y_size)
    H, vals = mu.arrays()
    return vals @ phi[H]


def matrix_of_measure(mu: SignedMeasure) -> np.ndarray:
    """``sum_h mu(h) R(h)``."""
    B = np.zeros((mu.y_size, mu.x_size))
    if not mu.entries:
        return B
    H, vals = mu.arrays()
    rows = np.broadcast_to(np.arange(mu.y_size), H.shape)
    np.add.at(B, (rows, H), vals[:, None])
    return B


def operator_norm_inf(B) -> float:
    B = np.asarray(B, dtype=float)
    if B.size == 0:
        return 0.0
    return float(np.max(np.abs(B).sum(axis=1)))


def norm_witness(B) -> np.ndarray:
    """The signal ``sgn(B[0])``, which attains the operator norm when rows are rearrangements."""
    return np.sign(np.asarray(B, dtype=float)[0])


def is_geneo(P: GeoProblem, tol: float = TOL) -> tuple[bool, MeasureTriple]:
    """Decide non-expansivity from the represented measure, cross-checked with the matrix norm."""
    triple = represent(P, tol)
    tv = triple.mu.total_variation()
    norm = operator_norm_inf(P.B)
    if abs(tv - norm) > tol * max(1.0, norm):
        raise ConsistencyError(f"total variation {tv} differs from operator norm {norm}")
    return tv <= 1.0 + tol, triple


def check_mutual_singularity(triple: MeasureTriple, tol: float = TOL) -> bool:
    plus, minus = triple.mu_plus.entries, triple.mu_minus.entries
    return not any(v > tol and minus.get(h, 0.0) > tol for h, v in plus.items())


def _restrict(p: np.ndarray, block: list[int]) -> Permutation:
    pos = {y: k for k, y in enumerate(block)}
    return Permutation(tuple(pos[int(p[y])] for y in block))


def split_by_target_orbits(P: GeoProblem, tol: float = TOL) -> list[GeoProblem]:
    """One sub-problem per orbit of ``T(G)`` on ``Y``, with the rows of ``B`` on that orbit.

    The target group of each sub-problem is ``T(G)`` restricted to the
    orbit, on which it is transitive by construction.
    """
    if not check_equivariance(P, tol):
        raise NotEquivariant("matrix is not equivariant with respect to T")
    blocks = orbit_partition(P.hom.image_group())
    if len(blocks) == 1:
        return [P]
    out = []
    gen_images = [P.hom.images[gi] for gi in P.G.generator_indices()]
    for block in blocks:
        imgs = [_restrict(t, block) for t in gen_images]
        K_r = group_closure(len(block), [q for q in dict.fromkeys(imgs) if not q.is_identity()])
        T_r = build_homomorphism(P.G, K_r, imgs)
        out.append(GeoProblem(T_r, P.B[block], rows=tuple(block)))
    return out


def represent_by_orbits(P: GeoProblem, tol: float = TOL) -> list[tuple[tuple[int, ...], MeasureTriple]]:
    """:func:`represent` on every target orbit, paired with the orbit's rows of ``B``."""
    return [(sub.rows or tuple(range(P.K.degree)), represent(sub, tol)) for sub in split_by_target_orbits(P, tol)]
