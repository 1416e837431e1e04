"""The twisted conjugation action of ``G`` on functions ``Y -> X``, and permutant measures.

A function ``h: Y -> X`` is a tuple of length ``m = |Y|`` whose entries are
points of ``X`` (``h[i]`` is the image of ``y_i``).  For a homomorphism
``T: G -> K`` the group ``G`` acts on ``X^Y`` by

    act(g, h) = g o h o T(g^-1),

and a signed measure on ``X^Y`` that is constant along the orbits of this
action is called permutant.  Measures are sparse: functions that are not
stored carry zero mass.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainTooLarge, NotPermutant
from .groups import Homomorphism, Permutation

PERMUTANT_TOL = 1e-9
DEFAULT_GUARD = 10**7


def _element_index(hom: Homomorphism, g) -> int:
    if isinstance(g, (int, np.integer)):
        return int(g)
    return hom.source.index(g)


def act_many(hom: Homomorphism, g_index: int, H: np.ndarray) -> np.ndarray:
    """Apply one group element to every row of the ``(N, m)`` function array ``H``."""
    G = hom.source
    g = G.elements[g_index]
    t_inv = hom.images[G.inverse_indices[g_index]]
    return g[np.asarray(H)[..., t_inv]]


def act(g, h, hom: Homomorphism) -> tuple[int, ...]:
    """``g o h o T(g^-1)`` for a group element ``g`` (a :class:`Permutation` or an index)."""
    out = act_many(hom, _element_index(hom, g), np.asarray(h, dtype=np.int64))
    return tuple(int(v) for v in out)


def _all_images(hom: Homomorphism, h) -> np.ndarray:
    """``(|G|, m)`` array whose row ``i`` is ``act(G.elements[i], h)``."""
    G = hom.source
    h = np.asarray(h, dtype=np.int64)
    t_inv = hom.images[G.inverse_indices]
    return np.take_along_axis(G.elements, h[t_inv], axis=1)


@dataclass(frozen=True)
class Orbit:
    members: tuple[tuple[int, ...], ...]
    stabilizer_size: int

    @property
    def representative(self) -> tuple[int, ...]:
        return self.members[0]

    def __len__(self):
        return len(self.members)

    def __contains__(self, h) -> bool:
        return tuple(h) in self._member_set

    @property
    def _member_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_set", cached)
        return cached


def orbit_of(h, hom: Homomorphism) -> Orbit:
    h = tuple(int(v) for v in h)
    images = _all_images(hom, h)
    members = np.unique(images, axis=0)
    stab = int(np.sum(np.all(images == np.asarray(h), axis=1)))
    assert stab * len(members) == hom.source.order, "orbit-stabilizer relation violated"
    return Orbit(tuple(tuple(int(v) for v in row) for row in members), stab)


def function_count(hom: Homomorphism) -> int:
    return hom.source.degree ** hom.target.degree


def all_functions(n: int, m: int) -> np.ndarray:
    """Every function ``Y -> X`` as rows of an ``(n**m, m)`` array, in lexicographic order."""
    codes = np.arange(n**m, dtype=np.int64)
    return np.stack(np.unravel_index(codes, (n,) * m), axis=1).astype(np.int64)


def all_orbits(hom: Homomorphism, guard: int = DEFAULT_GUARD) -> list[Orbit]:
    """Partition ``X^Y`` into orbits, ordered by their lexicographically smallest member."""
    n, m = hom.source.degree, hom.target.degree
    total = n**m
    if total > guard:
        raise DomainTooLarge(f"|X^Y| = {n}^{m} exceeds the guard {guard}")
    H = all_functions(n, m)
    shape = (n,) * m
    rows, cols = [], []
    for gi in hom.source.generator_indices():
        moved = np.ravel_multi_index(act_many(hom, gi, H).T, shape)
        rows.append(np.arange(total))
        cols.append(moved)
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(total, total))
        _, labels = connected_components(graph, directed=True, connection="weak")
    else:
        labels = np.arange(total)
    # relabel components by smallest member so the orbit order is lexicographic
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    blocks = np.split(order, bounds)
    blocks.sort(key=lambda b: b[0])
    G_order = hom.source.order
    orbits = []
    for block in blocks:
        members = tuple(tuple(int(v) for v in H[i]) for i in block)
        orbits.append(Orbit(members, G_order // len(block)))
    return orbits


class SignedMeasure:
    """A finitely supported signed measure on ``X^Y`` for a fixed ``T: G -> K``.

    ``permutant`` is only ever set by :meth:`verified` (or by code that
    constructs measures that are permutant by design and checks them).
    """

    def __init__(self, hom: Homomorphism, entries: Mapping | None = None, permutant: bool = False):
        self.hom = hom
        self.entries: dict[tuple[int, ...], float] = {}
        n, m = hom.source.degree, hom.target.degree
        for h, v in (entries or {}).items():
            h = tuple(int(x) for x in h)
            if len(h) != m or min(h) < 0 or max(h) >= n:
                raise ValueError(f"{h} is not a function from {m} points to {n} points")
            v = float(v)
            if v != 0.0:
                self.entries[h] = self.entries.get(h, 0.0) + v
        self.permutant = permutant

    @property
    def x_size(self) -> int:
        return self.hom.source.degree

    @property
    def y_size(self) -> int:
        return self.hom.target.degree

    def __repr__(self):
        return f"SignedMeasure({len(self.entries)} atoms, total variation {self.total_variation():.6g})"

    def __getitem__(self, h) -> float:
        return self.entries.get(tuple(h), 0.0)

    def __len__(self):
        return len(self.entries)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.entries)

    def items(self):
        return sorted(self.entries.items())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Support as an ``(k, m)`` integer array and the matching values."""
        items = self.items()
        H = np.array([h for h, _ in items], dtype=np.int64).reshape(len(items), self.y_size)
        vals = np.array([v for _, v in items], dtype=float)
        return H, vals

    def total_variation(self) -> float:
        return float(sum(abs(v) for v in self.entries.values()))

    def total_mass(self) -> float:
        return float(sum(self.entries.values()))

    def _combine(self, other: "SignedMeasure", sign: float) -> "SignedMeasure":
        if other.hom is not self.hom:
            raise ValueError("measures live on different settings")
        out = dict(self.entries)
        for h, v in other.entries.items():
            out[h] = out.get(h, 0.0) + sign * v
        return SignedMeasure(self.hom, out, permutant=self.permutant and other.permutant)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return self.scaled(-1.0)

    def scaled(self, factor: float) -> "SignedMeasure":
        return SignedMeasure(
            self.hom, {h: factor * v for h, v in self.entries.items()}, permutant=self.permutant
        )

    def verified(self) -> "SignedMeasure":
        """Return a copy flagged as permutant, or raise :class:`NotPermutant`."""
        if not is_permutant(self):
            raise NotPermutant("measure is not constant along the orbits of the action")
        return SignedMeasure(self.hom, self.entries, permutant=True)

    def orbit_values(self) -> dict[tuple[int, ...], float]:
        """Orbit representative -> common value, for a verified permutant measure."""
        if not self.permutant:
            raise NotPermutant("call verified() before using the orbit-indexed view")
        out = {}
        seen = set()
        for h in self.support:
            if h in seen:
                continue
            orbit = orbit_of(h, self.hom)
            seen.update(orbit.members)
            out[orbit.representative] = self.entries[h]
        return out

    def to_json(self) -> dict:
        return {"entries": [{"h": list(h), "value": v} for h, v in self.items()]}

    @classmethod
    def from_json(cls, data, hom: Homomorphism) -> "SignedMeasure":
        if isinstance(data, str):
            data = json.loads(data)
        entries = {}
        for e in data["entries"]:
            h = tuple(e["h"])
            entries[h] = entries.get(h, 0.0) + float(e["value"])
        return cls(hom, entries)


def is_permutant(mu: SignedMeasure, tol: float = PERMUTANT_TOL) -> bool:
    """Check ``mu(act(g, h)) == mu(h)`` for every support point and generator of ``G``.

    Checking generators is enough: the stabiliser of the measure is a
    subgroup, so it contains ``G`` once it contains a generating set.
    """
    if not mu.entries:
        return True
    H, vals = mu.arrays()
    for gi in mu.hom.source.generator_indices():
        moved = act_many(mu.hom, gi, H)
        for row, v in zip(moved, vals):
            if abs(mu.entries.get(tuple(int(x) for x in row), 0.0) - v) > tol:
                return False
    return True


def measure_from_function(
    hom: Homomorphism, fn: Callable[[tuple[int, ...]], float], guard: int = DEFAULT_GUARD
) -> SignedMeasure:
    """Tabulate ``fn`` over all of ``X^Y`` (guarded enumeration)."""
    n, m = hom.source.degree, hom.target.degree
    if n**m > guard:
        raise DomainTooLarge(f"|X^Y| = {n}^{m} exceeds the guard {guard}")
    entries = {}
    for row in all_functions(n, m):
        h = tuple(int(v) for v in row)
        entries[h] = fn(h)
    return SignedMeasure(hom, entries)


def uniform_measure(hom: Homomorphism, functions: Iterable, value: float) -> SignedMeasure:
    return SignedMeasure(hom, {tuple(h): value for h in functions})


def function_from_permutation(p: Permutation) -> tuple[int, ...]:
    """A permutation of ``X`` viewed as a function ``X -> X``."""
    return p.image
