"""Permutation groups stored extensionally, and verified homomorphisms between them.

Points of a finite set of size ``n`` are the integers ``0 .. n-1``.  A
permutation is stored as its image array, ``image[j] = sigma(j)``, and
composition follows the usual right-to-left convention::

    (g * h)(j) == g(h(j))

Groups are closed eagerly: every element is materialised, in a fixed
order (breadth-first by generator word length, ties broken by the
lexicographic order of the image arrays).  This keeps serialised
artifacts and test fixtures stable between runs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import GroupTooLarge, InconsistentHomomorphism

DEFAULT_MAX_ORDER = 10**6


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}`` given by its image array."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if not image:
            raise ValueError("a permutation needs at least one point")
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"{image} is not a permutation of 0..{len(image) - 1}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        """Build a permutation of ``n`` points from disjoint cycles, e.g. ``(0, 1, 2)``."""
        image = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                image[a] = b
        return cls(tuple(image))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("cannot compose permutations of different degrees")
        return Permutation(tuple(self.image[j] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for j, v in enumerate(self.image):
            inv[v] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == v for j, v in enumerate(self.image))

    def order(self) -> int:
        g, k = self, 1
        while not g.is_identity():
            g, k = g * self, k + 1
        return k

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)


def _row_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return rows.view(np.dtype((np.void, rows.itemsize * rows.shape[-1]))).reshape(rows.shape[:-1])


def _as_image(g) -> tuple[int, ...]:
    if isinstance(g, Permutation):
        return g.image
    return tuple(int(v) for v in g)


class PermutationGroup:
    """A finite permutation group with all of its elements listed.

    Use :func:`group_closure` (or one of the named constructors below)
    rather than calling the constructor directly.
    """

    def __init__(self, degree, generators, elements, parents):
        self.degree = degree
        self.generators = tuple(generators)
        self._elements = np.asarray(elements, dtype=np.int64).reshape(-1, degree)
        self._elements.setflags(write=False)
        # (parent index, generator index) of the BFS word; (-1, -1) for the identity
        self._parents = tuple(parents)
        self._index = {row.tobytes(): i for i, row in enumerate(self._elements)}
        keys = _row_keys(self._elements)
        self._order_keys = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._order_keys]
        self._inverse = None

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self._elements)

    def __len__(self):
        return self.order

    @property
    def elements(self) -> np.ndarray:
        """Read-only ``(order, degree)`` array of image arrays."""
        return self._elements

    @property
    def identity_index(self) -> int:
        return 0

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(self._elements[i]))

    def __iter__(self) -> Iterator[Permutation]:
        for i in range(self.order):
            yield self.element(i)

    def index(self, g) -> int:
        """Position of ``g`` in :attr:`elements`; raises ``KeyError`` if absent."""
        key = np.asarray(_as_image(g), dtype=np.int64).tobytes()
        return self._index[key]

    def lookup(self, rows) -> np.ndarray:
        """Vectorised :meth:`index` over the last axis of ``rows``."""
        keys = _row_keys(np.asarray(rows))
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if not np.all(self._sorted_keys[pos] == keys):
            raise KeyError("some rows are not elements of the group")
        return self._order_keys[pos]

    def __contains__(self, g) -> bool:
        try:
            self.index(g)
        except (KeyError, ValueError):
            return False
        return True

    @property
    def inverse_indices(self) -> np.ndarray:
        if self._inverse is None:
            self._inverse = self.lookup(np.argsort(self._elements, axis=1))
            self._inverse.setflags(write=False)
        return self._inverse

    def compose_indices(self, i: int, j: int) -> int:
        """Index of ``elements[i] * elements[j]``."""
        return self._index[self._elements[i][self._elements[j]].tobytes()]

    def generator_indices(self) -> list[int]:
        return [self.index(s) for s in self.generators]

    def to_json(self) -> dict:
        return {
            "carrier_size": self.degree,
            "generators": [list(s.image) for s in self.generators],
        }

    def is_closed(self) -> bool:
        """Check closure under composition and inverse on the full table."""
        E = self._elements
        try:
            self.lookup(np.argsort(E, axis=1))
            for g in E:
                self.lookup(g[E])
        except KeyError:
            return False
        return True


def group_closure(
    degree: int,
    generators: Iterable,
    max_order: int = DEFAULT_MAX_ORDER,
) -> PermutationGroup:
    """Generate the smallest permutation group containing ``generators``.

    Elements are produced breadth-first: level ``k`` holds the elements whose
    shortest word in the generators has length ``k``, sorted lexicographically
    by image array.

    >>> group_closure(3, [Permutation((1, 2, 0))]).order
    3
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    gens = []
    for g in generators:
        g = g if isinstance(g, Permutation) else Permutation(tuple(g))
        if g.degree != degree:
            raise ValueError(f"generator {g.image} does not act on {degree} points")
        gens.append(g)
    gen_arrays = [g.as_array() for g in gens]

    ident = np.arange(degree, dtype=np.int64)
    elements = [ident]
    parents = [(-1, -1)]
    seen = {ident.tobytes(): 0}
    frontier = [0]
    while frontier:
        found = {}
        for p in frontier:
            g = elements[p]
            for s, arr in enumerate(gen_arrays):
                new = arr[g]
                key = new.tobytes()
                if key not in seen and key not in found:
                    found[key] = (new, (p, s))
        level = sorted(found.values(), key=lambda item: tuple(item[0]))
        frontier = []
        for new, parent in level:
            seen[new.tobytes()] = len(elements)
            frontier.append(len(elements))
            elements.append(new)
            parents.append(parent)
            if len(elements) > max_order:
                raise GroupTooLarge(
                    f"group closure exceeded {max_order} elements; raise max_order to continue"
                )
    return PermutationGroup(degree, gens, np.array(elements), parents)


def is_transitive(group: PermutationGroup) -> bool:
    """True iff the orbit of point 0 is the whole carrier."""
    return len(np.unique(group.elements[:, 0])) == group.degree


def orbit_partition(group: PermutationGroup) -> list[list[int]]:
    """Orbits of the group on its carrier, each sorted, ordered by smallest member."""
    blocks = []
    assigned = np.zeros(group.degree, dtype=bool)
    for x in range(group.degree):
        if assigned[x]:
            continue
        orbit = np.unique(group.elements[:, x])
        assigned[orbit] = True
        blocks.append([int(v) for v in orbit])
    return blocks


class Homomorphism:
    """A group homomorphism ``T: G -> K`` stored as a lookup table of indices.

    ``table[i]`` is the index in ``target`` of the image of
    ``source.elements[i]``.  Instances are built by
    :func:`build_homomorphism`, which checks the homomorphism property.
    """

    def __init__(self, source: PermutationGroup, target: PermutationGroup, table):
        self.source = source
        self.target = target
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self._images = target.elements[self.table]
        self._images.setflags(write=False)
        self._image_group = None

    def __repr__(self):
        return f"Homomorphism({self.source!r} -> {self.target!r})"

    @property
    def images(self) -> np.ndarray:
        """``images[i]`` is the image array of ``T(source.elements[i])``."""
        return self._images

    def __call__(self, g) -> Permutation:
        return self.target.element(self.table[self.source.index(g)])

    @property
    def gen_images(self) -> list[Permutation]:
        return [self(s) for s in self.source.generators]

    def image_group(self) -> PermutationGroup:
        """The subgroup ``T(G)`` of the target."""
        if self._image_group is None:
            gens = []
            for s in self.gen_images:
                if s not in gens:
                    gens.append(s)
            self._image_group = group_closure(self.target.degree, gens)
        return self._image_group

    def to_json(self) -> dict:
        return {"gen_images": [list(s.image) for s in self.gen_images]}


def build_homomorphism(
    G: PermutationGroup,
    K: PermutationGroup,
    gen_images,
    n_random_pairs: int = 10**4,
    seed: int = 0,
) -> Homomorphism:
    """Extend generator images to a full table and verify it is a homomorphism.

    ``gen_images`` is either a sequence aligned with ``G.generators`` or a
    mapping from generator to image.
    """
    if isinstance(gen_images, Mapping):
        lookup = {_as_image(k): v for k, v in gen_images.items()}
        try:
            imgs = [lookup[s.image] for s in G.generators]
        except KeyError as exc:
            raise InconsistentHomomorphism(f"no image given for generator {exc.args[0]}") from None
    else:
        imgs = list(gen_images)
        if len(imgs) != len(G.generators):
            raise InconsistentHomomorphism(
                f"{len(G.generators)} generators but {len(imgs)} images"
            )
    img_idx = []
    for s, img in zip(G.generators, imgs):
        img = img if isinstance(img, Permutation) else Permutation(tuple(img))
        if img not in K:
            raise InconsistentHomomorphism(f"image {img.image} of generator {s.image} is not in K")
        img_idx.append(K.index(img))

    table = np.full(G.order, -1, dtype=np.int64)
    table[0] = K.identity_index
    for e in range(1, G.order):
        p, s = G._parents[e]
        table[e] = K.compose_indices(img_idx[s], table[p])

    # T(s * e) == T(s) * T(e) for every generator s and element e: this catches
    # words that reach the same element with different images.
    E, KE = G.elements, K.elements
    for s, gi in enumerate(G.generator_indices()):
        lhs = table[G.lookup(E[gi][E])]
        rhs = K.lookup(KE[img_idx[s]][KE[table]])
        if not np.array_equal(lhs, rhs):
            raise InconsistentHomomorphism(
                f"generator images do not extend to a homomorphism (generator {s})"
            )

    hom = Homomorphism(G, K, table)
    if G.order <= 1000:
        firsts = range(G.order)
        seconds = np.arange(G.order)
        checks = ((a, seconds) for a in firsts)
    else:
        rng = np.random.default_rng(seed)
        a_s, b_s = rng.integers(0, G.order, size=(2, n_random_pairs))
        checks = ((a, np.array([b])) for a, b in zip(a_s, b_s))
    for a, bs in checks:
        lhs = table[G.lookup(E[a][E[bs]])]
        rhs = K.lookup(KE[table[a]][KE[table[bs]]])
        if not np.array_equal(lhs, rhs):
            raise InconsistentHomomorphism(f"multiplicativity fails for element {a}")
    return hom


# -- named groups and homomorphisms -------------------------------------------------


def trivial_group(n: int) -> PermutationGroup:
    return group_closure(n, [])


def cyclic_group(n: int) -> PermutationGroup:
    """Rotations ``j -> j + 1 (mod n)``; this is also the translation group of Z_n."""
    if n == 1:
        return trivial_group(1)
    return group_closure(n, [Permutation(tuple((j + 1) % n for j in range(n)))])


def symmetric_group(n: int) -> PermutationGroup:
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles(n, (0, 1)))
    if n >= 3:
        gens.append(Permutation.from_cycles(n, tuple(range(n))))
    return group_closure(n, gens)


def identity_homomorphism(G: PermutationGroup) -> Homomorphism:
    return build_homomorphism(G, G, list(G.generators))


def trivial_homomorphism(G: PermutationGroup, K: PermutationGroup) -> Homomorphism:
    ident = Permutation.identity(K.degree)
    return build_homomorphism(G, K, [ident] * len(G.generators))


def grid_setting(rows: int, cols: int) -> Homomorphism:
    """Row-and-column permutations of a ``rows x cols`` grid, projected onto the rows.

    Cell ``(i, j)`` is the point ``i * cols + j``.  ``G`` is generated by the
    lifts of the generators of ``Sym(rows)`` and ``Sym(cols)``, so that
    ``g(i, j) = (k(i), k'(j))``; ``K = Sym(rows)`` and ``T(k, k') = k``.
    """
    Krow = symmetric_group(rows)
    Kcol = symmetric_group(cols)
    n = rows * cols

    def lift(row_perm, col_perm):
        return Permutation(
            tuple(row_perm(i) * cols + col_perm(j) for i in range(rows) for j in range(cols))
        )

    gens, imgs = [], []
    for k in Krow.generators:
        gens.append(lift(k, Permutation.identity(cols)))
        imgs.append(k)
    for k in Kcol.generators:
        gens.append(lift(Permutation.identity(rows), k))
        imgs.append(Permutation.identity(rows))
    G = group_closure(n, gens)
    return build_homomorphism(G, Krow, imgs)


# -- JSON ---------------------------------------------------------------------------
# Arrays on the wire are 0-based image arrays.


def group_from_json(data) -> PermutationGroup:
    if isinstance(data, str):
        data = json.loads(data)
    return group_closure(int(data["carrier_size"]), [tuple(g) for g in data["generators"]])


def homomorphism_from_json(data, G: PermutationGroup, K: PermutationGroup | None = None) -> Homomorphism:
    """Read ``{"gen_images": [...]}``; when ``K`` is omitted it is the group the images generate."""
    if isinstance(data, str):
        data = json.loads(data)
    imgs = [Permutation(tuple(v)) for v in data["gen_images"]]
    if K is None:
        if "target" in data:
            K = group_from_json(data["target"])
        elif imgs:
            K = group_closure(imgs[0].degree, imgs)
        else:
            raise InconsistentHomomorphism("cannot infer the target group from an empty image list")
    return build_homomorphism(G, K, imgs)
