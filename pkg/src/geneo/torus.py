"""Translation-equivariant line averages on the discrete torus ``Z_p x Z_p``.

``X = Z_p x Z_p`` (point ``(r, c)`` has index ``r * p + c``, i.e. images
are ``p x p`` arrays indexed ``[row, col]``) and ``Y = Z_p``.  For a unit
vector ``w`` (``w . w == 1 mod p``) with perpendicular ``w_perp = (-w2, w1)``
the functions

    h_t(z) = z w + t w_perp,    t in Z_p,

form a family that is closed under the twisted action of the translations
of ``X`` for ``T(g_v) = k_{v . w}``.  The uniform measure ``1/p`` on the
family gives the operator

    F(phi)(z) = (1/p) sum_t phi(z w + t w_perp),

the average of ``phi`` along the line through ``z w`` in direction
``w_perp``.  It is a linear GENEO with ``F(phi o g_v) = F(phi) o k_{v . w}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .action import SignedMeasure
from .errors import InvarianceViolation, NotPrime, ShapeMismatch
from .groups import Homomorphism, Permutation, build_homomorphism, cyclic_group, group_closure
from .representation import GeoProblem, matrix_of_measure

MNIST_SIDE = 28
MNIST_PRIME = 29


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(int(p)):
        raise NotPrime(f"{p} is not prime")


@dataclass(frozen=True, order=True)
class UnitVector:
    w1: int
    w2: int
    p: int = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "w1", int(self.w1) % self.p)
        object.__setattr__(self, "w2", int(self.w2) % self.p)
        if (self.w1 * self.w1 + self.w2 * self.w2) % self.p != 1:
            raise ValueError(f"({self.w1}, {self.w2}) is not a unit vector mod {self.p}")

    @property
    def w(self) -> tuple[int, int]:
        return (self.w1, self.w2)

    @property
    def perp(self) -> tuple[int, int]:
        return ((-self.w2) % self.p, self.w1)

    def dot(self, v) -> int:
        return (int(v[0]) * self.w1 + int(v[1]) * self.w2) % self.p


def unit_vectors(p: int) -> list[UnitVector]:
    """All ``w`` in ``Z_p^2`` with ``w . w == 1``, in lexicographic order."""
    _require_prime(p)
    a = np.arange(p)
    sq = (a[:, None] ** 2 + a[None, :] ** 2) % p
    return [UnitVector(int(i), int(j), p) for i, j in zip(*np.nonzero(sq == 1))]


@lru_cache(maxsize=None)
def _family(p: int, w1: int, w2: int) -> np.ndarray:
    """``fam[t, z]`` is the flat index of ``z w + t w_perp``."""
    t = np.arange(p)[:, None]
    z = np.arange(p)[None, :]
    r = (z * w1 - t * w2) % p
    c = (z * w2 + t * w1) % p
    fam = r * p + c
    fam.setflags(write=False)
    return fam


@dataclass(frozen=True)
class TorusGeneo:
    p: int
    w: UnitVector

    @property
    def family(self) -> np.ndarray:
        """``(p, p)`` array; row ``t`` is the function ``h_t`` as flat indices of ``X``."""
        return _family(self.p, self.w.w1, self.w.w2)

    def functions(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.family]

    def translate_function(self, t: int, v) -> np.ndarray:
        """``g_v o h_t o T(g_v)^-1`` evaluated on all of ``Y``."""
        p = self.p
        z = (np.arange(p) - self.w.dot(v)) % p
        flat = self.family[t, z]
        r, c = divmod(flat, p)
        return ((r + int(v[0])) % p) * p + (c + int(v[1])) % p

    def check_invariance(self, translations=None) -> bool:
        """Is the family closed under the action of the given translations (default: generators)?"""
        if translations is None:
            translations = [(1, 0), (0, 1)]
        members = {row.tobytes() for row in self.family}
        return all(
            self.translate_function(t, v).tobytes() in members
            for v in translations
            for t in range(self.p)
        )

    def total_variation(self) -> float:
        return self.p * (1.0 / self.p)


def build_geneo(p: int, w) -> TorusGeneo:
    _require_prime(p)
    if not isinstance(w, UnitVector):
        w = UnitVector(w[0], w[1], p)
    g = TorusGeneo(p, w)
    if not g.check_invariance():
        raise InvarianceViolation(f"family for w = {w.w} is not invariant")
    return g


def _check_image(phi, p: int) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (p, p):
        raise ShapeMismatch(f"image has shape {phi.shape}, expected ({p}, {p})")
    return phi


def apply(g: TorusGeneo, phi) -> np.ndarray:
    phi = _check_image(phi, g.p)
    return phi.ravel()[g.family].mean(axis=0)


@lru_cache(maxsize=None)
def _stack_families(p: int) -> np.ndarray:
    fams = np.stack([_family(p, u.w1, u.w2) for u in unit_vectors(p)])
    fams.setflags(write=False)
    return fams


def stack_features(p: int, phi) -> np.ndarray:
    """Outputs of every unit-vector operator, one row per unit vector (lexicographic order)."""
    _require_prime(p)
    phi = _check_image(phi, p)
    return phi.ravel()[_stack_families(p)].mean(axis=1)


def cyclic_shift(x, c: int) -> np.ndarray:
    """``x o k_c``, i.e. ``out[z] = x[z + c]``."""
    x = np.asarray(x)
    return np.roll(x, -int(c), axis=-1)


def toroidal_translate(phi, v) -> np.ndarray:
    """``phi o g_v``, i.e. ``out[q] = phi[q + v]`` with indices mod ``p``."""
    phi = np.asarray(phi)
    return np.roll(phi, (-int(v[0]), -int(v[1])), axis=(0, 1))


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def salt_pepper(phi, level: float, seed, low: float = 0.0, high: float = 1.0, return_mask: bool = False):
    """Replace each pixel, with probability ``level``, by ``low`` or ``high``.

    Randomness comes from numpy's PCG64 seeded with ``seed`` (or from a
    ``Generator`` passed in directly).  Draw order: one uniform per pixel
    in row-major order (pixel is corrupted iff the draw is below
    ``level``), then one uniform per corrupted pixel in row-major order
    (``high`` iff below 0.5).
    """
    if not 0.0 <= level <= 1.0:
        raise ValueError(f"noise level {level} outside [0, 1]")
    phi = np.asarray(phi, dtype=float)
    rng = _generator(seed)
    mask = rng.random(phi.size) < level
    salt = rng.random(int(mask.sum())) < 0.5
    out = phi.ravel().copy()
    out[np.flatnonzero(mask)] = np.where(salt, high, low)
    out = out.reshape(phi.shape)
    if return_mask:
        return out, mask.reshape(phi.shape)
    return out


def pad_mnist(raw) -> np.ndarray:
    """Scale a 28x28 byte image to [0, 1] and pad it to 29x29 (zero row at the bottom, zero column at the right)."""
    raw = np.asarray(raw)
    if raw.shape != (MNIST_SIDE, MNIST_SIDE):
        raise ShapeMismatch(f"expected a {MNIST_SIDE}x{MNIST_SIDE} image, got {raw.shape}")
    out = np.zeros((MNIST_PRIME, MNIST_PRIME))
    out[:MNIST_SIDE, :MNIST_SIDE] = raw.astype(float) / 255.0
    return out


# -- bridge to the general machinery (small p only) ---------------------------------


def translation_group(p: int):
    """Translations of ``Z_p x Z_p`` acting on flat indices ``r * p + c``."""
    idx = np.arange(p * p)
    r, c = divmod(idx, p)
    down = Permutation(tuple(((r + 1) % p) * p + c))
    right = Permutation(tuple(r * p + (c + 1) % p))
    return group_closure(p * p, [down, right])


def torus_homomorphism(p: int, w) -> Homomorphism:
    """``T_w(g_v) = k_{v . w}`` from the translations of ``X`` to those of ``Y``."""
    _require_prime(p)
    if not isinstance(w, UnitVector):
        w = UnitVector(w[0], w[1], p)
    G = translation_group(p)
    K = cyclic_group(p)

    def k(c):
        return Permutation(tuple((z + c) % p for z in range(p)))

    return build_homomorphism(G, K, [k(w.w1), k(w.w2)])


def torus_measure(g: TorusGeneo, hom: Homomorphism | None = None) -> SignedMeasure:
    hom = hom or torus_homomorphism(g.p, g.w)
    return SignedMeasure(hom, {h: 1.0 / g.p for h in g.functions()}, permutant=True)


def torus_problem(g: TorusGeneo) -> GeoProblem:
    """The ``p x p^2`` operator matrix of ``g`` as a :class:`GeoProblem`."""
    hom = torus_homomorphism(g.p, g.w)
    return GeoProblem(hom, matrix_of_measure(torus_measure(g, hom)))
