"""Row-stochastic matrices as convex combinations of rectangular permutation matrices.

A rectangular permutation matrix of shape ``(m, n)`` has exactly one 1 in
each row.  It is stored as its *row choice*: ``rows[i]`` is the column of
the 1 in row ``i``.  Read as a function from the ``m`` rows to the ``n``
columns this is the same tuple used for functions ``Y -> X`` in
:mod:`geneo.action`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotStochastic, ShapeMismatch

DEFAULT_TOL = 1e-9


def rect_perm_matrix(rows, n: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    R = np.zeros((len(rows), n))
    R[np.arange(len(rows)), rows] = 1.0
    return R


@dataclass
class ConvexCombo:
    """Weighted rectangular permutation matrices, ``terms = [(weight, rows), ...]``."""

    terms: list[tuple[float, tuple[int, ...]]] = field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms], dtype=float)

    def to_json_lines(self) -> list[dict]:
        return [{"weight": w, "rows": list(r)} for w, r in self.terms]


def is_row_stochastic(A, tol: float = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.size == 0 or not np.all(np.isfinite(A)):
        return False
    return bool(np.all(A >= -tol) and np.all(np.abs(A.sum(axis=1) - 1.0) <= tol))


def decompose_stochastic(A, tol: float = DEFAULT_TOL) -> ConvexCombo:
    """Greedy decomposition of a row-stochastic matrix.

    Each step takes, in every row, the column holding the largest remaining
    entry (ties go to the smallest column), peels off the smallest of those
    entries as the weight, and subtracts it.  At least one entry drops to
    zero per step, so there are at most ``m * n`` terms.  Remaining row sums
    stay equal across rows, which keeps every row selectable until the end.

    >>> c = decompose_stochastic(np.eye(2))
    >>> c.terms
    [(1.0, (0, 1))]
    """
    A = np.asarray(A, dtype=float)
    if not is_row_stochastic(A, tol):
        raise NotStochastic("matrix is not row-stochastic within tolerance")
    m, n = A.shape
    R = np.where(A < 0.0, 0.0, A)
    # ``tol`` only decides stochasticity; residues are dropped at round-off
    # level so the weights keep summing to 1 to working precision
    floor = min(tol, 64 * np.finfo(float).eps)
    rows = np.arange(m)
    terms = []
    for _ in range(m * n):
        cols = np.argmax(R, axis=1)
        picked = R[rows, cols]
        lam = float(picked.min())
        if lam <= floor:
            break
        terms.append((lam, tuple(int(c) for c in cols)))
        R[rows, cols] -= lam
        R[rows[picked == lam], cols[picked == lam]] = 0.0
        R[R <= floor] = 0.0
    return ConvexCombo(terms)


def reconstruct(combo: ConvexCombo, m: int, n: int) -> np.ndarray:
    out = np.zeros((m, n))
    for w, rows in combo.terms:
        if len(rows) != m or (rows and (min(rows) < 0 or max(rows) >= n)):
            raise ShapeMismatch(f"term {rows} is not an {m}x{n} rectangular permutation")
        out[np.arange(m), list(rows)] += w
    return out
