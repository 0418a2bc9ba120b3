"""The exterior square of the imaginary octonions and its 14-dimensional submodule.

Wedge coordinates are indexed by the 21 pairs ``(s, t)``, ``0 <= s < t <= 6``,
in lexicographic order.  Coset coordinates on a quotient ``A/U`` are the
non-pivot coordinates of a vector after reduction against the RREF basis of
``U``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import (FpMatrix, FpVector, ShapeError, Subspace, check_prime, kernel,
                     nullspace_rows, rref_array)
from .octonion import IMAG_DIM, Octonion, f_map

WEDGE_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(IMAG_DIM), 2))
WEDGE_INDEX = {pair: k for k, pair in enumerate(WEDGE_PAIRS)}
WEDGE_DIM = len(WEDGE_PAIRS)
U_DIM = 14

_S = np.array([s for s, _ in WEDGE_PAIRS])
_T = np.array([t for _, t in WEDGE_PAIRS])


class NotInvariantError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def wedge_array(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Batched wedge of 7-vectors: coordinate (s,t) is u_s v_t - u_t v_s."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return (u[..., _S] * v[..., _T] - u[..., _T] * v[..., _S]) % p


def wedge(u: FpVector, v: FpVector) -> FpVector:
    if u.p != v.p:
        raise ShapeError(f"field mismatch: p={u.p} vs p={v.p}")
    if len(u) != IMAG_DIM or len(v) != IMAG_DIM:
        raise ShapeError("wedge is defined on 7-dimensional vectors")
    return FpVector(u.p, wedge_array(u.data, v.data, u.p))


def wedge_unit(s: int, t: int, p: int) -> FpVector:
    """The basis vector i_s ^ i_t (sign-adjusted when s > t)."""
    if s == t:
        return FpVector.zeros(WEDGE_DIM, p)
    v = FpVector.unit(WEDGE_DIM, WEDGE_INDEX[(min(s, t), max(s, t))], p)
    return v if s < t else -v


def lambda2_array(g: np.ndarray, p: int) -> np.ndarray:
    g = np.asarray(g, dtype=np.int64)
    return wedge_array(g[_S], g[_T], p)


def lambda2(g: FpMatrix) -> FpMatrix:
    """Matrix of the induced action on the exterior square: row (s,t) is g_s ^ g_t."""
    if g.shape != (IMAG_DIM, IMAG_DIM):
        raise ShapeError(f"lambda2 expects a 7x7 matrix, got {g.shape}")
    return FpMatrix(g.p, lambda2_array(g.data, g.p))


@lru_cache(maxsize=None)
def ftilde_matrix(p: int) -> FpMatrix:
    """21x7 matrix whose row (s,t) is the coordinate vector of Im(i_s i_t)."""
    p = check_prime(p)
    rows = [f_map(Octonion.unit(s, p), Octonion.unit(t, p)).imag_coords for s, t in WEDGE_PAIRS]
    return FpMatrix(p, np.array(rows, dtype=np.int64))


@lru_cache(maxsize=None)
def kernel_u(p: int) -> Subspace:
    """The kernel U of f-tilde, a 14-dimensional subspace of the exterior square."""
    return kernel(ftilde_matrix(p))


def invariance_witness(u: Subspace, m: FpMatrix) -> int | None:
    """Index of the first RREF basis row b of ``u`` with ``b @ m`` outside ``u``."""
    if m.shape != (u.ambient_dim, u.ambient_dim) or m.p != u.p:
        raise ShapeError(f"{m.shape} matrix over GF({m.p}) does not act on {u}")
    if u.dim == 0:
        return None
    images = (u.basis @ m).data
    bad = np.flatnonzero(np.any(u.reduce_array(images), axis=1))
    return int(bad[0]) if bad.size else None


def is_invariant(u: Subspace, m: FpMatrix) -> bool:
    return invariance_witness(u, m) is None


def equivariance_check(g) -> bool:
    """Whether lambda2(g) @ F == F @ g for the f-tilde matrix F."""
    m = getattr(g, "mat7", g)
    f = ftilde_matrix(m.p)
    return lambda2(m) @ f == f @ m


class _Echelon:
    """Incrementally maintained RREF basis."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.pivots:
            v = (v - v[..., self.pivots] @ self.rows) % self.p
        return v

    def add(self, v: np.ndarray) -> bool:
        """Insert ``v``; returns False if it was already in the span."""
        p = self.p
        r = self.reduce(v)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        c = int(nz[0])
        r = r * pow(int(r[c]), p - 2, p) % p
        if self.pivots:
            self.rows = (self.rows - np.outer(self.rows[:, c], r)) % p
        order = np.searchsorted(self.pivots, c)
        self.rows = np.insert(self.rows, order, r, axis=0)
        self.pivots.insert(int(order), c)
        return True

    def subspace(self) -> Subspace:
        return Subspace.span(self.rows, self.p, self.n)


def spin(v: FpVector, gens: Sequence[FpMatrix]) -> Subspace:
    """Smallest subspace containing ``v`` and closed under right action by ``gens``."""
    if v.is_zero():
        raise ValueError("cannot spin the zero vector")
    n, p = len(v), v.p
    stack = np.stack([g.data for g in gens]) if gens else np.zeros((0, n, n), dtype=np.int64)
    ech = _Echelon(n, p)
    ech.add(v.data)
    queue = [v.data]
    while queue and ech.dim < n:
        w = queue.pop(0)
        for img in (w @ stack) % p:
            if ech.add(img):
                queue.append(img)
                if ech.dim == n:
                    break
    return ech.subspace()


def quotient_action(g, u: Subspace) -> FpMatrix:
    """Matrix of lambda2(g) on the coset coordinates of A/U."""
    m = getattr(g, "mat7", g)
    l2 = m if m.shape == (u.ambient_dim, u.ambient_dim) else lambda2(m)
    bad = invariance_witness(u, l2)
    if bad is not None:
        raise NotInvariantError("the action does not stabilize the subspace",
                                u.basis.row(bad).tolist())
    reps = np.eye(u.ambient_dim, dtype=np.int64)[u.non_pivots]
    images = (reps @ l2.data) % u.p
    return FpMatrix(u.p, u.reduce_array(images)[:, u.non_pivots])


class HomSpace(NamedTuple):
    dim: int
    basis: list[FpMatrix]


def hom_space(gens_a: Sequence[FpMatrix], gens_b: Sequence[FpMatrix], chunk: int = 4) -> HomSpace:
    """Intertwiners X (n x m) with A_i @ X == X @ B_i for all i.

    A_i and B_i must be the images of the same group element in the two
    representations (row convention, so X maps the A-module to the B-module).
    """
    if len(gens_a) != len(gens_b):
        raise ShapeError("generator lists must have the same length")
    if not gens_a:
        raise ValueError("at least one generator pair is required")
    p = gens_a[0].p
    n, m = gens_a[0].rows, gens_b[0].rows
    eye_n = np.eye(n, dtype=np.int64)
    eye_m = np.eye(m, dtype=np.int64)
    # row-major vec: vec(A X) = (A kron I) vec X, vec(X B) = (I kron B^T) vec X
    constraints = np.zeros((0, n * m), dtype=np.int64)
    for k in range(0, len(gens_a), chunk):
        block = [np.kron(a.data, eye_m) - np.kron(eye_n, b.data.T)
                 for a, b in zip(gens_a[k:k + chunk], gens_b[k:k + chunk])]
        stacked = np.concatenate([constraints] + block, axis=0) % p
        red, pivots = rref_array(stacked, p)
        constraints = red[: len(pivots)]
    sols = nullspace_rows(constraints.T, p)
    basis = [FpMatrix(p, x.reshape(n, m)) for x in Subspace.span(sols, p, n * m).basis.data]
    return HomSpace(len(basis), basis)
