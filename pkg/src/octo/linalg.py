"""Exact dense linear algebra over the prime field GF(p).

Vectors are rows and maps act on the right: ``v -> v @ M``.  Matrices are
immutable wrappers around numpy integer arrays holding canonical residues
in ``[0, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

MAX_PRIME = 2**31


class FieldError(ArithmeticError):
    """Raised on an undefined field operation (inverting zero)."""


class ShapeError(ValueError):
    """Raised when operands have incompatible shapes or fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate that ``p`` is an odd prime in the supported range and return it."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError(f"p must be an integer, got {type(p).__name__}")
    p = int(p)
    if p == 2:
        raise ValueError("characteristic 2 is not supported (p must be odd)")
    if not 3 <= p <= MAX_PRIME or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime in [3, 2^31]")
    return p


# -- scalar field operations -------------------------------------------------

def add(a: int, b: int, p: int) -> int:
    return (a + b) % p


def sub(a: int, b: int, p: int) -> int:
    return (a - b) % p


def mul(a: int, b: int, p: int) -> int:
    return (a * b) % p


def neg(a: int, p: int) -> int:
    return (-a) % p


def inv(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise FieldError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


# -- raw array kernels -------------------------------------------------------

def _dtype(p: int):
    # products of two residues below 2^31 fit in int64; long dot products
    # are handled separately in _dot
    return np.int64


def _as_array(entries, p: int) -> np.ndarray:
    arr = np.asarray(entries)
    if arr.dtype == object or arr.dtype.kind == "u":
        arr = np.asarray(arr, dtype=object) % p
    return (arr % p).astype(np.int64)


def _dot(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    k = a.shape[-1]
    if a.dtype != object and b.dtype != object and k * (p - 1) ** 2 < 2**62:
        return (a @ b) % p
    return ((a.astype(object) @ b.astype(object)) % p).astype(_dtype(p))


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``a`` over GF(p); returns (R, pivot_cols)."""
    a = np.array(a, dtype=_dtype(p)) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inv(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace_rows(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ a == 0}``."""
    r, _ = a.shape
    rt, pivots = rref_array(a.T, p)
    free = [j for j in range(r) if j not in set(pivots)]
    basis = np.zeros((len(free), r), dtype=_dtype(p))
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-rt[i, f]) % p
    return basis


def det_array(a: np.ndarray, p: int) -> int:
    a = np.array(a, dtype=_dtype(p)) % p
    n = a.shape[0]
    d = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            d = -d
        piv = int(a[c, c])
        d = (d * piv) % p
        below = a[c + 1:, c]
        rows = np.flatnonzero(below) + c + 1
        if rows.size:
            f = (a[rows, c] * inv(piv, p)) % p
            a[rows] = (a[rows] - np.outer(f, a[c])) % p
    return d % p


# -- value types -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FpMatrix:
    """A dense matrix over GF(p) with canonical residues."""

    p: int
    data: np.ndarray

    def __post_init__(self):
        p = check_prime(self.p)
        arr = _as_array(self.data, p)
        if arr.ndim != 2:
            raise ShapeError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, n: int, lam: int, p: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64) * (lam % p))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _same_field(self, other: "FpMatrix"):
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ShapeError(f"field mismatch: p={self.p} vs p={other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix(self.p, _dot(self.data, other.data, self.p))

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix(self.p, self.data + other.data)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return FpMatrix(self.p, self.data - other.data)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.data)

    def scale(self, k: int) -> "FpMatrix":
        return FpMatrix(self.p, self.data * (k % self.p))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.data.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(
            np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.p, self.shape, tuple(int(x) for x in self.data.flat)))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def row(self, i: int) -> "FpVector":
        return FpVector(self.p, self.data[i])

    def rref(self) -> tuple["FpMatrix", int, list[int]]:
        r, pivots = rref_array(self.data, self.p)
        return FpMatrix(self.p, r), len(pivots), pivots

    @cached_property
    def rank(self) -> int:
        return len(rref_array(self.data, self.p)[1])

    def det(self) -> int:
        if self.rows != self.cols:
            raise ShapeError(f"determinant of non-square {self.shape} matrix")
        return det_array(self.data, self.p)

    def inverse(self) -> "FpMatrix":
        n = self.rows
        if n != self.cols:
            raise ShapeError(f"inverse of non-square {self.shape} matrix")
        aug = np.concatenate([self.data, np.eye(n, dtype=self.data.dtype)], axis=1)
        r, pivots = rref_array(aug, self.p)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise FieldError("matrix is singular")
        return FpMatrix(self.p, r[:, n:])

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols,
                "entries": [int(x) for x in self.data.flat]}

    @classmethod
    def from_json(cls, obj: dict) -> "FpMatrix":
        p, rows, cols = int(obj["p"]), int(obj["rows"]), int(obj["cols"])
        entries = list(obj["entries"])
        if len(entries) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(entries)}")
        if any(not 0 <= int(e) < p for e in entries):
            raise ValueError(f"entries must be canonical residues in [0, {p})")
        return cls(p, np.array(entries, dtype=np.int64).reshape(rows, cols))


@dataclass(frozen=True, eq=False)
class FpVector:
    """A row vector over GF(p)."""

    p: int
    data: np.ndarray

    def __post_init__(self):
        p = check_prime(self.p)
        arr = _as_array(self.data, p)
        if arr.ndim != 1:
            raise ShapeError(f"vector data must be 1-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, n: int, p: int) -> "FpVector":
        return cls(p, np.zeros(n, dtype=np.int64))

    @classmethod
    def unit(cls, n: int, i: int, p: int) -> "FpVector":
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return cls(p, v)

    def __len__(self):
        return self.data.shape[0]

    def __getitem__(self, i) -> int:
        return int(self.data[i])

    def _same_field(self, other):
        if other.p != self.p:
            raise ShapeError(f"field mismatch: p={self.p} vs p={other.p}")

    def __add__(self, other: "FpVector") -> "FpVector":
        self._same_field(other)
        return FpVector(self.p, self.data + other.data)

    def __sub__(self, other: "FpVector") -> "FpVector":
        self._same_field(other)
        return FpVector(self.p, self.data - other.data)

    def __neg__(self) -> "FpVector":
        return FpVector(self.p, -self.data)

    def scale(self, k: int) -> "FpVector":
        return FpVector(self.p, self.data * (k % self.p))

    def __matmul__(self, m: FpMatrix) -> "FpVector":
        if not isinstance(m, FpMatrix):
            return NotImplemented
        self._same_field(m)
        if len(self) != m.rows:
            raise ShapeError(f"cannot apply {m.shape} matrix to length-{len(self)} vector")
        return FpVector(self.p, _dot(self.data[None, :], m.data, self.p)[0])

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpVector):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, tuple(self.tolist())))

    def __repr__(self):
        return f"FpVector(p={self.p}, {self.tolist()})"

    def tolist(self) -> list[int]:
        return [int(x) for x in self.data]


def matrix(rows: Sequence[Sequence[int]], p: int) -> FpMatrix:
    return FpMatrix(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1))


def vector(entries: Iterable[int], p: int) -> FpVector:
    return FpVector(p, np.array(list(entries), dtype=np.int64))


def rref(m: FpMatrix) -> tuple[FpMatrix, int, list[int]]:
    return m.rref()


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of GF(p)^n stored by its canonical RREF basis (one row per vector)."""

    p: int
    ambient_dim: int
    basis: FpMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ShapeError("basis width does not match ambient dimension")
        r, pivots = rref_array(self.basis.data, self.basis.p)
        if len(pivots) != self.basis.rows or not np.array_equal(r, self.basis.data):
            raise ValueError("basis must be in reduced row-echelon form with full row rank")

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int | None = None) -> "Subspace":
        """Subspace spanned by the rows of ``vectors`` (array, FpMatrix or list of FpVector)."""
        if isinstance(vectors, FpMatrix):
            arr = vectors.data
        elif len(vectors) and isinstance(vectors[0], FpVector):
            arr = np.stack([v.data for v in vectors])
        else:
            arr = np.asarray(vectors, dtype=np.int64)
        if ambient_dim is None:
            ambient_dim = arr.shape[1]
        arr = arr.reshape(-1, ambient_dim)
        r, pivots = rref_array(arr, p)
        return cls(p, ambient_dim, FpMatrix(p, r[: len(pivots)]))

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(p, n, FpMatrix.zeros(0, n, p))

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(p, n, FpMatrix.identity(n, p))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @cached_property
    def pivots(self) -> list[int]:
        return [int(np.flatnonzero(row)[0]) for row in self.basis.data]

    @cached_property
    def non_pivots(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def _check_vector(self, v: FpVector):
        if v.p != self.p or len(v) != self.ambient_dim:
            raise ShapeError(
                f"vector (p={v.p}, len={len(v)}) does not live in GF({self.p})^{self.ambient_dim}")

    def reduce_array(self, w: np.ndarray) -> np.ndarray:
        """Reduce rows of ``w`` against the basis: clears every pivot coordinate."""
        w = np.asarray(w) % self.p
        if self.dim == 0:
            return w
        coeffs = w[..., self.pivots]
        return (w - _dot(coeffs, self.basis.data, self.p)) % self.p

    def reduce(self, v: FpVector) -> FpVector:
        self._check_vector(v)
        return FpVector(self.p, self.reduce_array(v.data))

    def coset_coords(self, v: FpVector) -> FpVector:
        """Non-pivot coordinates of ``v`` after reduction: coordinates of ``v + U``."""
        return FpVector(self.p, self.reduce(v).data[self.non_pivots])

    def contains(self, v: FpVector) -> bool:
        return self.reduce(v).is_zero()

    def __contains__(self, v: FpVector) -> bool:
        return self.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        _check_compatible(self, other)
        return not np.any(self.reduce_array(other.basis.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.ambient_dim) == (other.p, other.ambient_dim) and \
            self.basis == other.basis

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}, ambient_dim={self.ambient_dim})"

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, **self.basis.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Subspace":
        basis = FpMatrix.from_json(obj)
        return cls(basis.p, int(obj["ambient_dim"]), basis)


def _check_compatible(u1: Subspace, u2: Subspace):
    if (u1.p, u1.ambient_dim) != (u2.p, u2.ambient_dim):
        raise ShapeError(
            f"subspaces live in different spaces: GF({u1.p})^{u1.ambient_dim} "
            f"vs GF({u2.p})^{u2.ambient_dim}")


def subspace_equal(u1: Subspace, u2: Subspace) -> bool:
    _check_compatible(u1, u2)
    return u1 == u2


def subspace_contains(u: Subspace, v: FpVector) -> bool:
    return u.contains(v)


def kernel(m: FpMatrix) -> Subspace:
    """Left kernel ``{x : x @ m == 0}`` (row convention)."""
    return Subspace.span(nullspace_rows(m.data, m.p), m.p, m.rows)


class LinearSolution(NamedTuple):
    solvable: bool
    particular: FpMatrix | None
    kernel: Subspace


def solve_linear_system(a: FpMatrix, b: FpMatrix | FpVector) -> LinearSolution:
    """Solve ``X @ a == b`` for X.

    ``b`` may be a vector (one right-hand side) or a matrix with one
    right-hand side per row.  The homogeneous solutions are the left kernel
    of ``a``; they are shared by every row of X.
    """
    if isinstance(b, FpVector):
        b = FpMatrix(b.p, b.data[None, :])
    if a.p != b.p:
        raise ShapeError(f"field mismatch: p={a.p} vs p={b.p}")
    if a.cols != b.cols:
        raise ShapeError(f"cannot solve X @ {a.shape} = {b.shape}")
    p, r = a.p, a.rows
    aug = np.concatenate([a.data.T, b.data.T], axis=1)
    red, pivots = rref_array(aug, p)
    ker = kernel(a)
    if pivots and pivots[-1] >= r:
        return LinearSolution(False, None, ker)
    x = np.zeros((b.rows, r), dtype=red.dtype)
    for i, pc in enumerate(pivots):
        x[:, pc] = red[i, r:]
    return LinearSolution(True, FpMatrix(p, x), ker)
