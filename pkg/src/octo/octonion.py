"""The octonion algebra over GF(p).

Coordinates are taken with respect to the basis ``1, i_0, ..., i_6``; basis
index 0 is the identity and index ``t + 1`` is ``i_t``.  Products of basis
elements are generated from the three cyclic rules

    i_t i_{t+1} = i_{t+3},   i_{t+1} i_{t+3} = i_t,   i_{t+3} i_t = i_{t+1}

(subscripts mod 7), together with ``i_t^2 = -1`` and anticommutativity of
distinct imaginary units.  The resulting 8x8 table is built once and frozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import ShapeError, check_prime

DIM = 8
IMAG_DIM = 7


def _build_table() -> tuple[np.ndarray, np.ndarray]:
    sign = np.zeros((DIM, DIM), dtype=np.int64)
    index = np.full((DIM, DIM), -1, dtype=np.int64)

    def put(s, t, sg, k):
        if index[s, t] != -1 and (index[s, t], sign[s, t]) != (k, sg):
            raise AssertionError(f"inconsistent rule for e{s} e{t}")
        sign[s, t], index[s, t] = sg, k

    for e in range(DIM):
        put(0, e, 1, e)
        put(e, 0, 1, e)
    for t in range(IMAG_DIM):
        put(t + 1, t + 1, -1, 0)
    for t in range(IMAG_DIM):
        a, b, c = t, (t + 1) % 7, (t + 3) % 7
        # cyclic rules, then their reversals by anticommutation
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            put(x + 1, y + 1, 1, z + 1)
            put(y + 1, x + 1, -1, z + 1)
    if (index < 0).any():
        missing = np.argwhere(index < 0).tolist()
        raise AssertionError(f"basis products left undefined: {missing}")
    sign.setflags(write=False)
    index.setflags(write=False)
    return sign, index


TABLE_SIGN, TABLE_INDEX = _build_table()

# STRUCTURE[s, t, k]: coefficient of e_k in e_s e_t
STRUCTURE = np.zeros((DIM, DIM, DIM), dtype=np.int64)
for _s in range(DIM):
    for _t in range(DIM):
        STRUCTURE[_s, _t, TABLE_INDEX[_s, _t]] = TABLE_SIGN[_s, _t]
STRUCTURE.setflags(write=False)
_STRUCTURE_FLAT = STRUCTURE.reshape(DIM * DIM, DIM)
_STRUCTURE_FLOAT = _STRUCTURE_FLAT.astype(np.float64)
_FLOAT_EXACT_PRIME = 2**20
del _s, _t

# conjugation as a coordinate sign pattern
CONJ = np.array([1] + [-1] * IMAG_DIM, dtype=np.int64)


def basis_symbol(k: int) -> str:
    return "1" if k == 0 else f"i{k - 1}"


def table_symbols() -> list[list[str]]:
    """The basis multiplication table as signed symbols, row = left factor."""
    out = []
    for s in range(DIM):
        row = []
        for t in range(DIM):
            sym = basis_symbol(int(TABLE_INDEX[s, t]))
            row.append(sym if TABLE_SIGN[s, t] > 0 else "-" + sym)
        out.append(row)
    return out


def format_table() -> str:
    header = [""] + [basis_symbol(k) for k in range(DIM)]
    rows = [header] + [[basis_symbol(s)] + r for s, r in enumerate(table_symbols())]
    return "\n".join("".join(f"{c:>5}" for c in r) for r in rows)


def mul_coords(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Multiply octonions given as coordinate arrays of shape (..., 8)."""
    x = np.asarray(x, dtype=np.int64) % p
    y = np.asarray(y, dtype=np.int64) % p
    x, y = np.broadcast_arrays(x, y)
    outer = (x[..., :, None] * y[..., None, :]).reshape(x.shape[:-1] + (DIM * DIM,))
    if p < _FLOAT_EXACT_PRIME:
        # |sum| <= 64 p^2 < 2^53: float64 BLAS is exact here and much faster
        prod = outer.astype(np.float64) @ _STRUCTURE_FLOAT
        return prod.astype(np.int64) % p
    return (outer % p) @ _STRUCTURE_FLAT % p


@dataclass(frozen=True)
class Octonion:
    """An element ``b 1 + sum a_t i_t`` stored as (b, a_0, ..., a_6)."""

    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        p = check_prime(self.p)
        coords = tuple(int(c) % p for c in self.coords)
        if len(coords) != DIM:
            raise ShapeError(f"an octonion has {DIM} coordinates, got {len(coords)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, p: int) -> "Octonion":
        return cls(p, (0,) * DIM)

    @classmethod
    def one(cls, p: int) -> "Octonion":
        return cls.basis(0, p)

    @classmethod
    def basis(cls, k: int, p: int) -> "Octonion":
        c = [0] * DIM
        c[k] = 1
        return cls(p, tuple(c))

    @classmethod
    def unit(cls, t: int, p: int) -> "Octonion":
        """The imaginary unit ``i_t``."""
        return cls.basis(t + 1, p)

    @classmethod
    def imaginary(cls, a: Sequence[int], p: int) -> "Octonion":
        return cls(p, (0, *a))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    @property
    def real(self) -> int:
        return self.coords[0]

    @property
    def imag_coords(self) -> tuple[int, ...]:
        return self.coords[1:]

    def is_imaginary(self) -> bool:
        return self.coords[0] == 0

    def _check(self, other: "Octonion"):
        if not isinstance(other, Octonion):
            raise TypeError(f"expected Octonion, got {type(other).__name__}")
        if other.p != self.p:
            raise ShapeError(f"field mismatch: p={self.p} vs p={other.p}")

    def __add__(self, other: "Octonion") -> "Octonion":
        self._check(other)
        return Octonion(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Octonion") -> "Octonion":
        self._check(other)
        return Octonion(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Octonion":
        return Octonion(self.p, tuple(-a for a in self.coords))

    def scale(self, k: int) -> "Octonion":
        return Octonion(self.p, tuple(k * a for a in self.coords))

    def __mul__(self, other: "Octonion") -> "Octonion":
        return multiply(self, other)

    def __repr__(self):
        terms = [f"{c}*{basis_symbol(k)}" for k, c in enumerate(self.coords) if c]
        return f"Octonion(p={self.p}, {' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"p": self.p, "coords": list(self.coords)}

    @classmethod
    def from_json(cls, obj: dict) -> "Octonion":
        return cls(int(obj["p"]), tuple(obj["coords"]))


def multiply(x: Octonion, y: Octonion) -> Octonion:
    x._check(y)
    return Octonion(x.p, tuple(mul_coords(x.array, y.array, x.p).tolist()))


def conjugate(x: Octonion) -> Octonion:
    return Octonion(x.p, tuple((x.array * CONJ).tolist()))


def re(x: Octonion) -> Octonion:
    return Octonion(x.p, (x.coords[0],) + (0,) * IMAG_DIM)


def im(x: Octonion) -> Octonion:
    return Octonion(x.p, (0,) + x.coords[1:])


def norm(x: Octonion) -> int:
    """The scalar ``n`` with ``x * conjugate(x) == n * 1``."""
    prod = multiply(x, conjugate(x))
    if any(prod.coords[1:]):
        raise AssertionError(f"x * conj(x) is not real for {x}")
    return prod.coords[0]


def beta(x: Octonion, y: Octonion) -> int:
    """The symmetric bilinear form ``Re(x * conj(y))``."""
    return multiply(x, conjugate(y)).coords[0]


def f_map(x: Octonion, y: Octonion) -> Octonion:
    """``Im(x y)`` for imaginary ``x``, ``y``."""
    if not (x.is_imaginary() and y.is_imaginary()):
        raise ValueError("f_map is only defined on imaginary octonions")
    return im(multiply(x, y))


def imag_mul(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Product of imaginary octonions given by 7 coordinates; returns 8 coordinates."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
    pad = np.zeros(x.shape[:-1] + (1,), dtype=np.int64)
    return mul_coords(np.concatenate([pad, x], -1), np.concatenate([pad, y], -1), p)
