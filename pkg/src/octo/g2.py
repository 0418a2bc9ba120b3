"""Elements of G2(p) = Aut(O) as 7x7 matrices acting on the imaginary octonions.

Automorphisms are built from basic triples ``(x, y, z)``: imaginary units
with ``x, y`` orthogonal and ``z`` orthogonal to ``1, x, y, xy``.  Such a
triple determines the automorphism sending ``i_0, i_1, i_2`` to ``x, y, z``;
the images of ``i_3 .. i_6`` are forced by

    i_3 = i_0 i_1,  i_4 = i_1 i_2,  i_5 = i_2 i_3,  i_6 = i_3 i_4.

Sampling draws uniform coordinate vectors and rejects until the triple
constraints hold.  This spreads samples well over G2(p) but is not exactly
uniform on the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .linalg import FpMatrix, check_prime
from .octonion import (DIM, IMAG_DIM, STRUCTURE, Octonion, basis_symbol, beta, imag_mul,
                       mul_coords)

DEFAULT_MAX_ATTEMPTS = 10**6
_BATCH = 4096


class ConstructionError(RuntimeError):
    """A triple that satisfies the constraints failed to extend to an automorphism."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SamplingExhausted(RuntimeError):
    pass


@lru_cache(maxsize=None)
def beta_gram(p: int) -> np.ndarray:
    """Gram matrix of beta restricted to the imaginary units, computed from the algebra."""
    g = np.array([[beta(Octonion.unit(s, p), Octonion.unit(t, p)) for t in range(IMAG_DIM)]
                  for s in range(IMAG_DIM)], dtype=np.int64)
    g.setflags(write=False)
    return g


def _bform(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    return np.einsum("...i,ij,...j->...", x, beta_gram(p), y) % p


def _square_is(x: np.ndarray, value: int, p: int) -> np.ndarray:
    """Mask of imaginary vectors whose octonion square equals ``value * 1``."""
    sq = imag_mul(x, x, p)
    target = np.zeros(DIM, dtype=np.int64)
    target[0] = value % p
    return np.all(sq == target, axis=-1)


@dataclass(frozen=True)
class BasicTriple:
    x: Octonion
    y: Octonion
    z: Octonion

    @property
    def p(self) -> int:
        return self.x.p

    def violations(self) -> list[str]:
        p = self.p
        x, y, z = self.x, self.y, self.z
        one = Octonion.one(p)
        bad = []
        for name, v in (("x", x), ("y", y), ("z", z)):
            if not v.is_imaginary():
                bad.append(f"{name} is not imaginary")
            elif v * v != one.scale(-1):
                bad.append(f"{name}^2 != -1")
        checks = [("beta(x,y)", beta(x, y)), ("beta(z,1)", beta(z, one)),
                  ("beta(z,x)", beta(z, x)), ("beta(z,y)", beta(z, y)),
                  ("beta(z,xy)", beta(z, x * y))]
        bad.extend(f"{name} != 0" for name, val in checks if val)
        return bad

    def is_valid(self) -> bool:
        return not self.violations()


@dataclass(frozen=True)
class G2Element:
    mat7: FpMatrix
    provenance: Union[BasicTriple, str] = "composed"

    @property
    def p(self) -> int:
        return self.mat7.p

    def __matmul__(self, other: "G2Element") -> "G2Element":
        return compose(self, other)

    def to_json(self) -> dict:
        return self.mat7.to_json()


def extension8(m: FpMatrix) -> np.ndarray:
    """The 8x8 matrix fixing 1 and acting as ``m`` on the imaginary part."""
    e = np.zeros((DIM, DIM), dtype=np.int64)
    e[0, 0] = 1
    e[1:, 1:] = m.data
    return e


def automorphism_witness(m: FpMatrix) -> tuple[str, str] | None:
    """First basis pair ``(e_s, e_t)`` with ``phi(e_s e_t) != phi(e_s) phi(e_t)``, or None."""
    if m.shape != (IMAG_DIM, IMAG_DIM):
        return ("shape", f"{m.shape}")
    p = m.p
    e = extension8(m)
    lhs = np.einsum("stk,kj->stj", STRUCTURE, e) % p
    rhs = mul_coords(e[:, None, :], e[None, :, :], p)
    bad = np.argwhere(np.any(lhs != rhs, axis=-1))
    if bad.size == 0:
        return None
    s, t = bad[0]
    return basis_symbol(int(s)), basis_symbol(int(t))


def is_automorphism(m: FpMatrix) -> bool:
    return automorphism_witness(m) is None


def extend_triple(t: BasicTriple) -> G2Element:
    bad = t.violations()
    if bad:
        raise ValueError(f"not a basic triple: {', '.join(bad)}")
    x, y, z = t.x, t.y, t.z
    xy = x * y
    yz = y * z
    images = [x, y, z, xy, yz, z * xy, xy * yz]
    m = FpMatrix(t.p, np.array([v.imag_coords for v in images], dtype=np.int64))
    witness = automorphism_witness(m)
    if witness is not None:
        raise ConstructionError(f"triple extension is not multiplicative at {witness}", witness)
    return G2Element(m, t)


def identity(p: int) -> G2Element:
    return G2Element(FpMatrix.identity(IMAG_DIM, p), "identity")


def shift(p: int) -> G2Element:
    """The automorphism ``i_t -> i_{t+1}``."""
    u = [Octonion.unit(k, p) for k in (1, 2, 3)]
    return extend_triple(BasicTriple(*u))


def compose(g: G2Element, h: G2Element) -> G2Element:
    """Apply ``g`` then ``h`` (row convention: matrix product g @ h)."""
    return G2Element(g.mat7 @ h.mat7, "composed")


def inverse(g: G2Element) -> G2Element:
    return G2Element(g.mat7.inverse(), "composed")


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def _draw(rng, p, constraints, max_attempts: int, stage: str) -> np.ndarray:
    """First candidate (in draw order) satisfying every constraint predicate."""
    tried = 0
    batch = 16
    while tried < max_attempts:
        n = min(batch, max_attempts - tried)
        batch = min(2 * batch, _BATCH)
        cand = rng.integers(0, p, size=(n, IMAG_DIM), dtype=np.int64)
        idx = np.arange(n)
        # cheap linear constraints go first and shrink the batch
        for pred in constraints:
            idx = idx[pred(cand[idx])]
            if idx.size == 0:
                break
        if idx.size:
            return cand[idx[0]]
        tried += n
    raise SamplingExhausted(f"no {stage} found in {max_attempts} attempts (p={p})")


def random_triple(seed: int, p: int, index: int = 0,
                  max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> BasicTriple:
    p = check_prime(p)
    rng = _rng(seed, index)

    def unit(c):
        return _square_is(c, -1, p)

    def orth(v):
        return lambda c: _bform(c, v, p) == 0

    x = _draw(rng, p, [unit], max_attempts, "x")
    y = _draw(rng, p, [orth(x), unit], max_attempts, "y")
    xy = imag_mul(x, y, p)[1:]
    z = _draw(rng, p, [orth(x), orth(y), orth(xy), unit], max_attempts, "z")
    return BasicTriple(*(Octonion.imaginary(v.tolist(), p) for v in (x, y, z)))


def random_g2(seed: int, p: int, index: int = 0,
              max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> G2Element:
    """Sample ``index`` of the stream for ``seed``; independent of other indices."""
    return extend_triple(random_triple(seed, p, index, max_attempts))


def sample_g2(seed: int, p: int, count: int, start: int = 0) -> list[G2Element]:
    return [random_g2(seed, p, k) for k in range(start, start + count)]


def classical_g2_order(q: int) -> int:
    """q^6 (q^6 - 1)(q^2 - 1), the order of G2(q)."""
    return q**6 * (q**6 - 1) * (q**2 - 1)


class TripleCount(NamedTuple):
    p: int
    n_x: int
    n_y_given_x: int
    n_z_given_xy: int
    product: int
    stage_independent: bool


MAX_COUNT_PRIME = 7


def all_vectors(p: int) -> np.ndarray:
    grids = np.indices((p,) * IMAG_DIM, dtype=np.int64)
    return grids.reshape(IMAG_DIM, -1).T


def count_triples(p: int, square: int = -1, seed: int = 0, alternatives: int = 5) -> TripleCount:
    """Staged exhaustive count of basic triples.

    Each stage scans all p^7 vectors.  Later stages are counted for the
    fixed choice x = i_0, y = i_1 and recounted for ``alternatives`` random
    earlier-stage choices; ``stage_independent`` records whether they agree.
    ``square`` replaces the condition ``v^2 = -1`` (used for negative controls).
    """
    p = check_prime(p)
    if p > MAX_COUNT_PRIME:
        raise ValueError(f"count_triples enumerates p^7 vectors; p <= {MAX_COUNT_PRIME} required")
    vs = all_vectors(p)
    units = vs[_square_is(vs, square, p)]
    n_x = len(units)

    def ys_for(x):
        return units[_bform(units, x, p) == 0]

    def zs_for(x, y):
        xy = imag_mul(x, y, p)[1:]
        mask = (_bform(units, x, p) == 0) & (_bform(units, y, p) == 0) & (_bform(units, xy, p) == 0)
        return units[mask]

    e = np.eye(IMAG_DIM, dtype=np.int64)
    x0, y0 = e[0], e[1]
    n_y = len(ys_for(x0))
    n_z = len(zs_for(x0, y0))

    consistent = True
    rng = np.random.default_rng([seed, p])
    if n_x:
        for _ in range(alternatives):
            x = units[rng.integers(len(units))]
            ys = ys_for(x)
            if len(ys) != n_y:
                consistent = False
                continue
            if len(ys):
                y = ys[rng.integers(len(ys))]
                if len(zs_for(x, y)) != n_z:
                    consistent = False
    return TripleCount(p, n_x, n_y, n_z, n_x * n_y * n_z, consistent)
