"""The class-two p-group P_U = V x (A/U) built from the 14-dimensional subspace U.

Elements are pairs ``(v, w)`` with ``v`` in GF(p)^7 and ``w`` the coset
coordinates of ``w + U`` in A/U (A the 21-dimensional exterior square).  The
product is

    (v, w)(v', w') = (v + v', w + w' + [v ^ v'])

where ``[.]`` is reduction to coset coordinates.  Because ``v ^ v = 0`` the
law gives ``(v, w)^k = (k v, k w)`` and the commutator
``[(v, w), (v', w')] = (0, [2 v ^ v'])``.  Associativity follows from
bilinearity of the wedge and linearity of ``[.]``; it is also sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exterior import (U_DIM, WEDGE_DIM, NotInvariantError, invariance_witness, kernel_u,
                       lambda2, quotient_action, wedge_array)
from .linalg import FpMatrix, ShapeError, Subspace, check_prime, kernel
from .octonion import IMAG_DIM

COSET_DIM = WEDGE_DIM - U_DIM


@dataclass(frozen=True, eq=False)
class PGroupContext:
    p: int
    u: Subspace

    def __post_init__(self):
        p = check_prime(self.p)
        if self.u.p != p:
            raise ShapeError(f"subspace lives over GF({self.u.p}), not GF({p})")
        if self.u.ambient_dim != WEDGE_DIM or self.u.dim != U_DIM:
            raise ValueError(f"U must be {U_DIM}-dimensional in a {WEDGE_DIM}-dimensional space, "
                             f"got dim {self.u.dim} in {self.u.ambient_dim}")

    @classmethod
    def build(cls, p: int) -> "PGroupContext":
        return cls(p, kernel_u(check_prime(p)))

    def __eq__(self, other):
        if not isinstance(other, PGroupContext):
            return NotImplemented
        return self.p == other.p and self.u == other.u

    def __hash__(self):
        return hash((self.p, self.u))

    @property
    def non_pivots(self) -> list[int]:
        return self.u.non_pivots

    def reduce(self, w: np.ndarray) -> np.ndarray:
        """Coset coordinates of wedge vectors (rows of ``w``)."""
        return self.u.reduce_array(w)[..., self.non_pivots]

    def mul_arrays(self, v1, w1, v2, w2):
        p = self.p
        return (v1 + v2) % p, (w1 + w2 + self.reduce(wedge_array(v1, v2, p))) % p

    def element(self, v, w=None) -> "PGroupElement":
        w = (0,) * COSET_DIM if w is None else w
        return PGroupElement(self, tuple(int(x) % self.p for x in v),
                             tuple(int(x) % self.p for x in w))

    def identity(self) -> "PGroupElement":
        return self.element((0,) * IMAG_DIM)

    def random_arrays(self, rng: np.random.Generator, n: int):
        return (rng.integers(0, self.p, size=(n, IMAG_DIM)),
                rng.integers(0, self.p, size=(n, COSET_DIM)))

    def random_element(self, rng: np.random.Generator) -> "PGroupElement":
        v, w = self.random_arrays(rng, 1)
        return self.element(v[0], w[0])

    def to_json(self) -> dict:
        return {"p": self.p, "u": self.u.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "PGroupContext":
        return cls(int(obj["p"]), Subspace.from_json(obj["u"]))


@dataclass(frozen=True)
class PGroupElement:
    ctx: PGroupContext = field(repr=False)
    v: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self):
        if len(self.v) != IMAG_DIM or len(self.w) != COSET_DIM:
            raise ShapeError("an element of P_U is a pair of 7-vectors")

    @property
    def arrays(self):
        return np.array(self.v, dtype=np.int64), np.array(self.w, dtype=np.int64)

    def __mul__(self, other: "PGroupElement") -> "PGroupElement":
        return multiply(self, other)

    def __pow__(self, k: int) -> "PGroupElement":
        return power(self, k)

    def is_identity(self) -> bool:
        return not any(self.v) and not any(self.w)

    def to_json(self) -> dict:
        return {"v": list(self.v), "w": list(self.w)}


def _same_ctx(a: PGroupElement, b: PGroupElement, ctx: PGroupContext | None):
    ctx = ctx or a.ctx
    if a.ctx != ctx or b.ctx != ctx:
        raise ShapeError("elements belong to different P_U contexts")
    return ctx


def multiply(a: PGroupElement, b: PGroupElement, ctx: PGroupContext | None = None) -> PGroupElement:
    ctx = _same_ctx(a, b, ctx)
    v, w = ctx.mul_arrays(*a.arrays, *b.arrays)
    return ctx.element(v, w)


def inverse(a: PGroupElement) -> PGroupElement:
    return a.ctx.element([-x for x in a.v], [-x for x in a.w])


def power(a: PGroupElement, k: int) -> PGroupElement:
    return a.ctx.element([k * x for x in a.v], [k * x for x in a.w])


def power_by_multiplication(a: PGroupElement, k: int) -> PGroupElement:
    """``a**k`` by square-and-multiply through the group law (independent of ``power``)."""
    result, base = a.ctx.identity(), a
    if k < 0:
        base, k = inverse(a), -k
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def commutator(a: PGroupElement, b: PGroupElement) -> PGroupElement:
    """``a^-1 b^-1 a b``, which equals (0, [2 a.v ^ b.v])."""
    ctx = _same_ctx(a, b, None)
    v1, _ = a.arrays
    v2, _ = b.arrays
    return ctx.element((0,) * IMAG_DIM, ctx.reduce(wedge_array(2 * v1, v2, ctx.p)))


# -- verification -----------------------------------------------------------

class CheckResult(NamedTuple):
    name: str
    passed: bool
    samples: int
    witness: object = None


def _first_bad(mask: np.ndarray):
    bad = np.flatnonzero(~mask)
    return int(bad[0]) if bad.size else None


def verify_group_axioms(ctx: PGroupContext, samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    p = ctx.p
    rng = np.random.default_rng([seed, p, 1])
    results = []

    a, b, c = (ctx.random_arrays(rng, samples) for _ in range(3))
    left = ctx.mul_arrays(*ctx.mul_arrays(*a, *b), *c)
    right = ctx.mul_arrays(*a, *ctx.mul_arrays(*b, *c))
    ok = np.all(left[0] == right[0], axis=1) & np.all(left[1] == right[1], axis=1)
    bad = _first_bad(ok)
    results.append(CheckResult("associativity", bad is None, samples,
                               None if bad is None else _triple_witness(a, b, c, bad)))

    zero = (np.zeros_like(a[0]), np.zeros_like(a[1]))
    l1, r1 = ctx.mul_arrays(*zero, *a), ctx.mul_arrays(*a, *zero)
    ok = (np.all(l1[0] == a[0] % p, axis=1) & np.all(l1[1] == a[1] % p, axis=1)
          & np.all(r1[0] == a[0] % p, axis=1) & np.all(r1[1] == a[1] % p, axis=1))
    results.append(CheckResult("identity", bool(ok.all()), samples, _first_bad(ok)))

    neg = ((-a[0]) % p, (-a[1]) % p)
    l2, r2 = ctx.mul_arrays(*a, *neg), ctx.mul_arrays(*neg, *a)
    ok = ~np.any(l2[0], axis=1) & ~np.any(l2[1], axis=1) & ~np.any(r2[0], axis=1) & ~np.any(r2[1], axis=1)
    results.append(CheckResult("inverses", bool(ok.all()), samples, _first_bad(ok)))

    results.append(_wedge_bilinearity(p))
    results.append(reduction_consistency(ctx))

    # (0, w) is central: its product with anything commutes
    central = (np.zeros_like(b[0]), b[1])
    l3, r3 = ctx.mul_arrays(*central, *a), ctx.mul_arrays(*a, *central)
    ok = np.all(l3[0] == r3[0], axis=1) & np.all(l3[1] == r3[1], axis=1)
    results.append(CheckResult("second_coordinate_central", bool(ok.all()), samples, _first_bad(ok)))
    return results


def _triple_witness(a, b, c, i):
    return [{"v": x[0][i].tolist(), "w": x[1][i].tolist()} for x in (a, b, c)]


def _wedge_bilinearity(p: int) -> CheckResult:
    """Exhaustive basis check: additivity in each slot, scaling, alternation."""
    e = np.eye(IMAG_DIM, dtype=np.int64)
    idx = np.array([(r, s, t) for r in range(7) for s in range(7) for t in range(7)])
    er, es, et = e[idx[:, 0]], e[idx[:, 1]], e[idx[:, 2]]
    lam = 2 % p
    ok = (np.all(wedge_array(er + es, et, p) == (wedge_array(er, et, p) + wedge_array(es, et, p)) % p, axis=1)
          & np.all(wedge_array(et, er + es, p) == (wedge_array(et, er, p) + wedge_array(et, es, p)) % p, axis=1)
          & np.all(wedge_array(lam * er, es, p) == lam * wedge_array(er, es, p) % p, axis=1)
          & ~np.any(wedge_array(er, er, p), axis=1)
          & np.all(wedge_array(er, es, p) == (-wedge_array(es, er, p)) % p, axis=1))
    bad = _first_bad(ok)
    return CheckResult("wedge_bilinearity", bad is None, len(idx),
                       None if bad is None else idx[bad].tolist())


def reduction_consistency(ctx: PGroupContext) -> CheckResult:
    """U reduces to zero and the coset representatives reduce to unit coordinates."""
    ubad = np.flatnonzero(np.any(ctx.reduce(ctx.u.basis.data), axis=1))
    reps = np.eye(WEDGE_DIM, dtype=np.int64)[ctx.non_pivots]
    rep_ok = np.array_equal(ctx.reduce(reps), np.eye(COSET_DIM, dtype=np.int64))
    witness = None
    if ubad.size:
        witness = {"u_basis_row": int(ubad[0])}
    elif not rep_ok:
        witness = {"coset_representatives": "not reduced to unit vectors"}
    return CheckResult("reduction_consistency", witness is None, ctx.u.dim + COSET_DIM, witness)


@dataclass(frozen=True)
class StructureReport:
    p: int
    order_exponent: int
    nilpotency_class: int
    rank: int
    exponent_is_p: bool
    center_dim: int
    derived_dim: int
    frattini_dim: int
    v_center_kernel_dim: int
    center_equals_derived: bool
    exponent_samples: int

    def to_json(self) -> dict:
        return {"order": f"p^{self.order_exponent}", "class": self.nilpotency_class,
                "rank": self.rank, "exponent": "p" if self.exponent_is_p else "not p",
                "center_dim": self.center_dim, "derived_dim": self.derived_dim,
                "frattini_dim": self.frattini_dim}


def center_v_matrix(ctx: PGroupContext) -> FpMatrix:
    """7 x 49 matrix of v -> ([v ^ e_0], ..., [v ^ e_6])."""
    e = np.eye(IMAG_DIM, dtype=np.int64)
    rows = [np.concatenate([ctx.reduce(wedge_array(e[i], e[j], ctx.p)) for j in range(IMAG_DIM)])
            for i in range(IMAG_DIM)]
    return FpMatrix(ctx.p, np.array(rows))


def structure_report(ctx: PGroupContext, exponent_samples: int = 10_000, seed: int = 0) -> StructureReport:
    p = ctx.p
    order_exponent = IMAG_DIM + (WEDGE_DIM - ctx.u.dim)

    # commutators (0, [2 e_s ^ e_t]) span the derived subgroup
    e = np.eye(IMAG_DIM, dtype=np.int64)
    comms = np.array([ctx.reduce(wedge_array(2 * e[s], e[t], p))
                      for s in range(IMAG_DIM) for t in range(IMAG_DIM)])
    derived = Subspace.span(comms, p, COSET_DIM)

    v_kernel = kernel(center_v_matrix(ctx))
    center_dim = v_kernel.dim + COSET_DIM

    # derived subgroup is central: commutators of its generators with the
    # generators (e_j, 0) of P vanish
    gens = [ctx.element(e[j]) for j in range(IMAG_DIM)]
    derived_central = all(commutator(ctx.element((0,) * IMAG_DIM, d), g).is_identity()
                          for d in derived.basis.data for g in gens)
    nil_class = 2 if derived.dim > 0 and derived_central else (1 if derived.dim == 0 else -1)

    rng = np.random.default_rng([seed, p, 2])
    v, w = ctx.random_arrays(rng, exponent_samples)
    pv, pw = power_arrays(ctx, v, w, p)
    exp_sampled = not np.any(pv) and not np.any(pw)
    exp_formula = all(power(ctx.element(e[j], e[j]), p).is_identity() for j in range(IMAG_DIM))
    exp_ok = exp_sampled and exp_formula
    # with exponent p the Frattini subgroup P' P^p is just P'
    frattini_dim = derived.dim if exp_ok else -1
    return StructureReport(
        p=p, order_exponent=order_exponent, nilpotency_class=nil_class,
        rank=order_exponent - frattini_dim, exponent_is_p=exp_ok,
        center_dim=center_dim, derived_dim=derived.dim, frattini_dim=frattini_dim,
        v_center_kernel_dim=v_kernel.dim,
        center_equals_derived=v_kernel.dim == 0 and derived.dim == COSET_DIM,
        exponent_samples=exponent_samples)


def power_arrays(ctx: PGroupContext, v, w, k: int):
    """Batched ``(v, w)**k`` (k >= 0) by square-and-multiply through the group law."""
    rv, rw = np.zeros_like(v), np.zeros_like(w)
    bv, bw = v % ctx.p, w % ctx.p
    while k:
        if k & 1:
            rv, rw = ctx.mul_arrays(rv, rw, bv, bw)
        bv, bw = ctx.mul_arrays(bv, bw, bv, bw)
        k >>= 1
    return rv, rw


# -- automorphisms -----------------------------------------------------------

@dataclass(frozen=True)
class PGroupAutomorphism:
    """``(v, w) -> (v g, w Q)`` where Q is the induced action on A/U."""

    ctx: PGroupContext = field(repr=False)
    g: FpMatrix
    q: FpMatrix

    def apply_arrays(self, v, w):
        p = self.ctx.p
        return (v @ self.g.data) % p, (w @ self.q.data) % p

    def __call__(self, a: PGroupElement) -> PGroupElement:
        v, w = self.apply_arrays(*a.arrays)
        return self.ctx.element(v, w)

    def then(self, other: "PGroupAutomorphism") -> "PGroupAutomorphism":
        """Apply ``self`` first, then ``other``."""
        return PGroupAutomorphism(self.ctx, self.g @ other.g, self.q @ other.q)

    @property
    def frattini_action(self) -> FpMatrix:
        return self.g

    def multiplicativity_witness(self, samples: int = 1000, seed: int = 0):
        ctx = self.ctx
        rng = np.random.default_rng([seed, ctx.p, 3])
        a, b = ctx.random_arrays(rng, samples), ctx.random_arrays(rng, samples)
        lhs = self.apply_arrays(*ctx.mul_arrays(*a, *b))
        rhs = ctx.mul_arrays(*self.apply_arrays(*a), *self.apply_arrays(*b))
        ok = np.all(lhs[0] == rhs[0], axis=1) & np.all(lhs[1] == rhs[1], axis=1)
        bad = _first_bad(ok)
        return None if bad is None else _triple_witness(a, b, b, bad)[:2]

    def is_multiplicative(self, samples: int = 1000, seed: int = 0) -> bool:
        return self.multiplicativity_witness(samples, seed) is None


def lift_automorphism(g, ctx: PGroupContext) -> PGroupAutomorphism:
    m = getattr(g, "mat7", g)
    if m.shape != (IMAG_DIM, IMAG_DIM) or m.p != ctx.p:
        raise ShapeError(f"expected a 7x7 matrix over GF({ctx.p})")
    if m.det() == 0:
        raise ValueError("a singular matrix does not induce an automorphism")
    bad = invariance_witness(ctx.u, lambda2(m))
    if bad is not None:
        raise NotInvariantError("matrix does not stabilize U", ctx.u.basis.row(bad).tolist())
    return PGroupAutomorphism(ctx, m, quotient_action(m, ctx.u))
