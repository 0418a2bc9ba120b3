"""End-to-end acceptance criteria, exact, for p in {3, 5, 7, 11}.

Each test prints one ``ACCEPTANCE <criterion> p=<p>: PASS|FAIL`` line.
"""

import numpy as np
import pytest

from octo import exterior as ext
from octo import g2
from octo import octonion as octo
from octo import pgroup as pg
from octo import verify
from octo.linalg import FpMatrix, FpVector

from conftest import DESK_PRIMES, g2_samples

SAMPLES = 200
SEED = 2024


@pytest.fixture
def report(capsys, request):
    def emit(criterion, p, ok, detail=""):
        with capsys.disabled():
            tail = f" ({detail})" if detail else ""
            print(f"\nACCEPTANCE {criterion} p={p}: {'PASS' if ok else 'FAIL'}{tail}")
        assert ok, f"{criterion} failed at p={p}: {detail}"
    return emit


def rule_table():
    """Basis products (index in 0..7 with 0 = 1, sign) written out from the defining rules."""
    t = {}
    for k in range(8):
        t[0, k] = t[k, 0] = (k, 1)
    for s in range(7):
        a, b, c = s, (s + 1) % 7, (s + 3) % 7
        t[a + 1, a + 1] = (0, -1)
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            t[x + 1, y + 1] = (z + 1, 1)
            t[y + 1, x + 1] = (z + 1, -1)
    return t


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_kernel_dimension_and_image(p, report):
    f = ext.ftilde_matrix(p)
    u = ext.kernel_u(p)
    ok = u.dim == 14 and u.ambient_dim == 21 and f.rank == 7
    report("kernel_dimension", p, ok, f"dim U={u.dim}, rank f~={f.rank}")


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_octonion_laws(p, report):
    table = rule_table()
    full = len(table) == 64
    products = all(
        octo.Octonion.basis(s, p) * octo.Octonion.basis(t, p) == octo.Octonion.basis(k, p).scale(sign)
        for (s, t), (k, sign) in table.items())
    anti = all(octo.Octonion.unit(s, p) * octo.Octonion.unit(t, p)
               == -(octo.Octonion.unit(t, p) * octo.Octonion.unit(s, p))
               for s in range(7) for t in range(7) if s != t)
    rng = np.random.default_rng([SEED, p])
    x, y = rng.integers(0, p, size=(2, 10_000, 8))
    xx, yx = octo.mul_coords(x, x, p), octo.mul_coords(y, x, p)
    alt = (np.array_equal(octo.mul_coords(xx, y, p), octo.mul_coords(x, octo.mul_coords(x, y, p), p))
           and np.array_equal(octo.mul_coords(y, xx, p), octo.mul_coords(yx, x, p)))
    i0, i1, i2 = (octo.Octonion.unit(t, p) for t in range(3))
    nonassoc = (i0 * i1) * i2 != i0 * (i1 * i2)
    ok = full and products and anti and alt and nonassoc
    report("octonion_laws", p, ok,
           f"table={full and products}, anticommute={anti}, alternative={alt}, nonassoc={nonassoc}")


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_g2_sampling(p, report):
    u = ext.kernel_u(p)
    eye = FpMatrix.identity(7, p)
    bad = []
    for k, g in enumerate(g2_samples(p, SAMPLES, SEED)):
        m = g.mat7
        if not (g2.is_automorphism(m) and m @ m.T == eye and m.det() == 1
                and ext.is_invariant(u, ext.lambda2(m)) and ext.equivariance_check(m)):
            bad.append(k)
    report("g2_sampling", p, not bad, f"{SAMPLES} samples, failures={bad[:3]}")


def test_triple_count_p3(report):
    c = g2.count_triples(3)
    formula = 3**6 * (3**6 - 1) * (3**2 - 1)
    ok = c.product == 4_245_696 == formula and c.stage_independent
    report("triple_count", 3, ok, f"{c.n_x}*{c.n_y_given_x}*{c.n_z_given_xy}={c.product}")


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_spin_maximality(p, report):
    u = ext.kernel_u(p)
    gens = [ext.lambda2(g.mat7) for g in g2_samples(p, 20, SEED)]
    rng = np.random.default_rng([SEED, p, 5])
    outside = inside = 0
    full = stays = True
    while outside < 100:
        v = FpVector(p, rng.integers(0, p, 21))
        if v.is_zero() or v in u:
            continue
        outside += 1
        full &= ext.spin(v, gens).dim == 21
    basis = u.basis.data
    while inside < 20:
        c = rng.integers(0, p, 14)
        if not c.any():
            continue
        inside += 1
        stays &= u.contains_subspace(ext.spin(FpVector(p, c @ basis % p), gens))
    report("spin_maximality", p, full and stays, f"outside={outside} full={full}, inside={inside} stays={stays}")


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_module_isomorphism(p, report):
    u = ext.kernel_u(p)
    gs = g2_samples(p, 60, SEED)
    dims = [ext.hom_space([ext.lambda2(g.mat7) for g in gs[:n]], [g.mat7 for g in gs[:n]]).dim
            for n in (30, 60)]
    quot = ext.hom_space([ext.quotient_action(g, u) for g in gs[:30]], [g.mat7 for g in gs[:30]])
    invertible = quot.dim == 1 and quot.basis[0].det() != 0
    ok = dims == [1, 1] and invertible
    report("module_isomorphism", p, ok, f"dim Hom at 30/60 = {dims}, quotient invertible={invertible}")


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_group_structure(p, report):
    ctx = pg.PGroupContext.build(p)
    r = pg.structure_report(ctx, exponent_samples=10_000, seed=SEED)
    axioms = all(c.passed for c in pg.verify_group_axioms(ctx, samples=10_000, seed=SEED))
    ok = (axioms and r.order_exponent == 14 and r.exponent_is_p and r.nilpotency_class == 2
          and r.rank == 7 and r.center_dim == r.derived_dim == r.frattini_dim == 7
          and r.center_equals_derived)
    report("group_structure", p, ok, str(r.to_json()))


@pytest.mark.parametrize("p", DESK_PRIMES)
def test_automorphism_lifts(p, report):
    ctx = pg.PGroupContext.build(p)
    rng = np.random.default_rng([SEED, p, 6])
    mats = [g.mat7 for g in g2_samples(p, SAMPLES, SEED)]
    mats += [FpMatrix.scalar(7, lam, p) for lam in range(1, p)]
    lifted = 0
    for m in mats:
        phi = pg.lift_automorphism(m, ctx)
        a = ctx.random_element(rng)
        frattini = phi(a).v == tuple(int(x) for x in FpVector(p, a.v) @ m)
        if phi.is_multiplicative(50) and frattini and phi.frattini_action == m:
            lifted += 1
    w = verify.find_nonstabilizing_isometry(p, seed=SEED)
    moved = (w.matrix.det() == 1 and verify.preserves_beta(w.matrix)
             and not ext.is_invariant(ctx.u, ext.lambda2(w.matrix)))
    ok = lifted == len(mats) and moved
    report("automorphism_lifts", p, ok, f"lifted {lifted}/{len(mats)}, non-stabilizing isometry={moved}")
