import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octo import linalg as la
from octo.linalg import FpMatrix, FpVector, Subspace


def test_inv_small_example():
    assert la.inv(2, 5) == 3


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_neg_zero(p):
    assert la.neg(0, p) == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_inverse_exhaustive(p):
    # brute force: the unique b with a*b = 1 found by scanning all residues
    for a in range(1, p):
        brute = next(b for b in range(p) if (a * b) % p == 1)
        assert la.inv(a, p) == brute
        assert la.mul(a, la.inv(a, p), p) == 1


def test_inverse_of_zero_is_domain_error():
    with pytest.raises(la.FieldError):
        la.inv(0, 7)


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3, 2**31 + 1])
def test_check_prime_rejects(bad):
    with pytest.raises(ValueError):
        la.check_prime(bad)


def test_check_prime_accepts_large():
    assert la.check_prime(2**31 - 1) == 2**31 - 1


def test_add_sub_mul_canonical():
    assert la.add(4, 3, 5) == 2
    assert la.sub(1, 3, 5) == 3
    assert la.mul(4, 4, 5) == 1


def test_rref_identity():
    r, rank, piv = la.rref(FpMatrix.identity(7, 5))
    assert r == FpMatrix.identity(7, 5)
    assert rank == 7 and piv == list(range(7))


def test_rref_zero():
    r, rank, piv = la.rref(FpMatrix.zeros(3, 4, 7))
    assert r == FpMatrix.zeros(3, 4, 7)
    assert rank == 0 and piv == []


def test_rref_idempotent_seeded(rng):
    for _ in range(20):
        m = FpMatrix(5, rng.integers(0, 5, size=(21, 21)))
        r = m.rref()[0]
        assert r.rref()[0] == r


def test_rref_canonical_under_row_operations(rng):
    p = 7
    for _ in range(20):
        m = FpMatrix(p, rng.integers(0, p, size=(6, 10)) @ rng.integers(0, 2, size=(10, 10)))
        while True:
            e = FpMatrix(p, rng.integers(0, p, size=(6, 6)))
            if e.det():
                break
        assert (e @ m).rref()[0] == m.rref()[0]


def test_rref_known_example():
    m = la.matrix([[2, 4, 1], [1, 2, 4]], 5)
    r, rank, piv = m.rref()
    # by hand: R1*3 = [1,2,3]; R2 - R1 = [0,0,1]; R1 - 3 R2 = [1,2,0]
    assert r.tolist() == [[1, 2, 0], [0, 0, 1]]
    assert rank == 2 and piv == [0, 2]


def test_kernel_of_zero_map_is_everything():
    k = la.kernel(FpMatrix.zeros(7, 7, 3))
    assert k.dim == 7 and k == Subspace.full(7, 3)


def test_kernel_of_identity_is_zero():
    k = la.kernel(FpMatrix.identity(7, 3))
    assert k.dim == 0 and k.basis.shape == (0, 7)


def test_kernel_vectors_annihilate(rng):
    p = 11
    for _ in range(20):
        m = FpMatrix(p, rng.integers(0, p, size=(9, 3)) @ rng.integers(0, p, size=(3, 5)))
        k = la.kernel(m)
        assert not np.any((k.basis @ m).data)
        assert k.dim == m.rows - m.rank


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.sampled_from([3, 5, 7, 13]), st.data())
def test_rank_nullity(rows, cols, p, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    m = FpMatrix(p, np.array(entries).reshape(rows, cols))
    assert m.rank + la.kernel(m).dim == rows
    assert m.rank == m.T.rank


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.data())
def test_matmul_associative_and_distributive(p, data):
    def mat(r, c):
        e = data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
        return FpMatrix(p, np.array(e).reshape(r, c))
    a, b, c, d = mat(3, 4), mat(4, 2), mat(2, 5), mat(4, 2)
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + d) == a @ b + a @ d


def test_matmul_large_prime_exact():
    p = 2**31 - 1
    a = FpMatrix(p, np.full((3, 40), p - 1))
    # (p-1)^2 * 40 overflows int64 if summed naively; (-1)(-1)*40 = 40
    assert (a @ a.T).tolist() == [[40] * 3] * 3


def test_inverse_and_det():
    m = la.matrix([[1, 2], [3, 4]], 7)
    assert m.det() == (1 * 4 - 2 * 3) % 7
    assert m @ m.inverse() == FpMatrix.identity(2, 7)
    with pytest.raises(la.FieldError):
        la.matrix([[1, 2], [2, 4]], 7).inverse()


def test_det_multiplicative(rng):
    p = 13
    for _ in range(10):
        a, b = (FpMatrix(p, rng.integers(0, p, size=(5, 5))) for _ in range(2))
        assert (a @ b).det() == a.det() * b.det() % p


def test_solve_identity():
    b = la.vector([1, 2, 3], 5)
    sol = la.solve_linear_system(FpMatrix.identity(3, 5), b)
    assert sol.solvable and sol.particular.tolist() == [[1, 2, 3]]
    assert sol.kernel.dim == 0


def test_solve_zero_system():
    zero = FpMatrix.zeros(3, 3, 5)
    sol = la.solve_linear_system(zero, la.vector([0, 0, 0], 5))
    assert sol.solvable and sol.kernel.dim == 3
    assert not la.solve_linear_system(zero, la.vector([0, 1, 0], 5)).solvable


def test_solve_random_consistent(rng):
    p = 7
    for _ in range(30):
        a = FpMatrix(p, rng.integers(0, p, size=(6, 4)) @ rng.integers(0, p, size=(4, 8)))
        x = FpMatrix(p, rng.integers(0, p, size=(2, 6)))
        b = x @ a
        sol = la.solve_linear_system(a, b)
        assert sol.solvable
        assert sol.particular @ a == b


def test_solve_shape_mismatch():
    with pytest.raises(la.ShapeError):
        la.solve_linear_system(FpMatrix.identity(3, 5), la.vector([1, 2], 5))


def test_subspace_equal_after_row_permutation():
    rows = np.array([[1, 2, 0, 1], [0, 1, 1, 1], [1, 0, 0, 0]])
    a = Subspace.span(rows, 5)
    b = Subspace.span(rows[::-1], 5)
    assert la.subspace_equal(a, b)


def test_subspace_contains_basis_and_rejects_witness():
    u = Subspace.span(np.array([[1, 2, 0, 1], [0, 0, 1, 3]]), 5)
    for row in u.basis.data:
        assert la.subspace_contains(u, FpVector(5, row))
    # v in u plus a non-pivot unit vector lies outside u
    x = FpVector.unit(4, u.non_pivots[0], 5)
    assert not la.subspace_contains(u, u.basis.row(0) + x)


def test_subspace_ambient_mismatch():
    with pytest.raises(la.ShapeError):
        la.subspace_equal(Subspace.full(3, 5), Subspace.full(4, 5))
    with pytest.raises(la.ShapeError):
        Subspace.full(3, 5).contains(la.vector([1, 2], 5))


def test_subspace_rejects_non_rref_basis():
    with pytest.raises(ValueError):
        Subspace(5, 2, la.matrix([[1, 1], [1, 0]], 5))


def test_matrix_json_round_trip(rng):
    m = FpMatrix(7, rng.integers(0, 7, size=(3, 5)))
    obj = m.to_json()
    assert obj["rows"] == 3 and obj["cols"] == 5 and len(obj["entries"]) == 15
    assert FpMatrix.from_json(obj) == m


def test_matrix_json_rejects_noncanonical():
    with pytest.raises(ValueError):
        FpMatrix.from_json({"p": 5, "rows": 1, "cols": 2, "entries": [1, 5]})


def test_subspace_json_round_trip():
    u = Subspace.span(np.array([[1, 2, 0, 1], [0, 0, 1, 3]]), 5)
    assert Subspace.from_json(u.to_json()) == u


def test_matrices_are_immutable():
    m = FpMatrix.identity(3, 5)
    with pytest.raises(ValueError):
        m.data[0, 0] = 2


def test_field_mismatch():
    with pytest.raises(la.ShapeError):
        FpMatrix.identity(2, 3) @ FpMatrix.identity(2, 5)
