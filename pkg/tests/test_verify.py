import json

import jsonschema
import numpy as np
import pytest

from octo import exterior as ext
from octo import verify
from octo.linalg import FpMatrix, FpVector, Subspace


@pytest.fixture(scope="module")
def cert3():
    return verify.run_pipeline(3, samples=40, seed=7)


def test_reflection_properties(rng):
    for p in (3, 5, 7):
        v = FpVector(p, [1, 1, 1, 1, 0, 0, 0])
        r = verify.reflection(v)
        assert r.det() == p - 1
        assert r @ r == FpMatrix.identity(7, p)
        assert verify.preserves_beta(r)
        assert v @ r == -v


def test_reflection_of_isotropic_vector_rejected():
    # 1 + 1 + 1 = 0 mod 3
    with pytest.raises(ValueError):
        verify.reflection(FpVector(3, [1, 1, 1, 0, 0, 0, 0]))


def test_nonstabilizing_isometry_p3():
    w = verify.find_nonstabilizing_isometry(3, seed=1)
    assert w.matrix.det() == 1
    assert verify.preserves_beta(w.matrix)
    assert not ext.is_invariant(ext.kernel_u(3), ext.lambda2(w.matrix))
    assert verify.reflection(w.u) @ verify.reflection(w.v) == w.matrix


def test_nonstabilizing_isometry_search_can_fail():
    with pytest.raises(verify.SearchFailed):
        verify.find_nonstabilizing_isometry(5, max_attempts=0)


def test_certificate_schema(cert3):
    obj = json.loads(cert3.dumps())
    jsonschema.validate(obj, verify.CERTIFICATE_SCHEMA)
    assert obj["status"] == verify.PASS and not obj["aborted"]


def test_certificate_deterministic(cert3):
    again = verify.run_pipeline(3, samples=40, seed=7)
    assert again.dumps(timing=False) == cert3.dumps(timing=False)
    assert again.u_digest == verify.digest(ext.kernel_u(3).to_json())


def test_seed_changes_matrix_digest(cert3):
    other = verify.run_pipeline(3, samples=40, seed=8, prefixes=("g2.",))
    assert other.matrices_digest != cert3.matrices_digest
    assert other.u_digest == cert3.u_digest


def test_paper_trusted_entries(cert3):
    trusted = [c.name for c in cert3.checks if c.status == verify.PAPER_TRUSTED]
    assert trusted == list(verify.PAPER_TRUSTED_CHECKS)
    assert cert3.passed and cert3.exit_code == 0


def test_registry_covers_every_invariant():
    covered = {c for chk in verify.CHECKS for c in chk.covers}
    missing = [f"{m}.{i}" for m, items in verify.MODULE_INVARIANTS.items() for i in items
               if f"{m}.{i}" not in covered]
    assert missing == []


def test_registry_names_unique_and_run_once(cert3):
    names = [c.name for c in verify.CHECKS]
    assert len(names) == len(set(names))
    assert [c.name for c in cert3.checks] == names


def test_prefix_filter():
    cert = verify.run_pipeline(5, samples=10, prefixes=("octonion.",))
    assert cert.checks and all(c.name.startswith("octonion.") for c in cert.checks)


@pytest.mark.parametrize("p", [2, 4, 17])
def test_pipeline_rejects_bad_prime(p):
    with pytest.raises(ValueError):
        verify.run_pipeline(p)


def test_check_exception_aborts(monkeypatch):
    idx = next(i for i, c in enumerate(verify.CHECKS) if c.name.startswith("octonion."))

    def boom(st):
        raise RuntimeError("injected")

    checks = list(verify.CHECKS)
    checks[idx] = verify.Check(checks[idx].name, (), boom)
    monkeypatch.setattr(verify, "CHECKS", checks)
    cert = verify.run_pipeline(3, samples=5)
    assert cert.aborted and not cert.passed and cert.exit_code == 1
    assert cert.checks[-1].status == verify.FAIL
    assert "injected" in cert.checks[-1].witness
    assert len(cert.checks) == idx + 1


def test_failing_check_sets_exit_code(monkeypatch):
    checks = list(verify.CHECKS)
    checks[0] = verify.Check(checks[0].name, (), lambda st: verify.Outcome(False, 1, {"why": "forced"}))
    monkeypatch.setattr(verify, "CHECKS", checks)
    cert = verify.run_pipeline(3, samples=5, prefixes=("linalg.",))
    assert not cert.aborted and cert.exit_code == 1
    assert cert.checks[0].witness == {"why": "forced"}


def test_export_u_round_trip(tmp_path):
    path = verify.export("u", tmp_path / "u.json", p=5)
    u = Subspace.from_json(json.loads(path.read_text()))
    assert u == ext.kernel_u(5)


def test_export_matrices_and_table(tmp_path):
    mats = json.loads(verify.export("matrices", tmp_path / "m.json", p=5, samples=3).read_text())
    assert len(mats) == 3
    assert all(np.asarray(FpMatrix.from_json(m).data).shape == (7, 7) for m in mats)
    table = json.loads(verify.export("table", tmp_path / "t.json", p=5).read_text())
    assert len(table["table"]) == 8


def test_export_cert_reuses_certificate(tmp_path, cert3):
    path = verify.export("cert", tmp_path / "c.json", certificate=cert3)
    assert path.read_text() == cert3.dumps()


def test_export_unknown_kind(tmp_path):
    with pytest.raises(ValueError):
        verify.export("nope", tmp_path / "x.json", p=3)
