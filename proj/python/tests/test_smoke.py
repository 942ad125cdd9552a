import numpy as np
import pytest

import gramkit as gk


def example_instance():
    u = np.eye(5, dtype=complex)
    u[0, 1], u[1, 1] = 1, 0
    e = np.eye(5, dtype=complex)
    psi = e[:, [0, 0, 1, 2, 3, 4]]
    phi = e[:, [0, 1, 1, 2, 3, 4]]
    dual_a = phi.copy()
    dual_a[:, 1] = 0
    dual_b = phi.copy()
    dual_b[:, 1] = dual_b[:, 2] = e[:, 1] / 2
    return u, phi, psi, dual_a, dual_b


def test_gram_of_identity_on_onb():
    np.testing.assert_array_equal(gk.gram(np.eye(2), np.eye(2), np.eye(2)), np.eye(2))


def test_worked_example_non_uniqueness():
    u, phi, psi, a, b = example_instance()
    up = gk.pseudo_inverse(u)
    expected = np.eye(5, dtype=complex)
    expected[0, 0] = expected[1, 0] = 0.5
    expected[1, 1] = 0
    assert np.abs(up - expected).max() <= 1e-12
    assert gk.is_dual_pair(phi, a) and gk.is_dual_pair(phi, b)
    assert np.abs(up @ a - up @ b).max() <= 1e-12
    report = gk.pinv_gram(u, phi, psi)
    assert all(r["holds"] for r in report["representations"].values() if r["guaranteed"])


def test_inverse_through_canonical_duals():
    rng = np.random.default_rng(1)
    u = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) + 4 * np.eye(4)
    phi = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    psi = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    r = gk.invert_gram(u, phi, psi)
    assert r["invertible"]
    g = gk.gram(u, phi, psi)
    np.testing.assert_allclose(r["inverse"] @ g, np.eye(4), atol=1e-9)
    ref = gk.gram(np.linalg.inv(u), gk.canonical_dual(psi), gk.canonical_dual(phi))
    assert np.linalg.norm(r["inverse"] - ref) / np.linalg.norm(ref) <= 1e-8


def test_classify_and_dual():
    f = np.array([[1, 1, 0], [0, 0, 1]], dtype=complex)
    assert gk.classify(f)["kind"] == "Frame"
    np.testing.assert_allclose(gk.canonical_dual(f), [[0.5, 0.5, 0], [0, 0, 1]], atol=1e-12)


def test_schatten_and_approx_duality():
    assert gk.schatten_norm(np.diag([3.0, 4.0]), 1) == pytest.approx(7)
    assert gk.approx_dual_defect(np.eye(2), 0.9 * np.eye(2)) == pytest.approx(0.1)
    np.testing.assert_allclose(gk.corrected_dual(np.eye(2), 0.9 * np.eye(2)), np.eye(2), atol=1e-12)


def test_stability_and_neumann():
    c = gk.stability_three_ops(np.eye(2), 1.05 * np.eye(2), np.eye(2), np.eye(2))
    assert c["holds"]
    np.testing.assert_allclose(c["series_inverse"], np.eye(2) / 1.05, atol=1e-9)
    n = gk.neumann_inverse(np.array([[1.0]]), np.array([[0.5]]))
    assert abs(n["inverse"][0, 0] - 2) <= n["truncation_bound"] + 1e-12


def test_errors_map_to_python_exceptions():
    with pytest.raises(gk.PreconditionFailed):
        gk.corrected_dual(np.eye(2), -np.eye(2))
    with pytest.raises(gk.InvalidInput):
        gk.schatten_norm(np.eye(2), 0)


def test_selftest_passes():
    assert gk.selftest(trials=1)["all_passed"]
