import numpy as np
import pytest

from gbss.clifford import build_su_basis, local_frame
from gbss.measurement import (
    coherence_from_effect,
    effect_from_coherence,
    is_pure_effect,
    mu,
    mu_max,
    optimal_povm,
    post_measurement_state,
)
from gbss.state import GbssSpec, random_physical_spec, realize


def test_effect_zero_vector():
    b = build_su_basis(4)
    np.testing.assert_allclose(effect_from_coherence(np.zeros(15), b), np.eye(4) / 4)


def test_qubit_effect():
    b = build_su_basis(2)
    np.testing.assert_allclose(effect_from_coherence([0, 0, 1], b), np.diag([1, 0]))


def test_weyl_example_vector_is_rank_one():
    b = local_frame(4, "weyl").basis
    for signs in [(1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1)]:
        e = np.zeros(15)
        e[[4, 7, 8]] = np.array(signs) / np.sqrt(3)
        E = effect_from_coherence(e, b)
        ev = np.linalg.eigvalsh(E)
        np.testing.assert_allclose(ev, [0, 0, 0, 1], atol=1e-12)
        assert is_pure_effect(e, b)


def test_coherence_roundtrip(rng):
    b = build_su_basis(4)
    e = rng.standard_normal(15) * 0.1
    np.testing.assert_allclose(coherence_from_effect(effect_from_coherence(e, b), b), e, atol=1e-12)


def test_mixed_effect_not_pure():
    b = build_su_basis(4)
    e = np.zeros(15)
    e[0] = 1.0
    assert not is_pure_effect(e, b)


def test_mu_examples():
    spec = GbssSpec(1, 1, [0.6, 0, 0])
    assert mu(spec, [1, 0, 0]) == pytest.approx(0.6)
    assert mu(GbssSpec(1, 1, [0, 0, 0]), [1, 0, 0]) == 0


def test_post_state_example():
    spec = GbssSpec(1, 1, [0.6, 0, 0])
    p, rho_b = post_measurement_state(spec, [1, 0, 0])
    assert p == pytest.approx(0.5)
    sx = np.array([[0, 1], [1, 0]])
    np.testing.assert_allclose(rho_b, (np.eye(2) + 0.6 * sx) / 2, atol=1e-14)


def test_post_state_trivial_and_zero_probability():
    spec = GbssSpec(1, 2, [0, 0, 0])
    p, rho_b = post_measurement_state(spec, [0, 0, 1])
    np.testing.assert_allclose(rho_b, np.eye(4) / 4)
    p, rho_b = post_measurement_state(spec, np.zeros((2, 2)))
    assert p == 0.0 and rho_b is None


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 2)])
def test_post_state_matches_dense(rng, n, m):
    spec = GbssSpec(n, m, random_physical_spec(n, m, rng).t, y=rng.uniform(-0.05, 0.05, 2 * n + 1))
    N, M = spec.dims
    rho = realize(spec).data.reshape(N, M, N, M)
    povm = optimal_povm(GbssSpec(n, m, spec.t))
    total = 0.0
    for E in povm.matrices:
        p, rho_b = post_measurement_state(spec, E)
        dense = np.einsum("ba,ambn->mn", E, rho)
        np.testing.assert_allclose(p * rho_b, dense, atol=1e-13)
        total += p
    assert total == pytest.approx(1.0)


def test_optimal_povm_qubit():
    povm = optimal_povm(GbssSpec(1, 1, [0.6, 0.3, 0.1]))
    sx = np.array([[0, 1], [1, 0]])
    expected = sorted([(np.eye(2) + sx) / 2, (np.eye(2) - sx) / 2], key=lambda e: -e[0, 1])
    got = sorted(povm.matrices, key=lambda e: -e[0, 1].real)
    np.testing.assert_allclose(got, expected, atol=1e-14)


def test_optimal_povm_weyl_example():
    spec = GbssSpec(2, 2, [0.1, 0.2, 0.1, 0.05, 0.6])
    povm = optimal_povm(spec, "weyl")
    povm.validate(1e-12)
    nonzero = {tuple(np.flatnonzero(np.abs(v) > 1e-12)) for v in povm.vectors}
    assert nonzero == {(4, 7, 8)}
    np.testing.assert_allclose(np.abs(povm.vectors[:, [4, 7, 8]]), 1 / np.sqrt(3), atol=1e-12)
    frame = local_frame(4, "weyl")
    for v in povm.vectors:
        assert mu(spec, v, frame) == pytest.approx(mu_max(spec))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_optimal_povm_complete_and_optimal(rng, n):
    spec = random_physical_spec(n, n, rng)
    povm = optimal_povm(spec)
    assert povm.count == 2**n
    assert povm.completeness_error() <= 1e-12
    assert povm.min_eigenvalue() >= -1e-12
    frame = local_frame(spec.N)
    for v in povm.vectors:
        assert mu(spec, v, frame) == pytest.approx(np.sqrt(2 / spec.N) * np.abs(spec.t).max())
        entries = np.abs(v[np.abs(v) > 1e-12])
        np.testing.assert_allclose(entries, 1 / np.sqrt(spec.N - 1))


def test_degenerate_flag():
    assert optimal_povm(GbssSpec(1, 1, [0, 0, 0])).degenerate
    assert optimal_povm(GbssSpec(1, 1, [0.1, 0, 0])).to_dict()["N"] == 2


def test_povm_validate_rejects():
    from gbss.measurement import Povm

    b = build_su_basis(2)
    bad = Povm(np.zeros((1, 3)), np.array([np.eye(2) / 2]), b)
    with pytest.raises(ValueError):
        bad.validate()
