import numpy as np
import pytest

from gbss.gmqd import (
    correlation_block,
    evaluate_gmqd,
    gmqd_closed,
    gmqd_from_block,
    gmqd_literal,
    gmqd_oracle,
    hassan_lower_bound,
    hassan_max_term,
    max_term_closed,
    product_basis,
    tr_cc_closed,
    w1_concentration,
)
from gbss.state import GbssSpec, random_physical_spec, realize


def test_maximally_mixed_block():
    block = correlation_block(np.eye(8) / 8, (2, 4))
    expected = np.zeros((4, 16))
    expected[0, 0] = 1 / np.sqrt(8)
    np.testing.assert_allclose(block.C, expected, atol=1e-15)
    assert gmqd_oracle(np.eye(8) / 8, (2, 4), budget=20).value == pytest.approx(0.0, abs=1e-12)


def test_block_reconstructs_state(rng):
    spec = GbssSpec(1, 2, random_physical_spec(1, 2, rng).t, x=[0.05, 0, 0], y=[0, 0.02, 0])
    rho = realize(spec).data
    block = correlation_block(rho, spec.dims)
    XA, YB = product_basis(2), product_basis(4)
    rebuilt = np.einsum("ij,iab,jcd->acbd", block.C, XA, YB).reshape(8, 8)
    np.testing.assert_allclose(rebuilt, rho, atol=1e-12)
    np.testing.assert_allclose(block.G, block.G.T)
    assert block.eta.min() >= -1e-12


def test_block_rejects_dims():
    with pytest.raises(ValueError):
        correlation_block(np.eye(4) / 4, (2, 4))


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 2)])
def test_parseval_and_purity_formula(rng, n, m):
    for _ in range(5):
        t = random_physical_spec(n, m, rng).t
        spec = GbssSpec(n, m, 0.8 * t, x=rng.uniform(-0.05, 0.05, 2 * n + 1), y=rng.uniform(-0.05, 0.05, 2 * n + 1))
        rho = realize(spec).data
        block = correlation_block(rho, spec.dims)
        purity = np.trace(rho @ rho).real
        assert block.tr_cc == pytest.approx(purity, abs=1e-12)
        assert tr_cc_closed(spec) == pytest.approx(purity, abs=1e-12)
        N, M = spec.dims
        generator_form = 1 / (N * M) + 2 / (M * M * N) * block.y @ block.y + 2 / (N * N * M) * block.x @ block.x + 4 / (M * M * N * N) * np.sum(block.T**2)
        assert generator_form == pytest.approx(purity, abs=1e-12)


def test_bell_purity():
    rho = realize(GbssSpec(1, 1, [1, -1, 1])).data
    assert correlation_block(rho, (2, 2)).tr_cc == pytest.approx(1.0)


def test_two_qubit_example():
    spec = GbssSpec(1, 1, [0.5, 0.3, 0.1])
    assert gmqd_closed(spec) == pytest.approx(0.025, abs=1e-15)
    assert max_term_closed(spec) == pytest.approx(tr_cc_closed(spec) - 0.025, abs=1e-15)
    assert gmqd_oracle(realize(spec).data, (2, 2), budget=500, seed=1).value == pytest.approx(0.025, abs=1e-5)


def test_trivial_values():
    spec = GbssSpec(2, 3, np.zeros(5))
    assert gmqd_closed(spec) == 0
    assert max_term_closed(spec) == pytest.approx(1 / 32)


@pytest.mark.parametrize("n,m,tol", [(1, 1, 1e-5), (1, 2, 1e-5), (2, 2, 1e-4)])
def test_closed_matches_oracle(rng, n, m, tol):
    for _ in range(3):
        spec = random_physical_spec(n, m, rng)
        rep = evaluate_gmqd(spec, budget=1000, seed=3)
        assert abs(rep.gap) <= tol
        assert rep.D_oracle >= rep.D_closed - 1e-9
        assert rep.maxTerm_oracle <= rep.maxTerm_closed + 1e-9


def test_closed_with_local_vector(rng):
    spec = GbssSpec(1, 2, [0.3, -0.2, 0.1], x=[0.1, 0.2, 0], y=[0, 0, 0.1])
    rep = evaluate_gmqd(spec, budget=1000, seed=5)
    assert abs(rep.gap) <= 1e-5
    block = correlation_block(realize(spec).data, spec.dims)
    assert gmqd_from_block(block) == pytest.approx(rep.D_closed, abs=1e-12)


def test_block_form_equals_gamma_form(rng):
    for n, m in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        spec = random_physical_spec(n, m, rng)
        block = correlation_block(realize(spec).data, spec.dims)
        assert gmqd_from_block(block) == pytest.approx(gmqd_closed(spec), abs=1e-12)


def test_hassan_bound(rng):
    for n, m in [(1, 1), (1, 2), (2, 2)]:
        spec = random_physical_spec(n, m, rng)
        block = correlation_block(realize(spec).data, spec.dims)
        lb = hassan_lower_bound(block)
        assert gmqd_closed(spec) >= lb - 1e-12
        if n == 1:
            assert gmqd_closed(spec) == pytest.approx(lb, abs=1e-12)


def test_hassan_expansion_equals_direct(rng):
    spec = random_physical_spec(2, 2, rng)
    rho = realize(spec).data
    block = correlation_block(rho, spec.dims)
    res = gmqd_oracle(rho, spec.dims, budget=50, refine=False, seed=1)
    assert hassan_max_term(block, res.basis) == pytest.approx(res.max_term, abs=1e-12)


def test_literal_form_agrees_for_qubits_only():
    spec = GbssSpec(1, 2, [0.4, 0.2, -0.1])
    assert gmqd_literal(spec) == pytest.approx(gmqd_closed(spec))
    spec = GbssSpec(2, 2, [0.4, 0.2, -0.1, 0.1, 0.0])
    assert abs(gmqd_literal(spec) - gmqd_closed(spec)) > 1e-3


def test_scaling(rng):
    spec = random_physical_spec(2, 2, rng)
    for s in (0.0, 0.3, 0.8):
        assert gmqd_closed(GbssSpec(2, 2, s * spec.t)) == pytest.approx(s * s * gmqd_closed(spec), abs=1e-15)


def test_optimal_basis_lies_on_gamma_coordinates():
    spec = GbssSpec(2, 2, [0.05, 0.4, 0.1, 0.0, 0.1])
    res = gmqd_oracle(realize(spec).data, spec.dims, budget=1000, seed=2)
    # The gamma-coordinate weight of each projector is 1/3; the off-set
    # part carries the completing commuting strings.
    from gbss.clifford import local_frame
    from gbss.measurement import coherence_from_effect

    frame = local_frame(4)
    for k in range(4):
        u = res.basis[:, k]
        e = coherence_from_effect(np.outer(u, u.conj()), frame.basis)
        eg = frame.gamma_projection @ e
        assert eg @ eg == pytest.approx(1 / 3, abs=1e-3)
        assert abs(eg[1]) == pytest.approx(1 / np.sqrt(3), abs=1e-3)
    assert w1_concentration(res.basis) == pytest.approx(2 / 3, abs=1e-3)


def test_oracle_rejects_budget():
    with pytest.raises(ValueError):
        gmqd_oracle(np.eye(4) / 4, (2, 2), budget=0)
