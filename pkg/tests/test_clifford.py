import itertools

import numpy as np
import pytest

from gbss.clifford import (
    PAULI,
    StarProductUndefined,
    build_gamma_tower,
    build_su_basis,
    local_frame,
    max_anticommuting_set,
    pauli_decompose,
    pauli_string,
    star_product,
)


@pytest.mark.parametrize("d", [2, 4, 6, 8, 10])
def test_tower_identities(d):
    gs = build_gamma_tower(d)
    assert gs.dim == 2 ** (d // 2)
    assert gs.gammas.shape == (d + 1, gs.dim, gs.dim)
    for name, value in gs.residuals().items():
        assert value <= 1e-12, name


def test_base_case_is_pauli():
    gs = build_gamma_tower(2)
    np.testing.assert_array_equal(gs.gammas, PAULI[1:])
    g = gs.gammas
    assert np.abs(g[0] @ g[1] + g[1] @ g[0]).max() == 0


def test_d4_chirality_matrix():
    g = build_gamma_tower(4).gammas
    prod = g[0] @ g[1] @ g[2] @ g[3]
    # Hermitian generators give prod^2 = +I, so the phase i^(-d/2) = -1 is
    # needed; the bare factor i would give a square of -I.
    g5 = -prod
    assert abs(np.trace(g5)) < 1e-14
    np.testing.assert_allclose(g5 @ g5, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(g5, g[4], atol=1e-14)
    np.testing.assert_allclose((1j * prod) @ (1j * prod), -np.eye(4), atol=1e-14)


def test_transpose_parity_labels():
    gs = build_gamma_tower(6)
    for i, (g, label) in enumerate(zip(gs.gammas, gs.parity)):
        expected = "symmetric" if i % 2 == 0 else "antisymmetric"
        assert label == expected
        np.testing.assert_allclose(g.T, (-1) ** i * g)


@pytest.mark.parametrize("d", [0, 3, -2, 14])
def test_tower_rejects_bad_d(d):
    with pytest.raises(ValueError):
        build_gamma_tower(d)


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_max_anticommuting_set(N):
    g = max_anticommuting_set(N)
    n = int(np.log2(N))
    assert g.shape == (2 * n + 1, N, N)
    for i, j in itertools.combinations_with_replacement(range(len(g)), 2):
        target = 2 * np.eye(N) if i == j else 0
        assert np.abs(g[i] @ g[j] + g[j] @ g[i] - target).max() < 1e-12


def test_weyl_listing():
    g = max_anticommuting_set(4, "weyl")
    sx, sy, sz = PAULI[1:]
    expected = [
        np.kron(sx, np.eye(2)),
        np.kron(sy, sx),
        np.kron(sy, sy),
        np.kron(sy, sz),
        -np.kron(sz, np.eye(2)),
    ]
    np.testing.assert_allclose(g, expected)


def test_weyl_needs_n4():
    with pytest.raises(ValueError):
        max_anticommuting_set(8, "weyl")


def test_pauli_decompose_roundtrip():
    for label in [(1,), (2, 3), (0, 1, 2)]:
        sign, lab = pauli_decompose(-pauli_string(label))
        assert sign == -1 and lab == label


def test_su2_tensors():
    b = build_su_basis(2)
    assert not b.d
    assert b.f[(0, 1, 2)] == pytest.approx(1.0)


@pytest.mark.parametrize("N,ordering", [(2, "pauli"), (4, "pauli"), (4, "weyl"), (8, "pauli")])
def test_structure_constants_match_trace_formulas(N, ordering):
    b = build_su_basis(N, ordering)
    lam = b.lambdas
    np.testing.assert_allclose(np.einsum("iab,jba->ij", lam, lam), 2 * np.eye(b.size), atol=1e-12)
    f, d = b.tensor("f"), b.tensor("d")
    for i, j in itertools.product(range(b.size), repeat=2):
        comm = lam[i] @ lam[j] - lam[j] @ lam[i]
        anti = lam[i] @ lam[j] + lam[j] @ lam[i]
        f_ref = np.einsum("kab,ba->k", lam, comm) / 4j
        d_ref = np.einsum("kab,ba->k", lam, anti) / 4
        np.testing.assert_allclose(f[i, j], f_ref.real, atol=1e-12)
        np.testing.assert_allclose(d[i, j], d_ref.real, atol=1e-12)


def test_su4_reconstruction_all_pairs():
    b = build_su_basis(4)
    lam = b.lambdas
    coef = 1j * b.tensor("f") + b.tensor("d")
    worst = 0.0
    for i, j in itertools.product(range(15), repeat=2):
        rebuilt = (2 / 4) * (i == j) * np.eye(4) + np.tensordot(coef[i, j], lam, axes=1)
        worst = max(worst, np.abs(lam[i] @ lam[j] - rebuilt).max())
    assert worst <= 1e-12


def test_coefficients_expand_matrix(rng):
    b = build_su_basis(4)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = h + h.conj().T
    c = b.coefficients(h)
    rebuilt = np.trace(h) / 4 * np.eye(4) + np.tensordot(c, b.lambdas, axes=1)
    np.testing.assert_allclose(rebuilt, h, atol=1e-12)


def test_star_product_properties(rng):
    b = build_su_basis(4)
    a, c = rng.standard_normal(15), rng.standard_normal(15)
    np.testing.assert_allclose(star_product(a, c, b), star_product(c, a, b), atol=1e-14)
    assert not np.any(star_product(np.zeros(15), c, b))


def test_star_product_fixes_pure_effects(rng):
    from gbss.measurement import coherence_from_effect

    b = build_su_basis(4)
    for _ in range(5):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        e = coherence_from_effect(np.outer(v, v.conj()), b)
        np.testing.assert_allclose(star_product(e, e, b), e, atol=1e-10)


def test_star_product_undefined_for_qubit():
    with pytest.raises(StarProductUndefined):
        star_product(np.ones(3), np.ones(3), build_su_basis(2))


def test_local_frame_projection():
    frame = local_frame(4, "weyl")
    # The Weyl gammas are the first five basis elements.
    np.testing.assert_allclose(frame.gamma_projection, np.eye(5, 15), atol=1e-12)
    assert frame.n == 2
