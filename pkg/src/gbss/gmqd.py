"""Geometric measure of quantum discord (squared Hilbert-Schmidt distance).

The oracle uses the Luo-Fu form ``D = Tr(CC^t) - max_A Tr(A C C^t A^t)``
with ``C`` the expansion of the state in the product basis
``X_1 = I/sqrt(N), X_i = lambda_{i-1}/sqrt(2)`` (and likewise on B).

Two coefficient scales appear below.  GBSS coefficients ``t, x, y`` multiply
gamma matrices directly.  Block coefficients multiply normalized generators:
``x_i = (N/2) Tr(rho l_i x I)`` and ``T_ij = (NM/4) Tr(rho l_i x l_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .clifford import build_su_basis, local_frame
from .search import maximize_over_bases
from .state import GbssSpec, realize

DEFAULT_BUDGET = 5000


def product_basis(N: int) -> np.ndarray:
    """Orthonormal Hermitian basis ``(I/sqrt(N), l_1/sqrt(2), ...)`` of N x N."""
    lam = build_su_basis(N).lambdas
    return np.concatenate([np.eye(N)[None] / np.sqrt(N), lam / np.sqrt(2)]).astype(complex)


@dataclass(frozen=True, eq=False)
class CorrelationBlock:
    """Coefficient matrix ``C`` and the derived ``x, y, T, G`` (generator scale).

    ``eta`` holds the eigenvalues of ``G = x x^t + (2/M) T T^t`` in
    nondecreasing order, with eigenvectors as columns of ``f``.
    """

    dims: tuple[int, int]
    C: np.ndarray
    x: np.ndarray
    y: np.ndarray
    T: np.ndarray
    G: np.ndarray
    eta: np.ndarray
    f: np.ndarray

    @property
    def tr_cc(self) -> float:
        return float(np.sum(self.C * self.C))

    @property
    def eta_max(self) -> float:
        return float(self.eta[-1])


def correlation_block(rho, dims: tuple[int, int]) -> CorrelationBlock:
    N, M = dims
    rho = np.asarray(rho)
    if rho.shape != (N * M, N * M):
        raise ValueError(f"matrix of shape {rho.shape} does not match dims {dims}")
    XA, YB = product_basis(N), product_basis(M)
    r4 = rho.reshape(N, M, N, M)
    C = np.einsum("iba,jnm,ambn->ij", XA, YB, r4, optimize=True).real
    # c_{i1} = x_i sqrt(2)/(N sqrt(M)), c_{1j} = y_j sqrt(2)/(M sqrt(N)),
    # c_{ij} = 2 T_ij / (NM).
    x = C[1:, 0] * N * np.sqrt(M) / np.sqrt(2)
    y = C[0, 1:] * M * np.sqrt(N) / np.sqrt(2)
    T = C[1:, 1:] * N * M / 2
    G = np.outer(x, x) + 2 * T @ T.T / M
    eta, f = np.linalg.eigh(G)
    return CorrelationBlock(dims, C, x, y, T, G, eta, f)


def gmqd_from_block(block: CorrelationBlock) -> float:
    """``(2/(N^2 M)) [|x|^2 + (2/M)|T|^2 - eta_max]``.

    Exact for states whose local vectors and correlations live on one
    maximal anticommuting set; an upper bound on GMQD otherwise.
    """
    N, M = block.dims
    return float(
        2 / (N * N * M) * (block.x @ block.x + 2 / M * np.sum(block.T**2) - block.eta_max)
    )


def hassan_lower_bound(block: CorrelationBlock) -> float:
    """``(2/(N^2 M)) [|x|^2 + (2/M)|T|^2 - sum of the N-1 largest eta]``."""
    N, M = block.dims
    top = np.sum(block.eta[::-1][: N - 1])
    return float(2 / (N * N * M) * (block.x @ block.x + 2 / M * np.sum(block.T**2) - top))


def _gamma_g(spec: GbssSpec) -> np.ndarray:
    return np.outer(spec.x, spec.x) + np.diag(spec.t**2)


def gmqd_closed(spec: GbssSpec) -> float:
    """``(|x|^2 + |t|^2 - eta_max) / NM`` with ``eta_max`` the top eigenvalue of
    ``x x^t + diag(t)^2``.

    For ``x = 0`` this is ``(|t|^2 - t_max^2) / NM``; at ``N = M = 2`` it is
    ``(|t|^2 - t_max^2) / 4``.
    """
    eta = np.linalg.eigvalsh(_gamma_g(spec))[-1]
    return float((spec.x @ spec.x + spec.t @ spec.t - eta) / (spec.N * spec.M))


def max_term_closed(spec: GbssSpec) -> float:
    """``max_A Tr(A C C^t A^t) = (1 + |y|^2 + eta_max) / NM``."""
    eta = np.linalg.eigvalsh(_gamma_g(spec))[-1]
    return float((1 + spec.y @ spec.y + eta) / (spec.N * spec.M))


def tr_cc_closed(spec: GbssSpec) -> float:
    """Purity ``(1 + |x|^2 + |y|^2 + |t|^2) / NM``."""
    return float(
        (1 + spec.x @ spec.x + spec.y @ spec.y + spec.t @ spec.t) / (spec.N * spec.M)
    )


def gmqd_literal(spec: GbssSpec) -> float:
    """Generator-scale expression with ``eta_max / (N - 1)`` in place of ``eta_max``.

    Agrees with :func:`gmqd_closed` for ``N = 2`` only; reported as a
    diagnostic.
    """
    N, M = spec.dims
    x = np.sqrt(N / 2) * spec.x
    T = np.sqrt(N * M) / 2 * spec.t
    eta = np.linalg.eigvalsh(np.outer(x, x) + 2 * np.diag(T**2) / M)[-1]
    return float(2 / (N * N * M) * (x @ x + 2 / M * T @ T - eta / (N - 1)))


def isometry_rows(basis: np.ndarray) -> np.ndarray:
    """``a_ki = <k|X_i|k>`` for the columns ``|k>`` of ``basis``."""
    N = basis.shape[0]
    X = product_basis(N)
    return np.einsum("ak,iac,ck->ki", basis.conj(), X, basis).real


def hassan_max_term(block: CorrelationBlock, basis: np.ndarray) -> float:
    """``Tr(A C C^t A^t)`` through the coherence vectors ``e^k`` of the basis.

    ``(1/N){1/M + (2/M^2)|y|^2 + (2(N-1)/(N^2 M)) sum_k e^k G e^k}`` with
    ``e^k = sqrt(N/(N-1)) (a_k2, ..., a_kN^2)``.
    """
    N, M = block.dims
    A = isometry_rows(basis)
    e = np.sqrt(N / (N - 1)) * A[:, 1:]
    quad = np.einsum("ki,ij,kj->", e, block.G, e)
    return float(
        (1 / M + 2 / M**2 * block.y @ block.y + 2 * (N - 1) / (N * N * M) * quad) / N
    )


@dataclass
class GmqdOracleResult:
    value: float
    max_term: float
    basis: np.ndarray
    evaluations: int


def gmqd_oracle(
    rho,
    dims: tuple[int, int],
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    refine: bool = True,
    backend: str | None = None,
) -> GmqdOracleResult:
    """``Tr(CC^t) - max over sampled bases of Tr(A C C^t A^t)``."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    block = correlation_block(rho, dims)
    X = product_basis(dims[0])

    def objective(bases):
        return _kernels.max_term(block.C, X, bases, backend)

    res = maximize_over_bases(objective, dims[0], budget, seed=seed, refine=refine)
    return GmqdOracleResult(block.tr_cc - res.value, res.value, res.basis, res.evaluations)


@dataclass
class GmqdReport:
    trCC: float
    maxTerm_closed: float
    D_closed: float
    eta_max: float
    D_literal: float
    D_oracle: float | None = None
    maxTerm_oracle: float | None = None
    gap: float | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def evaluate_gmqd(
    spec: GbssSpec,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    convention: str = "tower",
    oracle: bool = True,
) -> GmqdReport:
    """Closed form (``eta_max`` in gamma scale) and, optionally, the oracle."""
    report = GmqdReport(
        trCC=tr_cc_closed(spec),
        maxTerm_closed=max_term_closed(spec),
        D_closed=gmqd_closed(spec),
        eta_max=float(np.linalg.eigvalsh(_gamma_g(spec))[-1]),
        D_literal=gmqd_literal(spec),
    )
    if oracle:
        res = gmqd_oracle(realize(spec, convention).data, spec.dims, budget, seed)
        report.D_oracle = res.value
        report.maxTerm_oracle = res.max_term
        report.gap = res.value - report.D_closed
    return report


def w1_concentration(basis: np.ndarray, convention: str = "tower") -> float:
    """Largest weight of a projector's coherence vector off the anticommuting set.

    Returns ``max_k (1 - |P e^k|^2 / |e^k|^2)`` where ``P`` projects onto the
    gamma coordinates; 0 means every basis projector lies in that subspace.
    """
    N = basis.shape[0]
    frame = local_frame(N, convention)
    out = 0.0
    for k in range(N):
        u = basis[:, k]
        e = frame.basis.coefficients(np.outer(u, u.conj()))
        eg = frame.gamma_projection @ e
        out = max(out, 1 - eg @ eg / (e @ e))
    return float(out)
