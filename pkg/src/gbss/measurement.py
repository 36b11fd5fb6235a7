"""POVMs in the coherence-vector picture and the optimal GBSS measurement."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .clifford import (
    LocalFrame,
    StarProductUndefined,
    SuBasis,
    local_frame,
    pauli_commute,
    pauli_string,
    star_product,
    symplectic,
)
from .state import GbssSpec, side_operators


def _scale(N: int) -> float:
    return np.sqrt(N * (N - 1) / 2)


def effect_from_coherence(e, basis: SuBasis) -> np.ndarray:
    """``E = (I + sqrt(N(N-1)/2) e.lambda) / N``."""
    N = basis.N
    e = np.asarray(e, dtype=float)
    if e.shape != (basis.size,):
        raise ValueError(f"coherence vector must have length {basis.size}")
    return (np.eye(N) + _scale(N) * np.tensordot(e, basis.lambdas, axes=1)) / N


def coherence_from_effect(E: np.ndarray, basis: SuBasis) -> np.ndarray:
    """Inverse of :func:`effect_from_coherence` for trace-one effects."""
    return basis.N * basis.coefficients(E) / _scale(basis.N)


def is_pure_effect(e, basis: SuBasis, tol: float = 1e-10) -> bool:
    """``e.e = 1`` and, for ``N > 2``, ``e * e = e``."""
    e = np.asarray(e, dtype=float)
    if abs(e @ e - 1) > tol:
        return False
    try:
        return bool(np.abs(star_product(e, e, basis) - e).max() <= tol)
    except StarProductUndefined:
        return True


@dataclass(frozen=True, eq=False)
class Povm:
    """Effects as coherence vectors (rows of ``vectors``) and dense matrices."""

    vectors: np.ndarray
    matrices: np.ndarray
    basis: SuBasis
    degenerate: bool = False

    @property
    def count(self) -> int:
        return len(self.matrices)

    def completeness_error(self) -> float:
        N = self.basis.N
        return float(np.abs(self.matrices.sum(axis=0) - np.eye(N)).max())

    def min_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(E).min() for E in self.matrices))

    def validate(self, tol: float = 1e-10) -> None:
        if self.min_eigenvalue() < -tol:
            raise ValueError("POVM has a non-positive effect")
        if self.completeness_error() > tol:
            raise ValueError("POVM effects do not sum to the identity")

    def to_dict(self) -> dict:
        return {
            "N": self.basis.N,
            "degenerate": self.degenerate,
            "coherence_vectors": self.vectors.tolist(),
            "matrices": [[[[z.real, z.imag] for z in row] for row in E] for E in self.matrices],
        }


def gamma_components(e, frame: LocalFrame) -> np.ndarray:
    """Components of a coherence vector along the anticommuting set."""
    e = np.asarray(e, dtype=float)
    if e.shape[-1] == 2 * frame.n + 1:
        return e
    return e @ frame.gamma_projection.T


def mu(spec: GbssSpec, e, frame: LocalFrame | None = None) -> float:
    """``mu = sqrt(2(N-1)/N sum_j (t_j e_j)^2)`` over the anticommuting coordinates.

    ``e`` may be a full coherence vector (projected through ``frame``) or
    already restricted to the ``2n + 1`` coordinates.  For a pure effect the
    post-measurement state on B has Bloch length ``sqrt(N/2) * mu``.
    """
    frame = frame or local_frame(spec.N)
    eg = gamma_components(e, frame)
    N = spec.N
    return float(np.sqrt(2 * (N - 1) / N * np.sum((spec.t * eg) ** 2)))


def post_measurement_state(
    spec: GbssSpec, effect, convention: str = "tower"
) -> tuple[float, np.ndarray | None]:
    """Outcome probability and conditional state of B after measuring A.

    ``effect`` is a dense ``N x N`` matrix or a coherence vector.  Uses
    ``Tr_A((E x I) rho) = (Tr(E)(I + y.h) + sum_j <g_j>_E (x_j I + t_j h_j)) / NM``.
    Returns ``(0.0, None)`` for a zero-probability outcome.
    """
    frame = local_frame(spec.N, convention)
    E = np.asarray(effect)
    if E.ndim == 1:
        E = effect_from_coherence(E, frame.basis)
    N, M = spec.dims
    _, gb = side_operators(spec, convention)
    expect = np.einsum("jab,ba->j", frame.gammas, E).real
    trE = np.trace(E).real
    out = trE * np.eye(M) + np.tensordot(trE * spec.y + spec.t * expect, gb, axes=1)
    out = out + np.sum(spec.x * expect) * np.eye(M)
    out = out / (N * M)
    p = float(np.trace(out).real)
    if p <= 1e-14:
        return 0.0, None
    return p, out / p


def _completion(lead_label, n: int) -> list[tuple[int, ...]]:
    """Greedy maximal commuting set of Pauli strings containing ``lead_label``.

    Candidates are scanned with Z-type strings (only I and Z) first, then the
    rest, each group in lexicographic order.
    """
    labels = list(itertools.product(range(4), repeat=n))[1:]
    ztype = [lab for lab in labels if set(lab) <= {0, 3}]
    other = [lab for lab in labels if not set(lab) <= {0, 3}]
    chosen = [tuple(lead_label)]
    span = {0, symplectic(lead_label)}
    for lab in ztype + other:
        if len(chosen) == n:
            break
        v = symplectic(lab)
        if v in span or not all(pauli_commute(lab, c) for c in chosen):
            continue
        chosen.append(lab)
        span |= {s ^ v for s in span}
    return chosen


def optimal_povm(spec: GbssSpec, convention: str = "tower") -> Povm:
    """Rank-one projective measurement attaining the largest ``mu``.

    The effects are the joint eigenprojectors of ``gamma_l``
    (``l = argmax |t_j|``, lowest index on ties) and ``n - 1`` further
    commuting Pauli strings.  Every effect has coherence entries in
    ``{0, +-1/sqrt(N-1)}``.  ``degenerate`` is set when ``t = 0``.
    """
    frame = local_frame(spec.N, convention)
    n, N = spec.n, spec.N
    l = int(np.argmax(np.abs(spec.t)))
    generators = _completion(frame.gamma_labels[l], n)
    mats = [frame.gammas[l]] + [pauli_string(lab) for lab in generators[1:]]
    effects = []
    for signs in itertools.product((1, -1), repeat=n):
        E = np.eye(N, dtype=complex)
        for s, G in zip(signs, mats):
            E = E @ (np.eye(N) + s * G) / 2
        effects.append(E)
    effects = np.array(effects)
    vectors = np.array([coherence_from_effect(E, frame.basis) for E in effects])
    return Povm(vectors, effects, frame.basis, degenerate=not np.any(spec.t))


def mu_max(spec: GbssSpec) -> float:
    """``sqrt(2/N) * max |t_j|``."""
    return float(np.sqrt(2 / spec.N) * np.abs(spec.t).max())
