"""Dirac gamma matrices, Pauli-string SU(N) bases and their structure tensors.

All matrices are dense ``complex128``.  Indices in docstrings are 1-based to
match the usual physics notation; arrays are 0-based.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

MAX_GAMMA_D = 12
MAX_SU_N = 16

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# _PAULI_MUL[a, b] = (phase, c) with sigma_a sigma_b = phase * sigma_c
_PAULI_PHASE = np.ones((4, 4), dtype=complex)
_PAULI_PROD = np.zeros((4, 4), dtype=int)
for _a, _b in itertools.product(range(4), repeat=2):
    _prod = PAULI[_a] @ PAULI[_b]
    for _c in range(4):
        _ph = np.trace(PAULI[_c] @ _prod) / 2
        if abs(_ph) > 0.5:
            _PAULI_PHASE[_a, _b] = _ph
            _PAULI_PROD[_a, _b] = _c


def log2_exact(N: int) -> int:
    """Return ``n`` with ``N == 2**n``; raise ``ValueError`` otherwise."""
    if not isinstance(N, (int, np.integer)) or N < 2 or (N & (N - 1)):
        raise ValueError(f"dimension must be a power of two >= 2, got {N!r}")
    return int(N).bit_length() - 1


def pauli_string(label) -> np.ndarray:
    """Dense matrix of the tensor product ``sigma_{a1} x ... x sigma_{an}``."""
    out = np.ones((1, 1), dtype=complex)
    for a in label:
        out = np.kron(out, PAULI[a])
    return out


def pauli_product(la, lb) -> tuple[complex, tuple[int, ...]]:
    """Multiply two Pauli strings: returns ``(phase, label)``."""
    phase = 1.0 + 0j
    lc = []
    for a, b in zip(la, lb):
        phase *= _PAULI_PHASE[a, b]
        lc.append(int(_PAULI_PROD[a, b]))
    return phase, tuple(lc)


def symplectic(label) -> int:
    """Encode a Pauli string as a 2n-bit integer (x bits, then z bits)."""
    x = z = 0
    for a in label:
        x = (x << 1) | (a in (1, 2))
        z = (z << 1) | (a in (2, 3))
    return (x << len(label)) | z


def pauli_commute(la, lb) -> bool:
    n = len(la)
    mask = (1 << n) - 1
    sa, sb = symplectic(la), symplectic(lb)
    xa, za, xb, zb = sa >> n, sa & mask, sb >> n, sb & mask
    return bin((xa & zb) ^ (za & xb)).count("1") % 2 == 0


def pauli_decompose(mat: np.ndarray, tol: float = 1e-10) -> tuple[float, tuple[int, ...]]:
    """Identify ``mat`` as ``sign * P`` for a single Pauli string ``P``.

    Raises ``ValueError`` when ``mat`` is not a real multiple of one string.
    """
    n = log2_exact(mat.shape[0])
    N = mat.shape[0]
    for label in itertools.product(range(4), repeat=n):
        c = np.trace(pauli_string(label) @ mat) / N
        if abs(abs(c) - 1) < tol:
            if abs(c.imag) > tol:
                break
            return float(np.sign(c.real)), label
    raise ValueError("matrix is not a signed Pauli string")


# ---------------------------------------------------------------------------
# Gamma matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GammaSet:
    """Euclidean Dirac matrices ``gamma_1..gamma_d`` plus ``gamma_s``.

    Attributes
    ----------
    d : int
        Number of generating matrices (even).
    dim : int
        Matrix size, ``2**(d/2)``.
    gammas : ndarray, shape (d+1, dim, dim)
        ``gammas[d]`` is ``gamma_s = gamma_{d+1}``.
    parity : tuple of str
        ``"symmetric"`` or ``"antisymmetric"`` for each matrix.
    """

    d: int
    dim: int
    gammas: np.ndarray
    parity: tuple[str, ...]

    @property
    def gamma_s(self) -> np.ndarray:
        return self.gammas[self.d]

    def residuals(self) -> dict[str, float]:
        """Largest entrywise violation of each defining identity."""
        g = self.gammas
        eye = np.eye(self.dim)
        anti = 0.0
        for i, j in itertools.combinations_with_replacement(range(self.d + 1), 2):
            target = 2 * eye if i == j else 0
            anti = max(anti, np.abs(g[i] @ g[j] + g[j] @ g[i] - target).max())
        herm = max(np.abs(a - a.conj().T).max() for a in g)
        prod = functools.reduce(np.matmul, g[: self.d])
        gs = (1j) ** (-self.d // 2) * prod
        parity = max(
            np.abs(g[i].T - (-1) ** i * g[i]).max() for i in range(self.d + 1)
        )
        return {
            "anticommutation": float(anti),
            "hermiticity": float(herm),
            "gamma_s": float(np.abs(gs - self.gamma_s).max()),
            "gamma_s_square": float(np.abs(self.gamma_s @ self.gamma_s - eye).max()),
            "transpose_parity": float(parity),
        }


def build_gamma_tower(d: int, max_d: int = MAX_GAMMA_D) -> GammaSet:
    """Build ``gamma^(d)`` by the inductive step ``d -> d + 2``.

    Base case ``d = 2`` is ``(sigma_1, sigma_2, sigma_3)``.  Each step maps
    ``gamma_i -> sigma_1 x gamma_i`` for ``i <= d + 1`` and appends
    ``sigma_2 x I`` and ``gamma_s = sigma_3 x I``.
    """
    if not isinstance(d, (int, np.integer)) or d < 2 or d % 2:
        raise ValueError(f"d must be an even integer >= 2, got {d!r}")
    if d > max_d:
        raise ValueError(f"d={d} exceeds the cap max_d={max_d}")
    gammas = [PAULI[1], PAULI[2], PAULI[3]]
    for _ in range(d // 2 - 1):
        eye = np.eye(gammas[0].shape[0])
        gammas = [np.kron(PAULI[1], g) for g in gammas]
        gammas += [np.kron(PAULI[2], eye), np.kron(PAULI[3], eye)]
    gammas = np.array(gammas, dtype=complex)
    parity = tuple(
        "symmetric" if np.allclose(g.T, g) else "antisymmetric" for g in gammas
    )
    return GammaSet(d=int(d), dim=2 ** (d // 2), gammas=gammas, parity=parity)


# Hermitian form of the chiral (Weyl) set for N = 4.  The i factors of the
# Minkowski-style listing are dropped so every matrix squares to +I.
_WEYL_GAMMAS = ((1, (1, 0)), (1, (2, 1)), (1, (2, 2)), (1, (2, 3)), (-1, (3, 0)))
_WEYL_ORDER = _WEYL_GAMMAS + tuple(
    (1, lab)
    for lab in [
        (3, 1), (3, 2), (3, 3), (0, 3), (0, 2), (0, 1), (2, 0), (1, 1), (1, 2), (1, 3)
    ]
)

CONVENTIONS = ("tower", "weyl")


def max_anticommuting_set(N: int, convention: str = "tower") -> np.ndarray:
    """Return ``2n + 1`` pairwise anticommuting Hermitian involutions in dim ``N``.

    ``convention="tower"`` uses the inductive construction with
    ``gamma_{2n+1} = i^{-n} gamma_1 ... gamma_{2n}``.  ``convention="weyl"``
    (``N = 4`` only) returns ``sigma_x I, sigma_y sigma_x, sigma_y sigma_y,
    sigma_y sigma_z, -sigma_z I``.
    """
    n = log2_exact(N)
    if convention == "tower":
        return build_gamma_tower(2 * n).gammas
    if convention == "weyl":
        if N != 4:
            raise ValueError("the Weyl convention is only defined for N = 4")
        return np.array([s * pauli_string(lab) for s, lab in _WEYL_GAMMAS])
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


# ---------------------------------------------------------------------------
# SU(N) basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SuBasis:
    """Orthonormal Pauli-string generators of SU(N), ``Tr(l_i l_j) = 2 delta_ij``.

    ``f`` and ``d`` are sparse maps ``(i, j, k) -> value`` (0-based) with
    ``l_i l_j = (2/N) delta_ij I + sum_k (i f_ijk + d_ijk) l_k``.
    """

    N: int
    labels: tuple[tuple[int, ...], ...]
    signs: np.ndarray
    lambdas: np.ndarray
    f: dict = field(repr=False)
    d: dict = field(repr=False)

    @property
    def size(self) -> int:
        return self.N * self.N - 1

    @functools.cached_property
    def _d_coo(self):
        if not self.d:
            return np.zeros((0, 3), dtype=int), np.zeros(0)
        idx = np.array(list(self.d.keys()), dtype=int)
        return idx, np.array(list(self.d.values()))

    def tensor(self, which: str) -> np.ndarray:
        """Dense ``(K, K, K)`` copy of ``f`` or ``d``; only sensible for small N."""
        src = {"f": self.f, "d": self.d}[which]
        out = np.zeros((self.size,) * 3)
        for key, val in src.items():
            out[key] = val
        return out

    def coefficients(self, mat: np.ndarray) -> np.ndarray:
        """Real expansion ``mat = Tr(mat)/N I + sum_i c_i l_i`` (Hermitian input)."""
        return np.einsum("kij,ji->k", self.lambdas, mat).real / 2

    def index_of(self, label) -> int:
        return self.labels.index(tuple(label))


def _structure_tensors(labels, signs, N):
    pos = {lab: i for i, lab in enumerate(labels)}
    scale = np.sqrt(2.0 / N)
    f, d = {}, {}
    for i, j in itertools.product(range(len(labels)), repeat=2):
        phase, lab = pauli_product(labels[i], labels[j])
        if lab not in pos:  # identity component
            continue
        k = pos[lab]
        c = signs[i] * signs[j] * signs[k] * scale * phase
        if abs(c.imag) > 1e-12:
            f[(i, j, k)] = float(c.imag)
        else:
            d[(i, j, k)] = float(c.real)
    return f, d


@functools.lru_cache(maxsize=None)
def build_su_basis(N: int, ordering: str = "pauli") -> SuBasis:
    """Pauli-string basis ``sqrt(2/N) sigma_a1 x ... x sigma_an`` of SU(N).

    ``ordering="pauli"`` is lexicographic in ``(a1, ..., an)`` with the
    identity string dropped.  ``ordering="weyl"`` (N = 4) puts the Weyl
    gamma set first, followed by the remaining strings in the order
    ``zx, zy, zz, iz, iy, ix, yi, xx, xy, xz``.

    The structure constants are read off the Pauli multiplication table;
    ``tests/test_clifford.py`` checks them against the trace formulas
    ``f = Tr([l_i, l_j] l_k) / 4i`` and ``d = Tr({l_i, l_j} l_k) / 4``.
    """
    n = log2_exact(N)
    if N > MAX_SU_N:
        raise ValueError(f"N={N} exceeds the cap {MAX_SU_N}")
    if ordering == "pauli":
        labels = tuple(itertools.product(range(4), repeat=n))[1:]
        signs = np.ones(len(labels))
    elif ordering == "weyl":
        if N != 4:
            raise ValueError("the Weyl ordering is only defined for N = 4")
        labels = tuple(lab for _, lab in _WEYL_ORDER)
        signs = np.array([s for s, _ in _WEYL_ORDER], dtype=float)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    lambdas = np.array(
        [s * np.sqrt(2.0 / N) * pauli_string(lab) for s, lab in zip(signs, labels)]
    )
    f, d = _structure_tensors(labels, signs, N)
    lambdas.setflags(write=False)
    signs.setflags(write=False)
    return SuBasis(N=N, labels=labels, signs=signs, lambdas=lambdas, f=f, d=d)


class StarProductUndefined(ValueError):
    """The star product carries a 1/(N-2) factor and does not exist for N = 2."""


def star_product(a: np.ndarray, b: np.ndarray, basis: SuBasis) -> np.ndarray:
    """``(a * b)_l = sqrt(N(N-1)/2) / (N-2) * d_ijl a_i b_j``."""
    N = basis.N
    if N == 2:
        raise StarProductUndefined(
            "star product undefined for N=2; a pure effect only needs e.e = 1"
        )
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    idx, val = basis._d_coo
    out = np.zeros(basis.size)
    np.add.at(out, idx[:, 2], val * a[idx[:, 0]] * b[idx[:, 1]])
    return np.sqrt(N * (N - 1) / 2) / (N - 2) * out


# ---------------------------------------------------------------------------
# Local frames: a gamma set together with a matching SU(N) basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalFrame:
    """Anticommuting set, SU(N) basis, and the projection between them.

    ``gamma_projection[j, i] = Tr(l_i g_j) / 2`` where ``g_j`` is the
    normalized generator ``sqrt(2/N) gamma_j``; it maps coherence vectors to
    their components along the anticommuting set.
    """

    N: int
    convention: str
    gammas: np.ndarray
    basis: SuBasis
    gamma_labels: tuple[tuple[int, ...], ...]
    gamma_signs: np.ndarray
    gamma_projection: np.ndarray

    @property
    def n(self) -> int:
        return log2_exact(self.N)


@functools.lru_cache(maxsize=None)
def local_frame(N: int, convention: str = "tower") -> LocalFrame:
    gammas = max_anticommuting_set(N, convention)
    gammas.setflags(write=False)
    basis = build_su_basis(N, "weyl" if convention == "weyl" else "pauli")
    decomposed = [pauli_decompose(g) for g in gammas]
    proj = np.einsum("kab,jba->jk", basis.lambdas, np.sqrt(2.0 / N) * gammas).real / 2
    return LocalFrame(
        N=N,
        convention=convention,
        gammas=gammas,
        basis=basis,
        gamma_labels=tuple(lab for _, lab in decomposed),
        gamma_signs=np.array([s for s, _ in decomposed]),
        gamma_projection=proj,
    )
