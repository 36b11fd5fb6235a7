"""Batched inner loops of the measurement oracles.

Each kernel has a pure-numpy implementation and, when numba is importable, an
``@njit`` twin.  ``GBSS_DISABLE_NUMBA=1`` in the environment forces the numpy
path; the choice is made once at import time and exposed as ``BACKEND``.
"""
from __future__ import annotations

import os

import numpy as np

CLAMP = 1e-12
_LN2 = np.log(2.0)

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is optional
    _nb = None

_DISABLED = os.environ.get("GBSS_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")
HAVE_NUMBA = _nb is not None
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _entropy_np(p, kind, q):
    p = np.where(p > CLAMP, p, 0.0)
    safe = np.where(p > 0, p, 1.0)
    if kind == 0:
        return -(p * np.log2(safe)).sum(axis=-1)
    power = np.where(p > 0, safe**q, 0.0).sum(axis=-1)
    if kind == 1:
        return np.log2(power) / (1 - q)
    return (power - 1) / ((1 - q) * _LN2)


def conditional_entropy_numpy(rho4, bases, kind, q):
    """``sum_k p_k S(rho_B|k)`` for each basis in ``bases`` (shape (B, N, N)).

    ``rho4`` is the bipartite state reshaped to ``(N, M, N, M)``; column ``k``
    of each basis is the measured vector.
    """
    sub = np.einsum("bak,amcn,bck->bkmn", bases.conj(), rho4, bases, optimize=True)
    ev = np.linalg.eigvalsh(sub)
    p = ev.sum(axis=-1)
    safe = np.where(p > CLAMP, p, 1.0)
    s = _entropy_np(ev / safe[..., None], kind, q)
    return np.where(p > CLAMP, p * s, 0.0).sum(axis=-1)


def max_term_numpy(C, X, bases):
    """``Tr(A C C^t A^t)`` with ``a_ki = <k|X_i|k>`` for each basis."""
    A = np.einsum("bak,iac,bck->bki", bases.conj(), X, bases, optimize=True).real
    AC = A @ C
    return (AC * AC).sum(axis=(1, 2))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @_nb.njit(cache=True)
    def _entropy_nb(ev, kind, q):
        if kind == 0:
            s = 0.0
            for v in ev:
                if v > CLAMP:
                    s -= v * np.log2(v)
            return s
        power = 0.0
        for v in ev:
            if v > CLAMP:
                power += v**q
        if kind == 1:
            return np.log2(power) / (1.0 - q)
        return (power - 1.0) / ((1.0 - q) * _LN2)

    @_nb.njit(cache=True)
    def _hermitian_eigvals(a, out):
        """Cyclic Jacobi on a small Hermitian matrix; ``a`` is overwritten.

        Each rotation first removes the phase of ``a[p, q]`` and then applies
        a real Givens rotation.  Cheaper than a LAPACK call at these sizes.
        """
        M = a.shape[0]
        scale = 0.0
        for i in range(M):
            for j in range(M):
                scale += a[i, j].real ** 2 + a[i, j].imag ** 2
        for _ in range(60):
            off = 0.0
            for p in range(M - 1):
                for q in range(p + 1, M):
                    off += a[p, q].real ** 2 + a[p, q].imag ** 2
            if off <= 1e-32 * scale or off == 0.0:
                break
            for p in range(M - 1):
                for q in range(p + 1, M):
                    r = abs(a[p, q])
                    if r <= 1e-300:
                        continue
                    ph = a[p, q] / r
                    for k in range(M):
                        a[q, k] *= ph
                    cph = np.conj(ph)
                    for k in range(M):
                        a[k, q] *= cph
                    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    if tau >= 0.0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(M):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(M):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * aqk
                        a[q, k] = s * apk + c * aqk
        for i in range(M):
            out[i] = a[i, i].real

    @_nb.njit(cache=True)
    def conditional_entropy_numba(rho4, bases, kind, q):
        B, N, _ = bases.shape
        M = rho4.shape[1]
        out = np.zeros(B)
        sub = np.empty((M, M), dtype=np.complex128)
        ev = np.empty(M)
        for b in range(B):
            total = 0.0
            for k in range(N):
                sub[:, :] = 0.0
                for a in range(N):
                    ua = np.conj(bases[b, a, k])
                    for c in range(N):
                        w = ua * bases[b, c, k]
                        for m in range(M):
                            for n in range(m, M):
                                sub[m, n] += w * rho4[a, m, c, n]
                for m in range(M):
                    sub[m, m] = sub[m, m].real
                    for n in range(m + 1, M):
                        sub[n, m] = np.conj(sub[m, n])
                _hermitian_eigvals(sub, ev)
                p = ev.sum()
                if p > CLAMP:
                    total += p * _entropy_nb(ev / p, kind, q)
            out[b] = total
        return out

    @_nb.njit(cache=True)
    def max_term_numba(C, X, bases):
        B, N, _ = bases.shape
        K = X.shape[0]
        L = C.shape[1]
        out = np.zeros(B)
        row = np.empty(K)
        for b in range(B):
            total = 0.0
            for k in range(N):
                for i in range(K):
                    acc = 0.0j
                    for a in range(N):
                        ua = np.conj(bases[b, a, k])
                        for c in range(N):
                            acc += ua * X[i, a, c] * bases[b, c, k]
                    row[i] = acc.real
                for j in range(L):
                    s = 0.0
                    for i in range(K):
                        s += row[i] * C[i, j]
                    total += s * s
            out[b] = total
        return out

else:  # pragma: no cover
    conditional_entropy_numba = None
    max_term_numba = None


def conditional_entropy(rho4, bases, kind, q, backend=None):
    """Dispatch to the selected backend; inputs are made contiguous complex."""
    rho4 = np.ascontiguousarray(rho4, dtype=np.complex128)
    bases = np.ascontiguousarray(bases, dtype=np.complex128)
    if (backend or BACKEND) == "numba":
        return conditional_entropy_numba(rho4, bases, int(kind), float(q))
    return conditional_entropy_numpy(rho4, bases, int(kind), float(q))


def max_term(C, X, bases, backend=None):
    C = np.ascontiguousarray(C, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.complex128)
    bases = np.ascontiguousarray(bases, dtype=np.complex128)
    if (backend or BACKEND) == "numba":
        return max_term_numba(C, X, bases)
    return max_term_numpy(C, X, bases)
