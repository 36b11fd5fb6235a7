"""Search over orthonormal measurement bases of C^N.

Bases are unitary matrices whose columns are the measured vectors.  The
search draws Haar-random bases, keeps the best few, and polishes each with
coordinate descent over Givens-type rotations ``U -> U R_pq(theta)``.  Column
phases do not change the projectors, so only the ``N(N-1)`` off-diagonal
rotation generators are searched.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import unitary_group

DEFAULT_SEED = 0xD15C0
SEED_ENV = "GBSS_SEED"


def default_seed() -> int:
    val = os.environ.get(SEED_ENV)
    return int(val, 0) if val else DEFAULT_SEED


@dataclass
class SearchResult:
    value: float
    basis: np.ndarray
    evaluations: int


def haar_bases(N: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if N == 1:
        return np.ones((count, 1, 1), dtype=complex)
    return unitary_group.rvs(N, size=count, random_state=rng).reshape(count, N, N)


def _rotations(N: int, step: float) -> np.ndarray:
    """All ``+-step`` elementary rotations, shape ``(4 * N(N-1)/2, N, N)``."""
    c, s = np.cos(step), np.sin(step)
    out = []
    for p in range(N):
        for q in range(p + 1, N):
            for sgn in (1.0, -1.0):
                real = np.eye(N, dtype=complex)
                real[p, p] = real[q, q] = c
                real[p, q], real[q, p] = -sgn * s, sgn * s
                cplx = np.eye(N, dtype=complex)
                cplx[p, p] = cplx[q, q] = c
                cplx[p, q] = cplx[q, p] = 1j * sgn * s
                out += [real, cplx]
    return np.array(out)


def coordinate_descent(
    objective: Callable[[np.ndarray], np.ndarray],
    basis: np.ndarray,
    step: float = 0.25,
    tol: float = 1e-6,
    max_iter: int = 4000,
) -> SearchResult:
    """Maximize ``objective`` (batched over bases) starting from ``basis``.

    Each iteration evaluates every ``+-step`` rotation and moves to the best
    one if it improves, doubling the step; otherwise the step is halved.
    Stops once the step falls below ``tol``.
    """
    U = np.array(basis, dtype=complex)
    N = U.shape[0]
    best = float(objective(U[None])[0])
    evals = 1
    if N == 1:
        return SearchResult(best, U, evals)
    rots = _rotations(N, step)
    for _ in range(max_iter):
        if step < tol:
            break
        trials = U[None] @ rots
        vals = objective(trials)
        evals += len(trials)
        i = int(np.argmax(vals))
        if vals[i] > best + 1e-15 * max(1.0, abs(best)):
            best = float(vals[i])
            U = trials[i]
            if step < 0.5:
                step *= 2.0
                rots = _rotations(N, step)
        else:
            step *= 0.5
            rots = _rotations(N, step)
    # Re-orthonormalize to strip accumulated rounding.
    q, r = np.linalg.qr(U)
    U = q * (np.diag(r) / np.abs(np.diag(r)))
    return SearchResult(float(objective(U[None])[0]), U, evals + 1)


def maximize_over_bases(
    objective: Callable[[np.ndarray], np.ndarray],
    N: int,
    budget: int,
    seed: int | None = None,
    restarts: int = 3,
    refine: bool = True,
    tol: float = 1e-6,
    chunk: int = 1024,
) -> SearchResult:
    """Random-basis sampling followed by coordinate-descent refinement.

    The identity basis is always included among the samples, which makes the
    computational basis a candidate for degenerate problems.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    values, bases = [], []
    remaining = budget
    first = True
    while remaining > 0:
        count = min(chunk, remaining)
        batch = haar_bases(N, count, rng)
        if first:
            batch[0] = np.eye(N)
            first = False
        values.append(objective(batch))
        bases.append(batch)
        remaining -= count
    values = np.concatenate(values)
    bases = np.concatenate(bases)
    order = np.argsort(-values, kind="stable")
    best = SearchResult(float(values[order[0]]), bases[order[0]], budget)
    if not refine:
        return best
    evals = budget
    for idx in order[:restarts]:
        res = coordinate_descent(objective, bases[idx], tol=tol)
        evals += res.evaluations
        if res.value > best.value:
            best = res
    best.evaluations = evals
    return best
