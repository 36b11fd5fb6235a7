"""Generalized Bloch sphere states on 2^n x 2^m systems.

A state is ``(I + sum x_j g_j x I + I x sum y_j h_j + sum t_j g_j x h_j) / NM``
where ``g`` is a maximal anticommuting set on A and ``h_j = g_j x I_{M/N}``
is its embedding on B.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .clifford import local_frame

PHYSICAL_TOL = 1e-12
B_SIDES = ("embedded", "tower")


@dataclass(frozen=True, eq=False)
class GbssSpec:
    """Coefficients of a diagonal-T GBSS.

    ``x`` and ``y`` default to zero.  Vectors have length ``2n + 1``.
    """

    n: int
    m: int
    t: np.ndarray
    x: np.ndarray = None
    y: np.ndarray = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < self.n:
            raise ValueError(f"need m >= n (N <= M), got n={self.n}, m={self.m}")
        k = 2 * self.n + 1
        for name in ("t", "x", "y"):
            val = getattr(self, name)
            arr = np.zeros(k) if val is None else np.array(val, dtype=float).ravel()
            if arr.shape != (k,):
                raise ValueError(f"{name} must have length 2n+1 = {k}, got {arr.size}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> int:
        return 2**self.n

    @property
    def M(self) -> int:
        return 2**self.m

    @property
    def dims(self) -> tuple[int, int]:
        return self.N, self.M

    @property
    def has_local_terms(self) -> bool:
        return bool(np.any(self.x) or np.any(self.y))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "t": self.t.tolist(),
            "x": self.x.tolist(),
            "y": self.y.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbssSpec":
        unknown = set(data) - {"n", "m", "t", "x", "y"}
        if unknown:
            raise ValueError(f"unknown state fields: {sorted(unknown)}")
        return cls(int(data["n"]), int(data["m"]), data["t"], data.get("x"), data.get("y"))

    @classmethod
    def from_json(cls, text: str) -> "GbssSpec":
        """Parse an inline JSON descriptor or the path of a JSON file."""
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    data: np.ndarray
    dims: tuple[int, int]
    physical: bool | None = field(default=None)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def side_operators(spec: GbssSpec, convention: str = "tower", b_side: str = "embedded"):
    """Return the gamma sets ``(g_A, g_B)`` used to realize ``spec``.

    ``b_side="embedded"`` uses ``g_j x I_{M/N}`` on B, for which the
    closed-form spectrum holds for every ``M``.  ``b_side="tower"`` takes the
    first ``2n + 1`` matrices of B's own maximal set instead; for ``M > N``
    the spectrum then also contains the sign-flipped eigenvalues (see
    ``tests/test_state.py``).
    """
    N, M = spec.dims
    ga = local_frame(N, convention).gammas
    if b_side == "embedded":
        gb = np.array([np.kron(g, np.eye(M // N)) for g in ga])
    elif b_side == "tower":
        if M == N:
            gb = ga
        elif convention != "tower":
            raise ValueError("b_side='tower' requires the tower convention")
        else:
            gb = local_frame(M, "tower").gammas[: 2 * spec.n + 1]
    else:
        raise ValueError(f"unknown b_side {b_side!r}; expected one of {B_SIDES}")
    return ga, gb


def realize(spec: GbssSpec, convention: str = "tower", b_side: str = "embedded") -> DensityMatrix:
    """Dense density matrix of ``spec``; ``physical`` records positivity."""
    N, M = spec.dims
    ga, gb = side_operators(spec, convention, b_side)
    rho = np.eye(N * M, dtype=complex)
    eye_a, eye_b = np.eye(N), np.eye(M)
    for j in range(2 * spec.n + 1):
        if spec.t[j]:
            rho += spec.t[j] * np.kron(ga[j], gb[j])
        if spec.x[j]:
            rho += spec.x[j] * np.kron(ga[j], eye_b)
        if spec.y[j]:
            rho += spec.y[j] * np.kron(eye_a, gb[j])
    rho /= N * M
    physical = bool(np.linalg.eigvalsh(rho).min() >= -1e-10)
    return DensityMatrix(rho, (N, M), physical)


def sign_patterns(n: int) -> np.ndarray:
    """Rows ``((-1)^i1, ..., (-1)^i2n, (-1)^n (-1)^(i1+...+i2n))``."""
    bits = np.array(list(itertools.product((0, 1), repeat=2 * n)), dtype=int)
    head = (-1) ** bits
    last = (-1) ** (n + bits.sum(axis=1))
    return np.column_stack([head, last]).astype(float)


def closed_form_spectrum(spec: GbssSpec, flip_last: bool = False) -> tuple[np.ndarray, int]:
    """The ``N**2`` eigenvalue formulas and their common multiplicity ``M/N``.

    ``flip_last`` negates ``t_{2n+1}``, which gives the spectrum of the
    partial transpose.
    """
    if spec.has_local_terms:
        raise ValueError("the closed-form spectrum requires x = y = 0")
    t = spec.t.copy()
    if flip_last:
        t[-1] = -t[-1]
    values = (1 + sign_patterns(spec.n) @ t) / (spec.N * spec.M)
    return values, spec.M // spec.N


def full_spectrum(spec: GbssSpec, flip_last: bool = False) -> np.ndarray:
    """Sorted eigenvalue multiset of size ``NM`` from the closed form."""
    values, mult = closed_form_spectrum(spec, flip_last)
    return np.sort(np.repeat(values, mult))


def is_physical(spec: GbssSpec, tol: float = PHYSICAL_TOL) -> tuple[bool, np.ndarray]:
    """Positivity test with the facet margins (eigenvalue formulas).

    States with local terms fall back to the numerical spectrum.
    """
    if spec.has_local_terms:
        margins = np.linalg.eigvalsh(realize(spec).data)
    else:
        margins, _ = closed_form_spectrum(spec)
    return bool(margins.min() >= -tol), margins


def partial_transpose(rho, side: str = "B", dims: tuple[int, int] | None = None) -> DensityMatrix:
    """Transpose the chosen tensor factor of a bipartite operator."""
    data = np.asarray(rho)
    if dims is None:
        if not isinstance(rho, DensityMatrix):
            raise ValueError("dims are required for a bare array")
        dims = rho.dims
    N, M = dims
    if data.shape != (N * M, N * M):
        raise ValueError(f"matrix of shape {data.shape} does not match dims {dims}")
    r4 = data.reshape(N, M, N, M)
    if side == "A":
        out = r4.transpose(2, 1, 0, 3)
    elif side == "B":
        out = r4.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return DensityMatrix(out.reshape(N * M, N * M).copy(), (N, M))


def partial_trace(rho, dims: tuple[int, int], keep: str) -> np.ndarray:
    N, M = dims
    r4 = np.asarray(rho).reshape(N, M, N, M)
    if keep == "A":
        return np.einsum("ambm->ab", r4)
    if keep == "B":
        return np.einsum("aman->mn", r4)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def random_physical_spec(n: int, m: int, rng: np.random.Generator, max_tries: int = 100_000) -> GbssSpec:
    """Uniform draw from the physical polytope by rejection from the cube."""
    signs = sign_patterns(n)
    for _ in range(max_tries):
        t = rng.uniform(-1, 1, 2 * n + 1)
        if (1 + signs @ t).min() >= 0:
            return GbssSpec(n, m, t)
    raise RuntimeError("rejection sampling failed to find a physical state")
