"""Von Neumann, Renyi and Tsallis entropies, all reported in bits.

Tsallis entropy carries no logarithm; it is divided by ``ln 2`` so that its
``q -> 1`` limit is the von Neumann entropy in bits like the other two.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CLAMP = 1e-12
LN2 = np.log(2.0)

VON_NEUMANN, RENYI, TSALLIS = "vonNeumann", "renyi", "tsallis"
KIND_CODES = {VON_NEUMANN: 0, RENYI: 1, TSALLIS: 2}


@dataclass(frozen=True)
class EntropySpec:
    kind: str = VON_NEUMANN
    q: float = 1.0

    def __post_init__(self):
        if self.kind == VON_NEUMANN:
            object.__setattr__(self, "q", 1.0)
        elif self.kind == RENYI:
            if not 0.0 <= self.q <= 1.0:
                raise ValueError(f"Renyi entropy requires 0 <= q <= 1, got q={self.q}")
        elif self.kind == TSALLIS:
            if not self.q > 0.0:
                raise ValueError(f"Tsallis entropy requires q > 0, got q={self.q}")
        else:
            raise ValueError(f"unknown entropy kind {self.kind!r}")
        if self.kind != VON_NEUMANN and self.q == 1.0:
            object.__setattr__(self, "kind", VON_NEUMANN)

    @property
    def code(self) -> int:
        return KIND_CODES[self.kind]

    @classmethod
    def parse(cls, text: str) -> "EntropySpec":
        """Parse ``vn``, ``renyi:q`` or ``tsallis:q``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        if name in ("vn", "vonneumann", "von_neumann"):
            if arg:
                raise ValueError("von Neumann entropy takes no parameter")
            return cls()
        if name not in (RENYI, TSALLIS):
            raise ValueError(f"cannot parse entropy spec {text!r}")
        try:
            q = float(arg)
        except ValueError:
            raise ValueError(f"entropy {name!r} needs a numeric q, got {arg!r}") from None
        return cls(name, q)

    def __str__(self) -> str:
        return "vn" if self.kind == VON_NEUMANN else f"{self.kind}:{self.q:g}"


def spectral_entropy(p, spec: EntropySpec = EntropySpec()) -> np.ndarray:
    """Entropy of probability vectors along the last axis.

    Entries below ``CLAMP`` are treated as exact zeros.
    """
    p = np.asarray(p, dtype=float)
    p = np.where(p > CLAMP, p, 0.0)
    if spec.kind == VON_NEUMANN:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        return -terms.sum(axis=-1)
    q = spec.q
    power = np.where(p > 0, np.power(np.where(p > 0, p, 1.0), q), 0.0).sum(axis=-1)
    if spec.kind == RENYI:
        return np.log2(power) / (1 - q)
    return (power - 1) / ((1 - q) * LN2)


def entropy(rho, spec: EntropySpec = EntropySpec()) -> float:
    """Entropy of a density matrix (2-D input) or of a spectrum (1-D input)."""
    arr = np.asarray(rho)
    if arr.ndim == 2:
        arr = np.linalg.eigvalsh(arr)
    elif arr.ndim != 1:
        raise ValueError("expected a square matrix or a 1-D spectrum")
    return float(spectral_entropy(arr, spec))


def uniform_entropy(dim: int, spec: EntropySpec = EntropySpec()) -> float:
    """Entropy of ``I / dim``."""
    if spec.kind == VON_NEUMANN or spec.kind == RENYI:
        return float(np.log2(dim))
    return float((dim ** (1 - spec.q) - 1) / ((1 - spec.q) * LN2))
