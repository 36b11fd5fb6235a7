"""Geometry of the correlation vector ``t`` (x = y = 0).

GMQD is ``(|t|^2 - t_l^2) / NM`` with ``|t_l|`` the largest entry, so a level
set ``D = const`` is the union of ``2n + 1`` cylinders
``sum_{i != l} t_i^2 = NM D`` clipped by the ordering ``|t_l| >= |t_i|``.
On each ordered piece the function is a convex quadratic, which lets the
maxima over polytopes be found exactly by vertex enumeration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from .search import default_seed
from .state import GbssSpec, closed_form_spectrum, sign_patterns

MARGIN_TOL = 1e-12


def transpose_flips_last(n: int) -> bool:
    """Whether the partial transpose acts on the spectrum as ``t_{2n+1} -> -t_{2n+1}``.

    Transposition negates the ``n`` gamma matrices of even index.  The
    eigenvalue formulas only see the product of the signs of ``t``, so an
    odd number of negations is equivalent to flipping the last entry and an
    even number leaves the spectrum unchanged.
    """
    return n % 2 == 1


def ppt_spectrum(spec: GbssSpec) -> np.ndarray:
    """The ``N^2`` distinct eigenvalues of the partial transpose."""
    values, _ = closed_form_spectrum(spec, flip_last=transpose_flips_last(spec.n))
    return values


@dataclass
class RegionReport:
    physical: bool
    physical_margins: np.ndarray
    ppt: bool
    ppt_margins: np.ndarray
    separable_l1: float
    separable: bool

    @property
    def ppt_entangled(self) -> bool:
        return self.physical and self.ppt and not self.separable

    def to_dict(self) -> dict:
        return {
            "physical": self.physical,
            "physical_margins": self.physical_margins.tolist(),
            "ppt": self.ppt,
            "ppt_margins": self.ppt_margins.tolist(),
            "separable_l1": self.separable_l1,
            "separable": self.separable,
            "ppt_entangled": self.ppt_entangled,
        }


def classify(spec: GbssSpec) -> RegionReport:
    """Positivity, PPT and the l1 separability test for a GBSS."""
    if spec.has_local_terms:
        raise ValueError("classify needs x = y = 0")
    phys, _ = closed_form_spectrum(spec)
    ppt = ppt_spectrum(spec)
    l1 = float(np.abs(spec.t).sum())
    # Margins are scaled to 1 + s.t so the tolerance is absolute in t.
    scale = spec.N * spec.M
    return RegionReport(
        physical=bool(phys.min() * scale >= -MARGIN_TOL),
        physical_margins=phys * scale,
        ppt=bool(ppt.min() * scale >= -MARGIN_TOL),
        ppt_margins=ppt * scale,
        separable_l1=l1,
        separable=l1 <= 1 + MARGIN_TOL,
    )


def gmqd_t(t, N: int, M: int) -> np.ndarray:
    """Closed-form GMQD for ``x = y = 0``, vectorized over leading axes."""
    t2 = np.asarray(t, dtype=float) ** 2
    return (t2.sum(axis=-1) - t2.max(axis=-1)) / (N * M)


# Polytopes are stored as ``A t <= b``.

def physical_polytope(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``1 + s.t >= 0`` for every sign pattern ``s``."""
    s = sign_patterns(n)
    return -s, np.ones(len(s))


def l1_ball(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = 2 * n + 1
    s = np.array(list(itertools.product((1.0, -1.0), repeat=k)))
    return s, np.ones(len(s))


def _ordered_piece(A, b, k: int, l: int, sigma: float):
    """Restrict ``A t <= b`` to ``|t_i| <= sigma t_l`` for all ``i``."""
    rows = []
    for i in range(k):
        if i == l:
            continue
        for sgn in (1.0, -1.0):
            r = np.zeros(k)
            r[i] = sgn
            r[l] = -sigma
            rows.append(r)
    r = np.zeros(k)
    r[l] = -sigma
    rows.append(r)
    A2 = np.vstack([A, rows])
    b2 = np.concatenate([b, np.zeros(len(rows))])
    return A2, b2


def _vertices(A, b) -> np.ndarray:
    """Vertices of a bounded full-dimensional polytope ``A t <= b``."""
    k = A.shape[1]
    norms = np.linalg.norm(A, axis=1)
    # Chebyshev centre gives a strictly interior point.
    res = linprog(
        np.r_[np.zeros(k), -1.0],
        A_ub=np.column_stack([A, norms]),
        b_ub=b,
        bounds=[(None, None)] * k + [(0, None)],
        method="highs",
    )
    if not res.success or res.x[-1] <= 1e-12:
        return np.empty((0, k))
    hs = HalfspaceIntersection(np.column_stack([A, -b]), res.x[:k])
    return hs.intersections


def maximize_on_polytope(A, b, N: int, M: int) -> tuple[float, np.ndarray]:
    """Exact maximum of the closed-form GMQD over ``A t <= b``.

    Each ordered piece is a polytope on which GMQD is a convex quadratic,
    hence maximized at one of its vertices.
    """
    k = A.shape[1]
    best, arg = -np.inf, None
    for l in range(k):
        for sigma in (1.0, -1.0):
            verts = _vertices(*_ordered_piece(A, b, k, l, sigma))
            if not len(verts):
                continue
            vals = gmqd_t(verts, N, M)
            i = int(np.argmax(vals))
            if vals[i] > best:
                best, arg = float(vals[i]), verts[i]
    return best, arg


def region_formula(n: int, m: int) -> float:
    """``(4/(N^2 M^2)) (2n + 1 - 1/(N - 1))``, evaluated at ``|t_i| = 1``."""
    N, M = 2**n, 2**m
    return 4 / (N * N * M * M) * (2 * n + 1 - 1 / (N - 1))


def separable_formula(n: int, m: int) -> float:
    """``(4/(N^2 M^2)) (1 - 1/((2n + 1)(N - 1)))``, at ``|t_i| = 1/sqrt(2n + 1)``."""
    N, M = 2**n, 2**m
    return 4 / (N * N * M * M) * (1 - 1 / ((2 * n + 1) * (N - 1)))


@dataclass
class Extrema:
    n: int
    m: int
    D_max_region_formula: float
    D_max_region: float
    region_witness: np.ndarray
    all_ones_physical: bool
    D_max_separable_formula: float
    D_max_separable: float
    separable_witness: np.ndarray
    D_max_unit_ball: float

    @property
    def region_discrepancy(self) -> float:
        return self.D_max_region - self.D_max_region_formula

    @property
    def separable_discrepancy(self) -> float:
        return self.D_max_separable - self.D_max_separable_formula

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["region_witness"] = self.region_witness.tolist()
        out["separable_witness"] = self.separable_witness.tolist()
        out["region_discrepancy"] = self.region_discrepancy
        out["separable_discrepancy"] = self.separable_discrepancy
        return out


def extremal_values(n: int, m: int) -> Extrema:
    """Formula extrema next to exact maxima over the physical set and the l1 ball.

    ``D_max_unit_ball`` is the maximum over the Euclidean unit ball,
    ``2n / ((2n + 1) NM)`` at ``|t_i| = 1/sqrt(2n + 1)``.
    """
    if n < 1 or m < n:
        raise ValueError("need 1 <= n <= m")
    N, M = 2**n, 2**m
    k = 2 * n + 1
    d_reg, w_reg = maximize_on_polytope(*physical_polytope(n), N, M)
    d_sep, w_sep = maximize_on_polytope(*l1_ball(n), N, M)
    ones = np.ones(k)
    all_ones = bool((1 + sign_patterns(n) @ ones).min() >= -MARGIN_TOL)
    return Extrema(
        n=n,
        m=m,
        D_max_region_formula=region_formula(n, m),
        D_max_region=d_reg,
        region_witness=w_reg,
        all_ones_physical=all_ones,
        D_max_separable_formula=separable_formula(n, m),
        D_max_separable=d_sep,
        separable_witness=w_sep,
        D_max_unit_ball=(k - 1) / (k * N * M),
    )


@dataclass
class LevelSample:
    t: np.ndarray
    branch: int
    D: float
    report: RegionReport


def sample_level_surface(
    n: int,
    m: int,
    D_target: float,
    count: int,
    seed: int | None = None,
    max_tries: int = 1000,
) -> list[LevelSample]:
    """Points with ``gmqd = D_target``, spread over the ``2n + 1`` branches.

    On branch ``l`` the off-``l`` part is a uniform direction (normalized
    Gaussian) of radius ``sqrt(NM D)`` and ``t_l`` is uniform on
    ``[-L, L]`` with ``L = max(1, radius)``; draws where ``l`` is not the
    first index of largest magnitude are rejected.  ``D = 0`` gives points
    on the coordinate axes.
    """
    if D_target < 0:
        raise ValueError("D_target must be >= 0")
    if count < 1:
        raise ValueError("count must be >= 1")
    N, M = 2**n, 2**m
    k = 2 * n + 1
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    radius = np.sqrt(N * M * D_target)
    L = max(1.0, radius)
    out = []
    for j in range(count):
        l = j % k
        for _ in range(max_tries):
            g = rng.standard_normal(k - 1)
            norm = np.linalg.norm(g)
            if norm == 0:
                continue
            t = np.empty(k)
            t[np.arange(k) != l] = radius * g / norm
            t[l] = rng.uniform(-L, L)
            a = np.abs(t)
            if int(np.argmax(a)) == l:
                break
        else:
            continue
        spec = GbssSpec(n, m, t)
        out.append(LevelSample(t, l, float(gmqd_t(t, N, M)), classify(spec)))
    return out
