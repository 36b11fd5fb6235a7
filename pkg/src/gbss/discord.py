"""Classical correlation and quantum discord of GBSS, closed form and oracle.

Discord is the "left" one: the measurement acts on A.  For a rank-one
measurement on A every conditional state of B has spectrum
``(1 +- nu_k) / M`` with multiplicity ``M/2``, where ``nu_k`` is the length
of its Bloch vector along the B-side gammas.  The optimal measurement reaches
``nu = t_max``; in terms of the ``mu`` statistic, ``nu = sqrt(N/2) * mu``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .entropy import (
    LN2,
    RENYI,
    TSALLIS,
    VON_NEUMANN,
    EntropySpec,
    entropy,
    spectral_entropy,
    uniform_entropy,
)
from .measurement import coherence_from_effect, mu, mu_max, optimal_povm
from .search import maximize_over_bases
from .state import (
    GbssSpec,
    full_spectrum,
    is_physical,
    partial_trace,
    realize,
)
from .clifford import local_frame

DEFAULT_BUDGET = 2000


class NonPhysicalState(ValueError):
    def __init__(self, margins):
        self.margins = np.asarray(margins)
        super().__init__(f"state is not positive: smallest margin {self.margins.min():.3e}")


def _require_physical(spec: GbssSpec) -> None:
    ok, margins = is_physical(spec)
    if not ok:
        raise NonPhysicalState(margins)


def _require_closed(spec: GbssSpec) -> None:
    if spec.has_local_terms:
        raise ValueError("closed forms need x = y = 0")
    _require_physical(spec)


def _power_sum(nu: float, q: float) -> float:
    """``(1 + nu)^q + (1 - nu)^q`` with zero terms dropped."""
    total = 0.0
    for v in (1 + nu, 1 - nu):
        if v > 1e-12:
            total += v**q
    return total


def classical_correlation_from_bloch(nu: float, M: int, spec: EntropySpec = EntropySpec()) -> float:
    """Classical correlation for equiprobable outcomes with Bloch length ``nu``.

    von Neumann: ``(1-nu)/2 log(1-nu) + (1+nu)/2 log(1+nu)``;
    Renyi: ``-log(g/2) / (1-q)``;
    Tsallis: ``M^(1-q) (1 - g/2) / ((1-q) ln 2)``, with
    ``g = (1+nu)^q + (1-nu)^q``.
    """
    nu = float(min(max(nu, 0.0), 1.0))
    if spec.kind == VON_NEUMANN:
        out = 0.0
        for v in (1 + nu, 1 - nu):
            if v > 1e-12:
                out += v / 2 * np.log2(v)
        return out
    q = spec.q
    g = _power_sum(nu, q)
    if spec.kind == RENYI:
        return float(-np.log2(g / 2) / (1 - q))
    return float(M ** (1 - q) * (1 - g / 2) / ((1 - q) * LN2))


def mutual_information(spec: GbssSpec, ent: EntropySpec = EntropySpec()) -> float:
    """``S(A) + S(B) - S(AB)`` from the closed-form spectrum (x = y = 0)."""
    _require_closed(spec)
    N, M = spec.dims
    s_ab = float(spectral_entropy(full_spectrum(spec), ent))
    return uniform_entropy(N, ent) + uniform_entropy(M, ent) - s_ab


def mutual_information_dense(rho, dims, ent: EntropySpec = EntropySpec()) -> float:
    rho = np.asarray(rho)
    return (
        entropy(partial_trace(rho, dims, "A"), ent)
        + entropy(partial_trace(rho, dims, "B"), ent)
        - entropy(rho, ent)
    )


def classical_correlation_closed(spec: GbssSpec, ent: EntropySpec = EntropySpec()) -> float:
    """Closed-form classical correlation, attained by :func:`optimal_povm`."""
    _require_closed(spec)
    return classical_correlation_from_bloch(np.abs(spec.t).max(), spec.M, ent)


def classical_correlation_literal(spec: GbssSpec, ent: EntropySpec = EntropySpec()) -> float:
    """The same expressions evaluated at ``mu_max`` instead of ``t_max``.

    Equal to :func:`classical_correlation_closed` for ``N = 2`` only; kept as
    a diagnostic.
    """
    _require_closed(spec)
    return classical_correlation_from_bloch(mu_max(spec), spec.M, ent)


def discord_literal_expression(spec: GbssSpec, ent: EntropySpec = EntropySpec()) -> float:
    """Discord written as a single expression in the optimal ``nu = t_max``.

    vn: ``sum l log l - C(nu) + log NM``; Renyi:
    ``log M - S_R(AB) + log(M^(1-q) g/2)/(1-q)``; Tsallis:
    ``(1 - M^(1-q))/(q-1) - Tr rho^q/(1-q) - M^(1-q) g/(2(1-q))``.
    The last two are reported against ``I - C`` as a bookkeeping check.
    """
    _require_closed(spec)
    N, M = spec.dims
    nu = np.abs(spec.t).max()
    lam = full_spectrum(spec)
    if ent.kind == VON_NEUMANN:
        return float(-spectral_entropy(lam) - classical_correlation_from_bloch(nu, M) + np.log2(N * M))
    q = ent.q
    g = _power_sum(nu, q)
    if ent.kind == RENYI:
        s_ab = float(spectral_entropy(lam, ent))
        return float(np.log2(M) - s_ab + np.log2(M ** (1 - q) * g / 2) / (1 - q))
    tr_q = float(np.sum(np.where(lam > 1e-12, np.abs(lam) ** q, 0.0)))
    val = (1 - M ** (1 - q)) / (q - 1) - tr_q / (1 - q) - M ** (1 - q) * g / (2 * (1 - q))
    return float(val / LN2)


@dataclass
class OracleResult:
    classical_correlation: float
    basis: np.ndarray
    evaluations: int
    mus: np.ndarray = field(default=None)

    @property
    def mu_best(self) -> float:
        return float(self.mus.min())


def classical_correlation_oracle(
    rho,
    dims: tuple[int, int],
    ent: EntropySpec = EntropySpec(),
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    refine: bool = True,
    backend: str | None = None,
) -> OracleResult:
    """Brute-force ``max_U [S(B) - sum_k p_k S(B|k)]`` over projective bases on A.

    Works on the dense state only; nothing about its structure is used.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    N, M = dims
    rho = np.asarray(rho, dtype=complex)
    rho4 = rho.reshape(N, M, N, M)
    s_b = entropy(partial_trace(rho, dims, "B"), ent)
    kind, q = ent.code, ent.q

    def objective(bases):
        return s_b - _kernels.conditional_entropy(rho4, bases, kind, q, backend)

    res = maximize_over_bases(objective, N, budget, seed=seed, refine=refine)
    return OracleResult(res.value, res.basis, res.evaluations)


def basis_mus(spec: GbssSpec, basis: np.ndarray, convention: str = "tower") -> np.ndarray:
    """``mu`` of each projector ``|u_k><u_k|`` formed from the columns of ``basis``."""
    frame = local_frame(spec.N, convention)
    out = []
    for k in range(basis.shape[1]):
        u = basis[:, k]
        e = coherence_from_effect(np.outer(u, u.conj()), frame.basis)
        out.append(mu(spec, e, frame))
    return np.array(out)


def discord_oracle(
    spec: GbssSpec,
    ent: EntropySpec = EntropySpec(),
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    convention: str = "tower",
    refine: bool = True,
) -> OracleResult:
    """Oracle classical correlation of the realized state, with per-outcome ``mu``."""
    _require_physical(spec)
    rho = realize(spec, convention).data
    res = classical_correlation_oracle(rho, spec.dims, ent, budget, seed, refine)
    res.mus = basis_mus(spec, res.basis, convention)
    return res


@dataclass
class DiscordReport:
    entropy: str
    mutual_info: float
    classical_corr_closed: float
    discord_closed: float
    mu_max: float
    bloch_max: float
    optimal_e: list
    classical_corr_literal: float
    literal_expression_offset: float
    classical_corr_oracle: float | None = None
    discord_oracle: float | None = None
    gap: float | None = None
    mu_oracle: float | None = None
    oracle_evaluations: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def discord_closed(spec: GbssSpec, ent: EntropySpec = EntropySpec(), convention: str = "tower") -> DiscordReport:
    """Closed-form report; oracle fields stay ``None``."""
    info = mutual_information(spec, ent)
    c = classical_correlation_closed(spec, ent)
    d = info - c
    povm = optimal_povm(spec, convention)
    return DiscordReport(
        entropy=str(ent),
        mutual_info=info,
        classical_corr_closed=c,
        discord_closed=d,
        mu_max=mu_max(spec),
        bloch_max=float(np.abs(spec.t).max()),
        optimal_e=povm.vectors[0].tolist(),
        classical_corr_literal=classical_correlation_literal(spec, ent),
        literal_expression_offset=discord_literal_expression(spec, ent) - d,
    )


def evaluate_discord(
    spec: GbssSpec,
    ent: EntropySpec = EntropySpec(),
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    convention: str = "tower",
) -> DiscordReport:
    """Closed form together with the brute-force oracle."""
    report = discord_closed(spec, ent, convention)
    res = discord_oracle(spec, ent, budget, seed, convention)
    report.classical_corr_oracle = res.classical_correlation
    report.discord_oracle = report.mutual_info - res.classical_correlation
    report.gap = report.classical_corr_closed - res.classical_correlation
    report.mu_oracle = res.mu_best
    report.oracle_evaluations = res.evaluations
    return report


@dataclass
class IndependenceReport:
    mu_target: float
    degenerate: bool
    entries: list  # (entropy label, mu_best, deviation, passed)
    tol: float

    @property
    def passed(self) -> bool:
        return self.degenerate or all(e[3] for e in self.entries)


def default_entropy_family(q_list=(0.3, 0.7)) -> list[EntropySpec]:
    specs = [EntropySpec()]
    for q in q_list:
        if 0 <= q < 1:
            specs.append(EntropySpec(RENYI, q))
        if q > 0 and q != 1:
            specs.append(EntropySpec(TSALLIS, q))
    return specs


def entropy_independence_check(
    spec: GbssSpec,
    entropies=None,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
    tol: float = 1e-4,
    convention: str = "tower",
) -> IndependenceReport:
    """Check that every entropy's oracle optimum has ``mu = sqrt(2/N) t_max``.

    ``entropies`` is a list of :class:`EntropySpec` (default: von Neumann and
    Renyi/Tsallis at q = 0.3, 0.7).  Skipped for ``t = 0``.
    """
    entropies = default_entropy_family() if entropies is None else list(entropies)
    target = mu_max(spec)
    if not np.any(spec.t):
        return IndependenceReport(target, True, [], tol)
    entries = []
    for ent in entropies:
        res = discord_oracle(spec, ent, budget, seed, convention)
        dev = abs(res.mu_best - target)
        entries.append((str(ent), res.mu_best, dev, dev <= tol))
    return IndependenceReport(target, False, entries, tol)
