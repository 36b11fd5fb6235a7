"""Acceptance criteria as runnable checks.

Each ``criterion_k`` returns a :class:`CriterionResult`.  ``quick=True``
shrinks sample counts for smoke runs; the tolerances never change.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .clifford import build_gamma_tower, build_su_basis
from .discord import (
    classical_correlation_closed,
    discord_oracle,
    mutual_information,
)
from .entropy import LN2, RENYI, TSALLIS, EntropySpec, entropy, spectral_entropy
from .gmqd import correlation_block, gmqd_closed, gmqd_oracle
from .measurement import mu_max
from .region import extremal_values
from .search import default_seed
from .state import (
    GbssSpec,
    full_spectrum,
    partial_transpose,
    random_physical_spec,
    realize,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict
    tolerance: str
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] criterion {self.number} ({self.name}): {parts}; tol {self.tolerance}; {self.elapsed:.2f}s"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{v:.3g}"
    return str(v)


def _rng(offset: int) -> np.random.Generator:
    return np.random.default_rng(default_seed() + offset)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed = time.perf_counter() - t0
        limit = res.measured.pop("_limit", None)
        if limit is not None:
            res.measured["runtime_limit_s"] = limit
            res.passed = res.passed and res.elapsed < limit
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def criterion_1(quick: bool = False) -> CriterionResult:
    """Gamma identities for d in {2, 4, 6, 8}; SU(N) product reconstruction for N in {2, 4}."""
    gamma_worst = 0.0
    for d in (2, 4, 6, 8):
        gamma_worst = max(gamma_worst, max(build_gamma_tower(d).residuals().values()))
    recon_worst = 0.0
    for N in (2, 4):
        basis = build_su_basis(N)
        lam = basis.lambdas
        coef = 1j * basis.tensor("f") + basis.tensor("d")
        prod = np.einsum("iab,jbc->ijac", lam, lam)
        rebuilt = np.einsum("ijk,kac->ijac", coef, lam)
        rebuilt = rebuilt + (2 / N) * np.einsum("ij,ac->ijac", np.eye(basis.size), np.eye(N))
        recon_worst = max(recon_worst, float(np.abs(prod - rebuilt).max()))
    passed = gamma_worst <= 1e-12 and recon_worst <= 1e-12
    return CriterionResult(
        1,
        "algebra",
        passed,
        {"gamma_residual": gamma_worst, "reconstruction_residual": recon_worst, "_limit": 5.0},
        "1e-12",
    )


@_timed
def criterion_2(quick: bool = False) -> CriterionResult:
    """Closed-form spectrum equals the numerical spectrum."""
    count = 50 if quick else 500
    rng = _rng(2)
    worst = 0.0
    for n, m in ((1, 1), (1, 2), (2, 2)):
        for _ in range(count):
            spec = random_physical_spec(n, m, rng)
            ev = np.linalg.eigvalsh(realize(spec).data)
            worst = max(worst, float(np.abs(ev - full_spectrum(spec)).max()))
    return CriterionResult(
        2,
        "spectrum",
        worst <= 1e-10,
        {"specs_per_shape": count, "max_deviation": worst, "_limit": 60.0},
        "1e-10",
    )


@_timed
def criterion_3(quick: bool = False) -> CriterionResult:
    """Closed-form classical correlation against the basis oracle; Bell values."""
    rng = _rng(3)
    plan = ((1, 1, 10 if quick else 100), (2, 2, 2 if quick else 25))
    worst_gap, worst_excess = 0.0, -np.inf
    for n, m, count in plan:
        for _ in range(count):
            spec = random_physical_spec(n, m, rng)
            c_closed = classical_correlation_closed(spec)
            c_oracle = discord_oracle(spec, budget=2000).classical_correlation
            worst_gap = max(worst_gap, abs(c_closed - c_oracle))
            worst_excess = max(worst_excess, c_oracle - c_closed)
    bell = GbssSpec(1, 1, [1, -1, 1])
    i_b = mutual_information(bell)
    c_b = classical_correlation_closed(bell)
    c_bo = discord_oracle(bell, budget=2000).classical_correlation
    bell_err = max(abs(i_b - 2), abs(c_b - 1), abs(i_b - c_b - 1), abs(c_bo - 1))
    passed = worst_gap <= 1e-4 and worst_excess <= 1e-6 and bell_err <= 1e-9
    return CriterionResult(
        3,
        "discord oracle",
        passed,
        {
            "max_gap": worst_gap,
            "max_oracle_excess": worst_excess,
            "bell_error": bell_err,
            "_limit": 600.0,
        },
        "gap 1e-4, excess 1e-6, Bell 1e-9",
    )


CRITERION_4_ENTROPIES = (
    EntropySpec(),
    EntropySpec(RENYI, 0.3),
    EntropySpec(RENYI, 0.7),
    EntropySpec(TSALLIS, 0.5),
    EntropySpec(TSALLIS, 2.0),
)


@_timed
def criterion_4(quick: bool = False) -> CriterionResult:
    """Every entropy's optimal measurement has ``mu = sqrt(2/N) t_max``."""
    rng = _rng(4)
    plan = ((1, 1, 2), (1, 2, 1), (2, 2, 1)) if quick else ((1, 1, 10), (1, 2, 5), (2, 2, 5))
    worst, cases = 0.0, 0
    for n, m, count in plan:
        for _ in range(count):
            spec = random_physical_spec(n, m, rng)
            target = mu_max(spec)
            for ent in CRITERION_4_ENTROPIES:
                res = discord_oracle(spec, ent, budget=2000)
                worst = max(worst, abs(res.mu_best - target))
                cases += 1
    return CriterionResult(
        4,
        "entropy independence",
        worst <= 1e-4,
        {"cases": cases, "max_mu_deviation": worst},
        "1e-4",
    )


@_timed
def criterion_5(quick: bool = False) -> CriterionResult:
    """GMQD closed form against the oracle, the two-qubit reduction, Parseval."""
    rng = _rng(5)
    plan = ((1, 1, 1e-5), (1, 2, 1e-4), (2, 2, 1e-4))
    count = 3 if quick else 20
    gaps, parseval, excess = {}, 0.0, -np.inf
    passed = True
    for n, m, tol in plan:
        worst = 0.0
        for _ in range(count):
            spec = random_physical_spec(n, m, rng)
            rho = realize(spec).data
            d_closed = gmqd_closed(spec)
            d_oracle = gmqd_oracle(rho, spec.dims, budget=5000).value
            worst = max(worst, abs(d_oracle - d_closed))
            excess = max(excess, d_closed - d_oracle)
            block = correlation_block(rho, spec.dims)
            parseval = max(parseval, abs(block.tr_cc - np.trace(rho @ rho).real))
        gaps[f"gap_{n}{m}"] = worst
        passed = passed and worst <= tol
    two_qubit = 0.0
    for _ in range(200):
        spec = random_physical_spec(1, 1, rng)
        ref = 0.25 * (spec.t @ spec.t - np.max(spec.t**2))
        two_qubit = max(two_qubit, abs(gmqd_closed(spec) - ref))
    passed = passed and two_qubit <= 1e-14 and parseval <= 1e-12 and excess <= 1e-9
    return CriterionResult(
        5,
        "gmqd",
        passed,
        {**gaps, "oracle_below_closed": excess, "two_qubit_identity": two_qubit, "parseval": parseval},
        "1e-5 (1,1), 1e-4 (1,2)/(2,2), Parseval 1e-12",
    )


@_timed
def criterion_6(quick: bool = False) -> CriterionResult:
    """Maximum GMQD over the l1 ball against the separable formula; physical maximum.

    Expected to fail on its separable half: the l1-ball maximum is
    ``1/16`` at (1, 1) while the formula gives ``1/6`` (the Euclidean unit
    ball maximum).
    """
    ext = extremal_values(1, 1)
    sep_dev = abs(ext.D_max_separable - ext.D_max_separable_formula)
    witness = ext.region_witness
    bell_vertex = bool(np.allclose(np.abs(witness), 1.0, atol=1e-9))
    reg_dev = abs(ext.D_max_region - 0.5)
    passed = sep_dev <= 1e-6 and reg_dev <= 1e-6 and bell_vertex
    return CriterionResult(
        6,
        "region extrema",
        passed,
        {
            "D_max_separable": ext.D_max_separable,
            "separable_formula": ext.D_max_separable_formula,
            "separable_deviation": sep_dev,
            "D_max_unit_ball": ext.D_max_unit_ball,
            "D_max_region": ext.D_max_region,
            "bell_vertex": bell_vertex,
        },
        "1e-6",
    )


@_timed
def criterion_7(quick: bool = False) -> CriterionResult:
    """Partial transpose spectrum equals the spectrum with ``t_{2n+1}`` negated."""
    rng = _rng(7)
    count = 20 if quick else 200
    worst = 0.0
    for n, m in ((1, 1), (1, 2)):
        for _ in range(count):
            spec = random_physical_spec(n, m, rng)
            pt = partial_transpose(realize(spec).data, "B", spec.dims).data
            ev = np.linalg.eigvalsh(pt)
            worst = max(worst, float(np.abs(ev - full_spectrum(spec, flip_last=True)).max()))
    return CriterionResult(
        7, "ppt spectrum", worst <= 1e-10, {"specs_per_shape": count, "max_deviation": worst}, "1e-10"
    )


def _random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@_timed
def criterion_8(quick: bool = False) -> CriterionResult:
    """``q -> 1`` limits on random 8 x 8 spectra and concavity on random pairs."""
    rng = _rng(8)
    count = 100 if quick else 1000
    # Deviations are measured in nats, the unit in which the Tsallis
    # expression tends to the von Neumann entropy.
    limit_dev, limit_bits = 0.0, 0.0
    for _ in range(count):
        p = np.linalg.eigvalsh(_random_density(rng, 8))
        s = float(spectral_entropy(p))
        for kind in (RENYI, TSALLIS):
            dev = abs(float(spectral_entropy(p, EntropySpec(kind, 0.999))) - s)
            limit_bits = max(limit_bits, dev)
            limit_dev = max(limit_dev, dev * LN2)
    family = (EntropySpec(), EntropySpec(RENYI, 0.5), EntropySpec(TSALLIS, 0.5), EntropySpec(TSALLIS, 2.0))
    violations, worst = 0, np.inf
    for _ in range(count):
        a, b = _random_density(rng, 8), _random_density(rng, 8)
        w = rng.uniform()
        for ent in family:
            slack = entropy(w * a + (1 - w) * b, ent) - w * entropy(a, ent) - (1 - w) * entropy(b, ent)
            worst = min(worst, slack)
            violations += slack < -1e-12
    passed = limit_dev <= 2e-3 and violations == 0
    return CriterionResult(
        8,
        "entropy limits",
        passed,
        {"max_limit_deviation_nats": limit_dev, "max_limit_deviation_bits": limit_bits, "concavity_pairs": count, "concavity_violations": violations, "min_slack": worst},
        "2e-3 (nats)",
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}


def run_all(quick: bool = False, only=None, echo=None) -> list[CriterionResult]:
    """Run the selected criteria in order; ``echo`` receives each result line."""
    out = []
    for k in sorted(only or CRITERIA):
        res = CRITERIA[k](quick=quick)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
