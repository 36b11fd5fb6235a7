"""Quantum discord and geometric discord of generalized Bloch sphere states."""
from .clifford import (
    GammaSet,
    SuBasis,
    build_gamma_tower,
    build_su_basis,
    max_anticommuting_set,
    star_product,
)
from .discord import (
    DiscordReport,
    NonPhysicalState,
    classical_correlation_closed,
    discord_closed,
    evaluate_discord,
    mutual_information,
)
from .entropy import EntropySpec, entropy
from .gmqd import CorrelationBlock, correlation_block, gmqd_closed, gmqd_oracle, max_term_closed
from .measurement import Povm, mu, mu_max, optimal_povm
from .region import RegionReport, classify, extremal_values, sample_level_surface
from .state import DensityMatrix, GbssSpec, closed_form_spectrum, is_physical, partial_transpose, realize

__version__ = "0.1.0"

__all__ = [
    "CorrelationBlock",
    "DensityMatrix",
    "DiscordReport",
    "EntropySpec",
    "GammaSet",
    "GbssSpec",
    "NonPhysicalState",
    "Povm",
    "RegionReport",
    "SuBasis",
    "build_gamma_tower",
    "build_su_basis",
    "classical_correlation_closed",
    "classify",
    "closed_form_spectrum",
    "correlation_block",
    "discord_closed",
    "entropy",
    "evaluate_discord",
    "extremal_values",
    "gmqd_closed",
    "gmqd_oracle",
    "is_physical",
    "max_anticommuting_set",
    "max_term_closed",
    "mu",
    "mu_max",
    "mutual_information",
    "optimal_povm",
    "partial_transpose",
    "realize",
    "sample_level_surface",
    "star_product",
]
