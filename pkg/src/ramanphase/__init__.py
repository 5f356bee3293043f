"""Noise moments, nonclassicality witnesses and phase quasidistributions for Raman scattering."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    Case,
    DomainError,
    Mode,
    NoiseMoments,
    StrongPumpParams,
    WeakPumpParams,
    intensity,
    lambda_fn,
    p_ratio,
)
from .noise_strong import strong_moments, strong_moments_degenerate  # noqa: E402
from .noise_weak import weak_moments, weak_moments_resonant  # noqa: E402
from .quasidist import ThetaGrid, cf_eval, filter_map, theta_single, theta_two  # noqa: E402
from .witnesses import (  # noqa: E402
    PhaseRegion,
    UndefinedWitnessError,
    WitnessReport,
    closed_form_weak,
    psi_angles,
    q_ls_special,
    q_witness,
    s_witness,
    strong_closed_form,
    two_mode_filter,
)

__all__ = [
    "Case",
    "DomainError",
    "Mode",
    "NoiseMoments",
    "StrongPumpParams",
    "WeakPumpParams",
    "intensity",
    "lambda_fn",
    "p_ratio",
    "strong_moments",
    "strong_moments_degenerate",
    "weak_moments",
    "weak_moments_resonant",
    "ThetaGrid",
    "cf_eval",
    "filter_map",
    "theta_single",
    "theta_two",
    "PhaseRegion",
    "UndefinedWitnessError",
    "WitnessReport",
    "closed_form_weak",
    "psi_angles",
    "q_ls_special",
    "q_witness",
    "s_witness",
    "strong_closed_form",
    "two_mode_filter",
]
