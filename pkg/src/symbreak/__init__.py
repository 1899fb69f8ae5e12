"""Sharp constants, thresholds and symmetry breaking for CKN and WLH inequalities."""

from .closed_forms import UNBOUNDED, InadmissibleParameters, ParamSet, admissible, derive
from .cylinder import CylinderProfile, LineProfile, eval_ckn_energy, eval_wlh_entropy
from .radial_opt import (
    ConstantEstimate,
    ConvergenceError,
    ckn_radial_constant,
    gn_constant,
    log_sobolev_constant,
    sobolev_constant,
    wlh_radial_constant,
)
from .regions import MapSpec, RegionMap, a_star_ckn, a_star_wlh_check, build_map, classify, emit
from .spectral import SpectralReport, spectral_threshold, symmetry_verdict

__version__ = "0.1.0"

__all__ = [
    "UNBOUNDED", "InadmissibleParameters", "ParamSet", "admissible", "derive",
    "CylinderProfile", "LineProfile", "eval_ckn_energy", "eval_wlh_entropy",
    "ConstantEstimate", "ConvergenceError", "ckn_radial_constant", "gn_constant",
    "log_sobolev_constant", "sobolev_constant", "wlh_radial_constant",
    "MapSpec", "RegionMap", "a_star_ckn", "a_star_wlh_check", "build_map", "classify", "emit",
    "SpectralReport", "spectral_threshold", "symmetry_verdict",
]
