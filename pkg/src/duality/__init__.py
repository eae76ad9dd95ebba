"""Path knowledge and interference strength in n-path interferometers."""

from .errors import DualityError
from .states import (
    DensityMatrix,
    apply_path_phases,
    maximally_mixed,
    pure_state,
    qutrit_moment,
    sorted_path_probs,
    state_from_dict,
    state_from_json,
    validate_density,
)
from .fourier import (
    FourierFamily,
    FourierMatrix,
    central_fourier_n4,
    dephase,
    is_fourier,
    standard_fourier,
    transform,
)
from .measures import (
    MeasureSpec,
    check_axioms,
    knowledge,
    parse_measure,
    renyi_limits,
    validate_gains,
)
from .strength import (
    SearchConfig,
    StrengthResult,
    brute_force_strength,
    strength,
    strength_lower_bound,
)
from .clicks import ClickRecord, estimate_pv, sample_particle_mode, sample_wave_mode

__version__ = "0.1.0"

__all__ = [
    "ClickRecord",
    "DensityMatrix",
    "DualityError",
    "FourierFamily",
    "FourierMatrix",
    "MeasureSpec",
    "SearchConfig",
    "StrengthResult",
    "apply_path_phases",
    "brute_force_strength",
    "central_fourier_n4",
    "check_axioms",
    "dephase",
    "estimate_pv",
    "is_fourier",
    "knowledge",
    "maximally_mixed",
    "parse_measure",
    "pure_state",
    "qutrit_moment",
    "renyi_limits",
    "sample_particle_mode",
    "sample_wave_mode",
    "sorted_path_probs",
    "standard_fourier",
    "state_from_dict",
    "state_from_json",
    "strength",
    "strength_lower_bound",
    "transform",
    "validate_density",
    "validate_gains",
]
