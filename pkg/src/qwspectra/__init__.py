"""Point spectra and localization diagnostics for inhomogeneous two-state walks."""

__version__ = "0.1.0"

from .core import (CoinField, CoinMatrix, WaveState, WindowOverflowError, apply_step,
                   state_norm, truncated_operator)
from .models import (HADAMARD, ModelKind, ModelSpec, build_complete_two_phase,
                     build_hadamard, build_one_defect, build_two_phase_defect,
                     build_wojcik, parse_model_spec, phase_coin)
from .closedform import (BranchLabel, BranchResolutionError, Interval, RegionSet,
                         SingularDenominatorError, TwoPhaseAux, admissible_region,
                         complete_two_phase_eigenvalues, continuous_spectrum_contains,
                         one_defect_eigenvalues, sweep_eigenvalue, sweep_phase_pair,
                         two_phase_defect_eigenvalues, wojcik_eigenvalues)
from .spectral import (DegenerateCoinError, EigenCandidate, NoContractionError,
                       bulk_transfer, half_line_solution, localized_spectrum_oracle,
                       matching_determinant, point_spectrum_search)
from .measure import (ProbabilityField, decay_length, default_initial_state, distribution,
                      origin_probability_series, time_averaged_origin_probability)
