"""Phonon heating from collapse-model noise with a general power spectrum."""

__version__ = "0.1.0"

from .errors import (
    CheckFailure,
    ConvergenceError,
    CSLHeatError,
    DomainError,
    FormatError,
    InternalConsistencyError,
    InvalidArgumentError,
    OutOfRangeError,
    UndefinedRatioError,
    ValidationError,
)
from .heating import (
    AnisotropicLinear,
    LambdaEffResult,
    NoiseParams,
    PhysicalConstants,
    QuadratureOptions,
    ScanRow,
    TargetBody,
    heating_rate,
    heating_rate_per_mass,
    isotropic,
    lambda_eff,
    lambda_eff_mc,
    scan,
    suppression_factor,
)
from .lattice import (
    DiatomicCell,
    MonatomicLattice,
    appendix_checks,
    bz_grid,
    bz_sum_lambda_eff,
    diatomic_branches,
    dipole_approx_error,
    occupancy_cancellation_check,
    one_phonon_amplitude_factor,
)
from .spectra import (
    DebyeCapped,
    Dispersion,
    ExpCutoff,
    HardCutoff,
    Linear,
    Lorentzian,
    NoiseSpectrum,
    SineBand,
    TabulatedDispersion,
    TabulatedSpectrum,
    White,
    evaluate_dispersion,
    evaluate_spectrum,
    gamma_of,
    invert_dispersion,
    load_tabulated,
    read_tabulated_csv,
)
