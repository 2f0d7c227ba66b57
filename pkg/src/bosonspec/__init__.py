"""Spectra, normal modes and eigenfunctions of non-Hermitian quadratic boson forms."""

from .forms import (
    CoordinateForm,
    MultiModeForm,
    OneModeForm,
    embed_one_mode,
    from_coordinate,
    lambda_from_coordinate,
    normalize_phase,
    to_coordinate,
)
from .normal_modes import (
    NonDiagonalizableError,
    Region,
    RegionClass,
    bogoliubov,
    classify,
    commutator_matrix,
    lambda_of,
    region_one_condition,
    transform_form,
)
from .special import gamma_c, hermite_nu, hermite_nu_pair, xi
from .wavefunctions import WaveSpec, evaluate
from .multimode import decompose
from . import fock, multimode, quadrature, sweep, wavefunctions

__version__ = "0.1.0"
