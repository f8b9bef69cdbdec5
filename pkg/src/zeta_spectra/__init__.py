"""Fourier analysis of Riemann zeta zero ordinates.

Transforms of zero sequences, Montgomery's recursion and the recursive
coefficient update, circulant eigen-checks, cloud detection with
distribution fits, and nested Fourier trees.
"""

__version__ = "0.1.0"

from .circulant import (
    CirculantOperator,
    FourierPolygon,
    apply_T,
    build_circulant,
    eigenvalue_via_polygon,
    verify_spectrum,
)
from .cluster import (
    CloudPartition,
    find_cloud_index,
    fit_imag_cdf,
    fit_real_normal,
    smoothness_score,
)
from .errors import (
    CacheIntegrityError,
    DataError,
    DomainError,
    FitError,
    HermiticityError,
    NoCloudFound,
    NumericContractError,
    TransportError,
    ZeroTableParseError,
    ZeroTableValidationError,
    ZetaSpectraError,
)
from .nested import NestedFourierTree, build_tree, split_transform
from .recursion import (
    gamma_from_means,
    geometric_xi_sum,
    montgomery_sequence,
    montgomery_step,
    z_recursion_error_series,
    z_recursion_step,
)
from .spectral import (
    Convention,
    Spectrum,
    average_midband_real,
    check_conjugate_symmetry,
    forward_transform,
    inverse_transform,
)
from .zeros_io import ZeroTable, fetch_zero_table, parse_zero_table, reference_zeros
