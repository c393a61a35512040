"""tfbounds: quantitative time-frequency concentration bounds.

Core objects: sampled functions on symmetric grids with an exact
continuous-convention Fourier transform; the Hermite basis and its
dispersion-sum inequalities; prolate spheroidal wave functions with
concentration projections; spherical-code cardinality bounds; and the
envelope pipelines that tie them together, including Riesz-basis variants.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    Envelope,
    c_f_epsilon,
    gaussian_bound,
    holder_envelope_bound,
    mean_dispersion_max_count,
    minimax_lower,
    p_mean_dispersion_bound,
    power_law_bound,
    umbrella_bound,
)
from .hermite import (
    HermiteBasis,
    build_hermite_basis,
    concentration_summary,
    heisenberg_product,
    hermite_form,
    hermite_function,
    rayleigh_ritz_trace,
    sharp_bound,
    sharp_mean_dispersion_check,
)
from .numerics import (
    DomainError,
    Grid,
    GridMismatchError,
    NormalizationError,
    PStats,
    SampledFunction,
    default_grid,
    fourier_transform,
    inner_product,
    inverse_fourier_transform,
    l2_norm,
    p_mean,
    p_variance,
    tail_energy,
)
from .projections import (
    CodeFromFamily,
    approximable_family_bound,
    canonical_basis_example,
    onb_to_code,
)
from .pswf import (
    ApproximabilityReport,
    PswfBasis,
    build_pswf_basis,
    in_P_class,
    landau_pollak_check,
    landau_pollak_dimension,
    project,
)
from .riesz import (
    OrthogonalizerStats,
    orthogonalizer_stats,
    riesz_alpha,
    riesz_mean_dispersion_bound,
    riesz_minimax_lower,
    riesz_trace_bound,
    umbrella_riesz_bound,
)
from .sphere_codes import (
    CodeBoundQuery,
    CodeBoundReport,
    SphericalCode,
    code_upper_bound,
    greedy_code,
    verify_code,
)

__all__ = [name for name in dir() if not name.startswith("_")]
