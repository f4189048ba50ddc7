"""Numerical laboratory for essential spectra of operators induced on
invariant subspaces and quotients."""

from .cplane import (
    CompactSetEstimate,
    HullRegion,
    dilate,
    hull_contains,
    one_sided_distance,
    polynomial_hull,
)
from .operators import (
    BasisSubspace,
    BlockTriangular,
    CoordinateSubspace,
    DirectSum,
    FiniteOperator,
    HalfLine,
    LaurentOperator,
    SumSubspace,
    ToeplitzOperator,
    build_operator,
    build_subspace,
    defect_dimension_sweep,
    finite_section,
    induce,
    invariance_defect,
)
from .projections import contour_projection, rank_vs_fredholm_check, resolvent_apply
from .spectra import (
    eigenvalues,
    essential_spectral_radius,
    essential_spectrum,
    pseudospectrum_grid,
    spectral_report,
    spectrum,
)
from .symbols import (
    Symbol,
    eval_symbol,
    fourier_coefficients,
    negative_part_norm,
    resolvent_symbol,
    winding_number,
)
from .theoremlab import (
    run_suite,
    verify_fact_a,
    verify_fact_c,
    verify_obs_i,
    verify_obs_ii,
    verify_projection_commutation,
    verify_radius_inequality,
    verify_theorem1,
)

__version__ = "0.1.0"
