"""Gamma-model speckle filtering, phantom simulation and quality metrics.

Rasters are 2-D float64 arrays indexed ``[row, col]``.
"""

from ._core import (
    DegenerateSampleError,
    DomainError,
    GeometryError,
    IoError,
    NumericalError,
    ParseError,
    beta_rho,
    chi2_p_value,
    compute_metrics,
    corrupt,
    decide,
    enl,
    filter_image,
    gamma_density,
    generate_phantom,
    kl_distance,
    kl_statistic,
    mle_estimate,
    q_index,
    records_csv,
    run_protocol,
)

__all__ = [name for name in dir() if not name.startswith("_")]
