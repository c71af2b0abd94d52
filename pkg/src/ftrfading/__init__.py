"""Fluctuating two-ray (FTR) fading: distribution, link metrics and Monte Carlo validation."""
from .errors import ConsistencyError, ConvergenceError, DomainError, FtrError, RangeError, TruncationWarning
from .ftr import (
    CoefficientTable,
    FtrParams,
    SeriesControl,
    build_coefficients,
    db_to_linear,
    dj_coefficient,
    dj_imaginary_residue,
    ftr_cdf,
    ftr_pdf,
    linear_to_db,
    twdp_pdf,
)
from .metrics import (
    BFSK,
    BPSK,
    DBPSK,
    MetricResult,
    ModulationScheme,
    ber_asymptotic,
    ber_exact,
    capacity,
    conditional_bep,
)
from .montecarlo import (
    EmpiricalDistribution,
    KsReport,
    critical_value,
    ks_statistic,
    ks_test,
    mc_ber,
    mc_capacity,
    sample_channel,
)

__version__ = "0.1.0"
