"""Sum-rate outer bounds for the three-user Gaussian interference channel.

Channels are 3x3 complex gain matrices in standard form (unit input power,
unit noise variance, real positive direct gains). All rates are in bits per
channel use.
"""

from .channel import (ChannelMatrix, Family, FamilySpec, alpha_to_cross_gain, build_family,
                      standardize)
from .classic import (BoundKind, BoundResult, composite_sum_rate, etw_2user, kramer_2user,
                      mac_bound, single_user_rate)
from .errors import (BoundaryCorrelation, DegeneratePower, EmptyBoundary, IFCError,
                     InapplicableCandidate, InvalidFamilyParams, SingularCovariance,
                     ZeroDirectGain)
from .gaussinfo import (LemmaResult, MisoPair, NoiseCorrelation, conditional_mi,
                        lemma_mi_at_rho, lemma_min_mi)
from .oracle import GridSpec, constrained_boundary_min, grid_min_covariance, grid_min_rho
from .sweep import AlphaRange, SweepTable, crossovers, run_sweep
from .theorem1 import CaseLabel, Th1CaseReport, th1_ordering, th1_sum_rate
from .theorem2 import f_jk, th2_sum_rate

__version__ = "0.1.0"

__all__ = [
    "ChannelMatrix", "Family", "FamilySpec", "alpha_to_cross_gain", "build_family", "standardize",
    "BoundKind", "BoundResult", "composite_sum_rate", "etw_2user", "kramer_2user", "mac_bound",
    "single_user_rate",
    "BoundaryCorrelation", "DegeneratePower", "EmptyBoundary", "IFCError",
    "InapplicableCandidate", "InvalidFamilyParams", "SingularCovariance", "ZeroDirectGain",
    "LemmaResult", "MisoPair", "NoiseCorrelation", "conditional_mi", "lemma_mi_at_rho",
    "lemma_min_mi",
    "GridSpec", "constrained_boundary_min", "grid_min_covariance", "grid_min_rho",
    "AlphaRange", "SweepTable", "crossovers", "run_sweep",
    "CaseLabel", "Th1CaseReport", "th1_ordering", "th1_sum_rate",
    "f_jk", "th2_sum_rate",
]
