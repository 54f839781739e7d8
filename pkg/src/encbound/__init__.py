"""encbound: prefix-free codes, entropy tools, executable encoding lemmas,
witness codecs, tail-bound calculators, and simulators that check the bounds.
"""

from .bitcodes import (
    BitReader,
    BitString,
    CodeTable,
    DecodeError,
    FiniteDensity,
    canonical_code,
    elias_delta_decode,
    elias_delta_encode,
    elias_gamma_decode,
    elias_gamma_encode,
    elias_omega_decode,
    elias_omega_encode,
    fixed_length_decode,
    fixed_length_encode,
    kraft_sum,
    shannon_fano_build,
    subset_rank,
    subset_unrank,
    unary_decode,
    unary_encode,
)
from .entropy import (
    binary_entropy,
    entropy_bound_near_half,
    entropy_bound_near_zero,
    kl_divergence,
    log_binomial,
    log_binomial_bound,
    log_factorial_bound,
)
from .ledger import LengthFunction, TailBound, nonuniform_tail, uniform_tail
from .experiments import ExperimentReport, RngSpec
from .satfix import CnfFormula, gen_bounded_overlap_cnf, moser_solve

__version__ = "0.1.0"
