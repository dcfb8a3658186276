"""Reed-Muller codes on erasure and error channels: constructions, exact oracles and simulations."""

__version__ = "0.1.0"

from ._budget import BudgetExceeded, check_budget
from .channel_model import (
    DEFAULT_SEED,
    CorruptionModel,
    Iid,
    Pattern,
    Regime,
    UniformWeight,
    capacity_gap_threshold,
    entropy,
    inv_entropy,
    parse_model,
    substream,
)
from .erasure_lab import (
    DecodeStatus,
    ErasedWord,
    decode_erasures,
    dual_rank_equivalence,
    erasure_correctable,
    exact_erasure_success,
    mc_erasure_success,
    mc_span_success,
)
from .error_lab import (
    PointMatrix,
    Syndrome,
    check_erasures_to_errors,
    check_general_reduction,
    companion_matrix,
    companion_UB,
    exact_bad_fraction,
    ml_decode,
    mc_bsc_success,
    patterns_equiv,
    syndrome,
    unique_error_decodable,
)
from .gf2_linalg import BitMatrix, BitVector, kernel_basis, rank, rref, solve_any
from .rm_core import RmCode, eval_matrix, eval_vector, generator_tensor, parity_check, tensor_power
from .spectrum import (
    WeightDistribution,
    binomial_identity_check,
    bsc_union_bound,
    enumerate_weights,
    ghw,
    ghw_bruteforce,
    klp_bound,
)
