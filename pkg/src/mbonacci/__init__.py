"""m-bonacci words, quasicrystal chains, densities, gap conditions and frame probes."""

__version__ = "0.1.0"

from .chain import (
    Chain,
    DensityReport,
    build_chain,
    count_max_in_window,
    density_lower_bound,
    density_scan,
    upper_density_closed_form,
)
from .errors import DomainError, InvalidWordError, MbonacciError, NumericError, RangeError
from .frame import FrameProbe, FrameReport, frame_bounds, gram_matrix, threshold_sweep
from .numbersys import (
    GapReport,
    TribExpansion,
    fib,
    fibonacci_subword_weight_bounds,
    gamma_fibonacci,
    gamma_fibonacci_sharp,
    gamma_tribonacci,
    trib,
    trib_eval,
    trib_expand,
    tribonacci_subword_weights,
    verify_gap_condition,
)
from .spectral import (
    PerronData,
    char_poly_eval,
    incidence_matrix,
    perron_root,
    verify_left_eigenvector,
)
from .substitution import (
    Alphabet,
    Word,
    WordStream,
    apply_substitution,
    digit_weight,
    empirical_frequency,
    extend_bi_infinite,
    iterate_on_one,
)

__all__ = [
    "Alphabet", "Chain", "DensityReport", "DomainError", "FrameProbe", "FrameReport",
    "GapReport", "InvalidWordError", "MbonacciError", "NumericError", "PerronData",
    "RangeError", "TribExpansion", "Word", "WordStream", "apply_substitution",
    "build_chain", "char_poly_eval", "count_max_in_window", "density_lower_bound",
    "density_scan", "digit_weight", "empirical_frequency", "extend_bi_infinite", "fib",
    "fibonacci_subword_weight_bounds", "frame_bounds", "gamma_fibonacci",
    "gamma_fibonacci_sharp", "gamma_tribonacci", "gram_matrix", "incidence_matrix",
    "iterate_on_one", "perron_root", "threshold_sweep", "trib", "trib_eval", "trib_expand",
    "tribonacci_subword_weights", "upper_density_closed_form", "verify_gap_condition",
    "verify_left_eigenvector",
]
