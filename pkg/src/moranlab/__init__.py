"""Cantor-Moran measures on prime mixed-radix schedules.

Certified Fourier decay, digit-partition combinatorics, summability partial
sums, seeded sampling with digit statistics, and exact ball-measure bounds
for the convolved constructions.
"""

__version__ = "0.1.0"

from .errors import (
    CounterexampleFound,
    EvenPrime,
    GaugeTooSmall,
    InvalidInterval,
    InvalidParameter,
    InvalidRange,
    MoranLabError,
    NoPrimeInWindow,
    NotCoprime,
    NotInSupport,
    NotWellDistributed,
    OutOfRange,
    ScheduleTooShort,
    TailNotCertifiable,
    TooLarge,
)
from .radix import (
    MixedRadixDigits,
    PrimeSchedule,
    base_at,
    build_schedule,
    digits_congruent,
    is_prime,
    next_prime,
    to_digits,
)
from .numtheory import (
    BaseContext,
    Factorization,
    alpha_constant,
    build_context,
    derived_stirling_constants,
    euler_phi,
    integer_J,
    k_of,
    multiplicative_order,
    order_by_crt,
    ord_ratio_check,
    prime_power_order,
    round_threshold,
)
from .rng import CounterRng, derive_seed, value_at
from .fourier import (
    CertifiedModulus,
    MoranSystem,
    binary_system,
    digit_decay_bound,
    mask_modulus,
    mu_hat_modulus,
)
from .distribution import (
    C_bound,
    DigitProjection,
    FiberTable,
    PartitionCertificate,
    block_projection,
    check_peak_bound,
    classify_Bk,
    fiber_counts,
    phi_map,
    pi_map,
    prefix_projection,
    verify_partition,
)
from .delsum import DelReport, block_trend, del_partial, frequency
from .measure import (
    AvoidanceVerdict,
    NormalityReport,
    SamplePoint,
    base_digits,
    normality_report,
    sample_batch,
    sample_point,
    uniqueness_avoidance,
)
from .dimension import (
    ConvolvedSystem,
    GaugeFunction,
    SparseCertificate,
    ball_measure,
    build_convolved,
    h_of_r,
    h_rate_report,
    local_dim_series,
    running_min_after,
    sparse_index_set,
)

__all__ = [
    "__version__",
    "MoranLabError",
    "InvalidParameter",
    "OutOfRange",
    "InvalidRange",
    "ScheduleTooShort",
    "NotCoprime",
    "EvenPrime",
    "NoPrimeInWindow",
    "NotInSupport",
    "InvalidInterval",
    "GaugeTooSmall",
    "NotWellDistributed",
    "TailNotCertifiable",
    "CounterexampleFound",
    "TooLarge",
    "PrimeSchedule",
    "MixedRadixDigits",
    "base_at",
    "build_schedule",
    "to_digits",
    "digits_congruent",
    "is_prime",
    "next_prime",
    "Factorization",
    "BaseContext",
    "build_context",
    "euler_phi",
    "multiplicative_order",
    "prime_power_order",
    "order_by_crt",
    "k_of",
    "integer_J",
    "ord_ratio_check",
    "alpha_constant",
    "derived_stirling_constants",
    "round_threshold",
    "CounterRng",
    "value_at",
    "derive_seed",
    "MoranSystem",
    "binary_system",
    "CertifiedModulus",
    "mask_modulus",
    "mu_hat_modulus",
    "digit_decay_bound",
    "PartitionCertificate",
    "FiberTable",
    "DigitProjection",
    "prefix_projection",
    "block_projection",
    "phi_map",
    "pi_map",
    "verify_partition",
    "fiber_counts",
    "classify_Bk",
    "C_bound",
    "check_peak_bound",
    "DelReport",
    "frequency",
    "del_partial",
    "block_trend",
    "SamplePoint",
    "NormalityReport",
    "AvoidanceVerdict",
    "sample_point",
    "sample_batch",
    "base_digits",
    "normality_report",
    "uniqueness_avoidance",
    "ConvolvedSystem",
    "GaugeFunction",
    "SparseCertificate",
    "build_convolved",
    "h_of_r",
    "sparse_index_set",
    "ball_measure",
    "local_dim_series",
    "running_min_after",
    "h_rate_report",
]
