"""Robust generalized CRT for two integers from unordered, erroneous residue sets.

The library reconstructs an unordered pair of integers from per-modulus
remainder pairs where the pairing between remainders and integers is unknown
and the remainders themselves may be perturbed.  It also ships the supporting
dynamic-range analysis, reference estimators, a two-tone undersampling
simulator, and a Monte-Carlo experiment harness with a CLI.
"""

from .baselines import (
    FoldingSolution,
    nonrobust_estimate,
    searching_estimate,
    searching_solution,
)
from .dynrange import (
    DynamicRangeReport,
    dynamic_range_coprime,
    dynamic_range_gcd,
    tightness_counterexample,
    verify_dynamic_range,
)
from .errors import (
    AmbiguousResiduesError,
    ClusterMembershipError,
    InconsistentResiduesError,
    ReconstructionError,
)
from .gcrt2 import IntegerPair, ResidueFamily, solve_two_coprime, solve_two_gcd
from .harness import (
    ESTIMATORS,
    ExperimentConfig,
    ResultRow,
    SweepResult,
    TrialRecord,
    emit_results,
    frequency_bound,
    matched_errors,
    run_snr_sweep,
    run_tau_sweep,
)
from .modmath import (
    ModulusSet,
    circular_distance,
    common_remainder,
    crt_single,
    crt_single_noncoprime,
    round_half_up,
)
from .robust import (
    ClusterDecomposition,
    Estimate2,
    cluster_means,
    decompose,
    form_clusters,
    gaps,
    recover_quotients,
    robust_reconstruct,
    sort_common_remainders,
    split_index,
)
from .sigsim import (
    DetectionResult,
    ToneSpec,
    detect_residues,
    extract_family,
    synthesize_samples,
)

__version__ = "0.1.0"
