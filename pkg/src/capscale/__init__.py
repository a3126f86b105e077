"""Product-state capacities and rate scales for qubit channels with memory."""

from .channels import (
    MemoryChannel,
    QubitChannel,
    apply_memory_channel_n,
    apply_qubit_channel,
    kraus_operators,
)
from .errors import NumericalError, ValidationError
from .holevo import (
    Ensemble,
    MirrorPair,
    average_output,
    chi_ad_mirror,
    chi_mirror_family,
    dchi_da_ad,
    holevo_quantity,
)
from .linalg import binary_entropy, herm_eigenvalues, von_neumann_entropy
from .optim import (
    OptResult,
    brute_force_ensemble_search,
    find_root_bisection,
    maximize_chi_min,
    maximize_chi_sum,
    maximize_concave_1d,
)
from .scales import (
    BranchSupremum,
    CapacityReport,
    RandomScaleReport,
    ScaleEntry,
    StaircaseStep,
    SubsetScale,
    capacity_periodic,
    cbar_periodic,
    chi_star_avg_pair,
    compute_capacity_report,
    compute_random_scale_report,
    pair_capacity,
    per_branch_suprema,
    random_scale,
    scale_r,
    staircase_profile,
    subset_scale_value,
)
from .simulate import (
    SimResult,
    StaircaseRow,
    Strategy,
    TrialRecord,
    empirical_staircase,
    run_trials,
    staircase_csv,
    success_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "MemoryChannel",
    "QubitChannel",
    "apply_memory_channel_n",
    "apply_qubit_channel",
    "kraus_operators",
    "NumericalError",
    "ValidationError",
    "Ensemble",
    "MirrorPair",
    "average_output",
    "chi_ad_mirror",
    "chi_mirror_family",
    "dchi_da_ad",
    "holevo_quantity",
    "binary_entropy",
    "herm_eigenvalues",
    "von_neumann_entropy",
    "OptResult",
    "brute_force_ensemble_search",
    "find_root_bisection",
    "maximize_chi_min",
    "maximize_chi_sum",
    "maximize_concave_1d",
    "BranchSupremum",
    "CapacityReport",
    "RandomScaleReport",
    "ScaleEntry",
    "StaircaseStep",
    "SubsetScale",
    "capacity_periodic",
    "cbar_periodic",
    "chi_star_avg_pair",
    "compute_capacity_report",
    "compute_random_scale_report",
    "pair_capacity",
    "per_branch_suprema",
    "random_scale",
    "scale_r",
    "staircase_profile",
    "subset_scale_value",
    "SimResult",
    "StaircaseRow",
    "Strategy",
    "TrialRecord",
    "empirical_staircase",
    "run_trials",
    "staircase_csv",
    "success_oracle",
    "__version__",
]
