"""Entanglement entropies, QMI-based ordering costs and ordering search for small chains."""

from .cost import (
    CostInputs,
    CostReport,
    cost_report,
    i_block,
    i_hat,
    i_hat_j,
    i_mps,
    i_mps_check,
    i_tree,
    idist,
    main_bound,
    weights,
)
from .entropy import (
    EntropyProfile,
    QmiMatrix,
    block_entropy,
    block_qmi,
    entropy,
    entropy_of_density,
    entropy_profile,
    qmi,
    qmi_matrix,
    relative_entropy,
    simbound,
    single_site_entropies,
)
from .models import HamiltonianSpec, make_ground_state
from .optimize import (
    AnnealConfig,
    Objective,
    OrderingReport,
    anneal,
    cost_of_ordering,
    exhaustive,
    two_opt,
)
from .states import (
    BudgetError,
    DenseState,
    DensityMatrix,
    MatrixProductState,
    SchmidtSpectrum,
    TruncationProfile,
    make_ghz,
    make_product_state,
    make_random_mps,
    make_slater,
    make_w,
    permute_sites,
    reduced_density,
    schmidt,
    to_mps,
    truncation_profile,
)

__version__ = "0.1.0"
