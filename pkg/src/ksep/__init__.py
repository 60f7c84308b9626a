"""Detect non-k-separability of Dicke-class and N-qudit W-class states from density matrix elements."""

from .criteria import (
    CriterionReport,
    IndexSets1,
    IndexSets2,
    evaluate_criterion1,
    evaluate_criterion2,
    index_sets_criterion1,
    index_sets_criterion2,
)
from .noise import (
    delta,
    gamma,
    noise_threshold_dicke,
    noise_threshold_qudit_w,
    sweep_curves,
)
from .partitions import (
    Partition,
    count_partitions_formula,
    enumerate_partitions,
    random_k_separable_state,
)
from .states import (
    DensityMatrix,
    MalformedStateError,
    PureState,
    anti_w_state,
    dicke_state,
    element,
    one_based_index,
    qudit_w_state,
    white_noise_mixture,
)

__version__ = "0.1.0"
