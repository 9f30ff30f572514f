"""Negativity decay of generalized N-qudit GHZ states under local noise."""

__version__ = "0.1.0"

from .errors import CapacityError, GHZDecayError, InvalidDimensionError, UnsupportedClosedFormError
from .channels import (
    ChannelKind,
    ChannelModel,
    apply_channel,
    apply_channel_twirl,
    choi_matrix,
    clock_matrix,
    shift_matrix,
)
from .ghz import Bipartition, GHZSpec, ghz_density_matrix, make_ghz
from .analytic import (
    CriticalProbability,
    NegativityReport,
    PairBlock,
    asymptote_balanced,
    critical_p_balanced_closed_form,
    critical_p_partition,
    epsilon_scaling_estimate,
    epsilon_threshold,
    lambda_n,
    large_d_epsilon_limit,
    negativity,
    pair_block,
)
from .oracle import evolve, negativity_exact, oracle_critical_p, oracle_negativity, partial_transpose
