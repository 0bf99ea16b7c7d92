"""Monte Carlo secrecy-performance simulator for full-duplex relay networks.

Evaluates secrecy capacity and secrecy outage probability (SOP) of
physical-layer-security schemes built around full-duplex amplify-and-forward
relays: plain HD/FD relaying, hybrid mode switching, relay-assisted jamming,
multi-relay selection and idealized zero-forcing beamforming, and a
source-based jamming scheme for an untrusted full-duplex relay.
"""

from .channel import (
    ChannelRealization,
    LinkBudget,
    RandomStream,
    db_to_linear,
    linear_to_db,
    sample_exponential,
    sample_realization,
)
from .secrecy import (
    SecrecySample,
    TargetRate,
    capacity,
    direct_wiretap_sop_oracle,
    outage_indicator,
    secrecy_capacity,
)
from .single_relay import (
    SbjParams,
    SchemeId,
    fdj_evaluate,
    fdr_evaluate,
    hdr_evaluate,
    hybrid_hd_fd_evaluate,
    sbj_evaluate,
    sbj_sinrs,
)
from .multi_relay import (
    MultiRelayRealization,
    SelectionResult,
    beamforming_idealized,
    select_hybrid,
    select_max_min,
    select_optimal_fd,
    select_optimal_hd,
    select_random,
)
from .montecarlo import (
    EstimatorConfig,
    SchemeSpec,
    SopEstimate,
    estimate_sop,
    estimate_sop_crn,
    wilson_interval,
)
from .experiments import (
    DEFAULT_SEED,
    OutputRow,
    SweepSpec,
    optimize_alpha,
    preset,
    run_sweep,
)

__version__ = "0.1.0"
