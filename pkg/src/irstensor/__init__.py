"""Semi-blind joint channel and symbol estimation for IRS-assisted MIMO
links via tensor decompositions: alternating-LS and two-stage receivers,
joint coding/phase-shift design, Cramér-Rao bounds, Monte Carlo harness."""

from .channels import (
    ArrayGeometry,
    ChannelSet,
    draw_channels,
    geometric_channel_pair,
    rayleigh_channel,
    steering_vector,
)
from .coding import (
    CodingDesign,
    build_design,
    build_dft_design,
    build_psi_dft,
    build_random_phase,
    factor_psi,
    is_semi_unitary,
    split_design,
    stage1_coding,
)
from .config import SystemConfig, load_config, parse_config_text, preset
from .crb import crb_trace_irs_bs, crb_trace_ut_irs, crb_traces, expected_crb, fim_blocks
from .harness import ExperimentRecord, mix_seed, nmse, run_experiment, ser, summarize
from .receivers import (
    IdentifiabilityReport,
    ReceiverResult,
    TalsOptions,
    check_identifiability,
    demodulate,
    etals,
    krf,
    remove_scaling_ambiguity,
    tals,
)
from .signals import (
    add_noise,
    composite_tensor,
    direct_link_tensor,
    draw_symbols,
    paratuck_tensor,
    psk_constellation,
)

__version__ = "0.1.0"
