"""Uplink spectral efficiency of massive MIMO with low-resolution ADCs.

The package pairs an exact Monte Carlo simulator (per-realization SINR of
quantization-aware linear receivers under the additive quantization noise
model) with the matching large-system closed form, so each side validates
the other.  See the README for the experiment runner and file formats.
"""

__version__ = "0.1.0"

from .aqnm import (
    INFINITE,
    AdcProfile,
    QuantNoiseCov,
    apply_aqnm,
    avg_quant_noise_cov,
    gain_matrix,
    quant_noise_cov,
    rho_for_bits,
)
from .channel import (
    CellConfig,
    ChannelRealization,
    LargeScaleProfile,
    draw_channel,
    generate_large_scale,
)
from .detequiv import (
    ConvergenceError,
    DetEqReport,
    DetEqState,
    asymptotic_report,
    gammas_and_rates,
    solve_gamma1,
    solve_sprime,
)
from .montecarlo import (
    AverageOverDrops,
    ComparisonRecord,
    ExplicitBits,
    FixedDrop,
    McEstimate,
    PowerMode,
    RandomBits,
    SystemConfig,
    UniformBits,
    compare_reports,
    resolve_drops,
    run_monte_carlo,
)
from .receiver import (
    RateReport,
    ReceivedSample,
    ReceiverContext,
    ReceiverKind,
    SinrBreakdown,
    build_receiver,
    draw_received_sample,
    noise_shaping_diag,
    rates,
    sinr_breakdown,
)

__all__ = [
    "INFINITE",
    "AdcProfile",
    "AverageOverDrops",
    "CellConfig",
    "ChannelRealization",
    "ComparisonRecord",
    "ConvergenceError",
    "DetEqReport",
    "DetEqState",
    "ExplicitBits",
    "FixedDrop",
    "LargeScaleProfile",
    "McEstimate",
    "PowerMode",
    "QuantNoiseCov",
    "RandomBits",
    "RateReport",
    "ReceivedSample",
    "ReceiverContext",
    "ReceiverKind",
    "SinrBreakdown",
    "SystemConfig",
    "UniformBits",
    "apply_aqnm",
    "asymptotic_report",
    "avg_quant_noise_cov",
    "build_receiver",
    "compare_reports",
    "draw_channel",
    "draw_received_sample",
    "gain_matrix",
    "gammas_and_rates",
    "generate_large_scale",
    "noise_shaping_diag",
    "quant_noise_cov",
    "rates",
    "resolve_drops",
    "rho_for_bits",
    "run_monte_carlo",
    "sinr_breakdown",
    "solve_gamma1",
    "solve_sprime",
]
