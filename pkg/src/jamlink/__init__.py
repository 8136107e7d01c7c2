"""jamlink: baseband link simulator and analysis toolkit for
jamming-modulation transmission with energy detection.

The transmitter conveys bits by switching the amplification applied to an
incident jamming waveform; the receiver decodes from per-symbol average
energy.  This package simulates that link over Rician block fading for
every jamming family of interest, and cross-validates the Monte Carlo
error rates against closed-form chi-square BER, optimal-threshold,
asymptotic and binary-input capacity expressions.

Modules
-------
signals
    Jamming waveform generators (Gaussian, tones, modulated).
channel
    Rician fading draws, received-signal composition, SINR.
modem
    Amplification encoder, energy detector, threshold estimation.
theory
    Closed-form BER, thresholds, energy laws, asymptotics.
capacity
    Binary-input mutual information, capacity, DT baseline.
baselines
    DS-SS and FH Monte Carlo references under fullband jamming.
harness
    Config-driven sweep runner, presets fig2..fig8, CSV emission.
kernels
    Numba-accelerated hot loops with a numpy fallback
    (set JAMLINK_NO_NUMBA=1 to force the fallback).
"""

from . import baselines, capacity, channel, config, harness, kernels, modem, signals, theory
from .baselines import BaselineConfig, BaselineScheme, dsss_ber_mc, fh_ber_mc
from .capacity import (CapacityResult, QuadratureConfig, dt_capacity,
                       mutual_information)
from .capacity import capacity as channel_capacity
from .capacity import mi_derivative
from .channel import ChannelDraw, RicianParams, compose_received, draw_channel, sinr
from .errors import (ConfigError, DegenerateChannelError,
                     DegenerateThresholdError, JamlinkError,
                     NumericalFailureError, UnboundedLimitError)
from .harness import (Curve, ExperimentConfig, SweepResult, config_from_file,
                      emit_csv, preset_config, run_ber_sweep,
                      run_capacity_sweep)
from .mc import BerEstimate, wilson_interval
from .modem import (FrameConfig, ThresholdEstimate, build_preamble, decode,
                    encode_frame, estimate_threshold, run_link,
                    symbol_energies)
from .signals import (JammerKind, JammerSpec, ToneSet, average_power,
                      gen_cscg, gen_modulated, gen_tone_sum, make_toneset,
                      prepare_jammer)
from .theory import (ConditionalVariances, DeterministicEnergies,
                     ber_det, ber_det_noncentral, ber_gaussian_approx,
                     ber_general, ber_random, delta2, energy_pdf_random,
                     optimal_threshold_det, optimal_threshold_random, q_det,
                     refine_threshold_det, sinr_limit, variances)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # modules
    "signals", "channel", "modem", "theory", "capacity", "baselines",
    "harness", "kernels", "config",
    # errors
    "JamlinkError", "DegenerateThresholdError", "DegenerateChannelError",
    "UnboundedLimitError", "NumericalFailureError", "ConfigError",
    # signals
    "JammerKind", "JammerSpec", "ToneSet", "gen_cscg", "make_toneset",
    "gen_tone_sum", "gen_modulated", "average_power", "prepare_jammer",
    # channel
    "RicianParams", "ChannelDraw", "draw_channel", "compose_received", "sinr",
    # modem
    "FrameConfig", "ThresholdEstimate", "build_preamble", "encode_frame",
    "symbol_energies", "estimate_threshold", "decode", "run_link",
    # theory
    "ConditionalVariances", "DeterministicEnergies", "delta2", "variances",
    "energy_pdf_random", "optimal_threshold_random", "ber_random", "q_det",
    "ber_det", "ber_det_noncentral", "optimal_threshold_det",
    "refine_threshold_det", "ber_general", "ber_gaussian_approx", "sinr_limit",
    # capacity
    "QuadratureConfig", "CapacityResult", "mutual_information",
    "mi_derivative", "channel_capacity", "dt_capacity",
    # baselines
    "BaselineScheme", "BaselineConfig", "dsss_ber_mc", "fh_ber_mc",
    # mc
    "BerEstimate", "wilson_interval",
    # harness
    "Curve", "ExperimentConfig", "SweepResult", "preset_config",
    "config_from_file", "run_ber_sweep", "run_capacity_sweep", "emit_csv",
]
