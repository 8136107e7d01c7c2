"""Experiment runner: presets, seeded parallel Monte Carlo sweeps, CSV.

Reproducibility contract: every random draw derives from
``SeedSequence(master_seed, spawn_key=(stream, ...indices))`` where stream 0
feeds per-curve jammer preparation (tone phases, drawn once per
experiment), stream 1 feeds per-block simulation keyed by (axis index,
curve index, block index) and stream 2 feeds baseline trials.  Blocks run
on a thread pool but land in preallocated arrays and are reduced in block
order, so results do not depend on the thread count.
"""

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, capacity as cap, channel, kernels, modem, signals, theory
from .capacity import QuadratureConfig
from .channel import ChannelDraw, RicianParams
from .config import coerce, load_config
from .errors import ConfigError, DegenerateChannelError
from .mc import BerEstimate
from .modem import FrameConfig
from .signals import JammerKind, JammerSpec

__all__ = [
    "Curve",
    "ExperimentConfig",
    "SweepResult",
    "preset_config",
    "config_from_mapping",
    "config_from_file",
    "run_ber_sweep",
    "run_capacity_sweep",
    "emit_csv",
    "read_csv",
    "PRESET_NAMES",
]

_STREAM_PHASES = 0
_STREAM_BLOCKS = 1
_STREAM_BASELINE = 2

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8")

_CONSTANT_ENVELOPE = (JammerKind.MOD_BPSK, JammerKind.MOD_QPSK)


@dataclass(frozen=True)
class Curve:
    """One plotted curve: a jammer, a detector variant, a column label."""

    label: str
    jammer: JammerSpec
    threshold_mode: str = "estimated"

    def __post_init__(self):
        if self.threshold_mode not in ("estimated", "exact"):
            raise ConfigError(
                f"threshold mode must be 'estimated' or 'exact', "
                f"got {self.threshold_mode!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one sweep.

    ``axis_name`` is ``jnr_db`` or ``n`` for BER sweeps and ``jnr_db`` or
    ``p`` for capacity sweeps.  ``rician`` None means fixed unit gains.
    ``snr_curves_db`` only matters in capacity mode (one curve per value;
    the alphabet is a1 = 0, a2 = sqrt(2 P_A), the average-power mapping).
    """

    preset: str
    mode: str
    axis_name: str
    axis_values: tuple
    curves: tuple = ()
    frame: FrameConfig | None = None
    rician: RicianParams | None = None
    sigma2_R: float = 1.0
    n_tau: int = 0
    jnr_db_fixed: float | None = None
    blocks: int = 100
    payload_bits_per_block: int = 1000
    master_seed: int = 12345
    threads: int | None = None
    snr_curves_db: tuple = ()
    capacity_model: str = "real"
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    include_baselines: bool = False
    baseline_eb_n0_db: float = 10.0
    baseline_spread: int = 8

    def __post_init__(self):
        if self.mode not in ("ber", "capacity"):
            raise ConfigError(f"unknown experiment mode {self.mode!r}")
        vals = tuple(float(v) for v in self.axis_values)
        if not vals:
            raise ConfigError("axis values must be non-empty")
        diffs = np.diff(vals)
        if len(vals) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError("axis values must be strictly monotone")
        allowed = ("jnr_db", "n") if self.mode == "ber" else ("jnr_db", "p")
        if self.axis_name not in allowed:
            raise ConfigError(
                f"axis {self.axis_name!r} not valid for {self.mode} mode "
                f"(allowed: {allowed})")
        if self.mode == "ber":
            if not self.curves:
                raise ConfigError("BER sweep needs at least one curve")
            if self.frame is None:
                raise ConfigError("BER sweep needs a frame config")
            if self.axis_name == "n":
                if self.jnr_db_fixed is None:
                    raise ConfigError("sweeping N requires a fixed jammer JNR")
                if any(not float(v).is_integer() or v < 1 for v in vals):
                    raise ConfigError(
                        "window-length axis values must be integers >= 1")
        else:
            if not self.snr_curves_db:
                raise ConfigError("capacity sweep needs at least one SNR value")
            if self.axis_name == "p" and self.jnr_db_fixed is None:
                raise ConfigError("sweeping p requires a fixed jammer JNR")
            if self.capacity_model not in ("real", "complex"):
                raise ConfigError("capacity model must be 'real' or 'complex'")
        if int(self.blocks) < 1 or int(self.payload_bits_per_block) < 1:
            raise ConfigError("blocks and payload_bits_per_block must be >= 1")
        object.__setattr__(self, "axis_values", vals)
        object.__setattr__(self, "blocks", int(self.blocks))
        object.__setattr__(self, "payload_bits_per_block",
                           int(self.payload_bits_per_block))
        object.__setattr__(self, "master_seed", int(self.master_seed))


@dataclass(frozen=True)
class SweepResult:
    """Column-named rows ready for CSV emission plus run metadata."""

    columns: tuple
    rows: tuple
    meta: dict = field(default_factory=dict)


def _resolve_threads(cfg):
    if cfg.threads:
        return max(1, int(cfg.threads))
    env = os.environ.get("JAMLINK_THREADS", "")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"JAMLINK_THREADS={env!r} is not an integer") from exc
    return min(os.cpu_count() or 1, 8)


def _a2_from_snr(snr_db, sigma2_R, mapping, p2=0.5):
    """Map a power knob in dB to the high amplification factor.

    'average': a2 carries the whole average power budget, p2 a2^2 = P_A.
    'on': the ON state itself carries it, a2^2 = P_A.
    """
    p_a = 10.0 ** (snr_db / 10.0) * sigma2_R
    if mapping == "average":
        return math.sqrt(p_a / p2)
    if mapping == "on":
        return math.sqrt(p_a)
    raise ConfigError(f"unknown snr map {mapping!r}")


# ---------------------------------------------------------------------------
# presets


def _ber_preset(preset, axis_name, axis_values, curves, frame, fading=True,
                **kw):
    rician = RicianParams(k_factor=10.0) if fading else None
    return ExperimentConfig(preset=preset, mode="ber", axis_name=axis_name,
                            axis_values=axis_values, curves=curves,
                            frame=frame, rician=rician, **kw)


def _preset_fig2(seed):
    a2 = _a2_from_snr(5.0, 1.0, "average")
    frame = FrameConfig(N=10, M=10, a1=0.0, a2=a2)
    kinds = (JammerKind.SINGLE_TONE, JammerKind.MULTI_TONE,
             JammerKind.NARROWBAND, JammerKind.DET_BROADBAND,
             JammerKind.RANDOM_BROADBAND)
    curves = tuple(Curve(k.value, JammerSpec(kind=k, power=1.0)) for k in kinds)
    return _ber_preset("fig2", "jnr_db", tuple(range(0, 31, 2)), curves, frame,
                       master_seed=seed)


def _preset_fig3(seed):
    a2 = _a2_from_snr(5.0, 1.0, "average")
    frame = FrameConfig(N=10, M=10, a1=0.0, a2=a2)
    kinds = (JammerKind.MOD_BPSK, JammerKind.MOD_QPSK, JammerKind.MOD_16QAM)
    curves = tuple(Curve(k.value, JammerSpec(kind=k, power=1.0)) for k in kinds)
    return _ber_preset("fig3", "jnr_db", tuple(range(0, 31, 2)), curves, frame,
                       master_seed=seed)


def _preset_fig4(seed):
    # Eb/N0 = 10 dB enters through the ON-state power: a2 = sqrt(10)
    frame = FrameConfig(N=8, M=10, a1=0.0, a2=_a2_from_snr(10.0, 1.0, "on"))
    curve = Curve("aaj", JammerSpec(kind=JammerKind.RANDOM_BROADBAND, power=1.0),
                  threshold_mode="exact")
    return _ber_preset("fig4", "jnr_db", tuple(range(0, 41, 5)), (curve,),
                       frame, fading=False, blocks=200,
                       payload_bits_per_block=50_000, include_baselines=True,
                       baseline_eb_n0_db=10.0, baseline_spread=8,
                       master_seed=seed)


def _preset_fig5(seed):
    a2 = _a2_from_snr(5.0, 1.0, "average")
    frame = FrameConfig(N=10, M=10, a1=0.0, a2=a2)
    curve = Curve("random_broadband",
                  JammerSpec(kind=JammerKind.RANDOM_BROADBAND, power=1.0))
    return _ber_preset("fig5", "n", (2, 4, 6, 8, 10, 14, 20, 30, 40, 50),
                       (curve,), frame, jnr_db_fixed=10.0, master_seed=seed)


def _preset_fig6(seed):
    a2 = _a2_from_snr(5.0, 1.0, "average")
    frame = FrameConfig(N=10, M=10, a1=0.0, a2=a2)
    jam = JammerSpec(kind=JammerKind.RANDOM_BROADBAND, power=1.0)
    curves = (Curve("estimated", jam, "estimated"), Curve("exact", jam, "exact"))
    return _ber_preset("fig6", "jnr_db", tuple(range(0, 31, 2)), curves, frame,
                       master_seed=seed)


def _preset_fig7(seed):
    return ExperimentConfig(preset="fig7", mode="capacity", axis_name="p",
                            axis_values=tuple(np.linspace(0.0, 1.0, 101)),
                            snr_curves_db=(0.0, 5.0, 10.0, 20.0),
                            jnr_db_fixed=10.0, capacity_model="real",
                            master_seed=seed)


def _preset_fig8(seed):
    return ExperimentConfig(preset="fig8", mode="capacity", axis_name="jnr_db",
                            axis_values=tuple(np.arange(0.0, 30.0 + 1e-9, 0.25)),
                            snr_curves_db=(10.0,), capacity_model="complex",
                            master_seed=seed)


_PRESETS = {"fig2": _preset_fig2, "fig3": _preset_fig3, "fig4": _preset_fig4,
            "fig5": _preset_fig5, "fig6": _preset_fig6, "fig7": _preset_fig7,
            "fig8": _preset_fig8}


def preset_config(name, seed=None):
    """Build a named preset, optionally overriding the master seed."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    return _PRESETS[name](12345 if seed is None else int(seed))


# ---------------------------------------------------------------------------
# config files


_KNOWN_KEYS = {
    "experiment.preset", "experiment.mode",
    "axis.name", "axis.values",
    "jammer.kind", "jammer.jnr_db",
    "frame.n", "frame.m", "frame.a1", "frame.a2", "frame.p1",
    "snr.db", "snr.map",
    "channel.fading", "channel.k_factor", "channel.n_tau",
    "noise.sigma2",
    "run.blocks", "run.payload_bits_per_block", "run.master_seed",
    "run.threads",
    "threshold.mode",
    "capacity.model", "capacity.points", "capacity.half_width_sigmas",
    "capacity.snr_db",
    "baselines.enabled", "baselines.eb_n0_db", "baselines.spread_factor",
}


def config_from_mapping(raw):
    """Build an ExperimentConfig from parsed config-file keys."""
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def get(key, kind, default=None):
        if key not in raw:
            return default
        return coerce(raw[key], kind, key)

    seed = get("run.master_seed", "int")
    if "experiment.preset" in raw:
        cfg = preset_config(raw["experiment.preset"], seed=seed)
        return _apply_overrides(cfg, raw, get)

    mode = get("experiment.mode", "str", "ber")
    axis_name = get("axis.name", "str", "jnr_db")
    axis_raw = get("axis.values", "list")
    if not axis_raw:
        raise ConfigError("axis.values is required for custom experiments")
    axis_values = tuple(float(v) for v in axis_raw)
    sigma2 = get("noise.sigma2", "float", 1.0)
    n_tau = get("channel.n_tau", "int", 0)
    fading = get("channel.fading", "bool", True)
    rician = RicianParams(k_factor=get("channel.k_factor", "float", 10.0)) \
        if fading else None
    common = dict(
        preset="custom", mode=mode, axis_name=axis_name,
        axis_values=axis_values, rician=rician, sigma2_R=sigma2, n_tau=n_tau,
        jnr_db_fixed=get("jammer.jnr_db", "float"),
        blocks=get("run.blocks", "int", 100),
        payload_bits_per_block=get("run.payload_bits_per_block", "int", 1000),
        master_seed=12345 if seed is None else seed,
        threads=get("run.threads", "int"),
        capacity_model=get("capacity.model", "str", "real"),
        quad=_quad_from(get), include_baselines=get("baselines.enabled", "bool", False),
        baseline_eb_n0_db=get("baselines.eb_n0_db", "float", 10.0),
        baseline_spread=get("baselines.spread_factor", "int", 8))

    if mode == "capacity":
        snrs = get("capacity.snr_db", "list") or ["10"]
        return ExperimentConfig(snr_curves_db=tuple(float(s) for s in snrs),
                                **common)

    p1 = get("frame.p1", "float", 0.5)
    a2 = get("frame.a2", "float")
    if a2 is None:
        snr_db = get("snr.db", "float")
        if snr_db is None:
            raise ConfigError("either frame.a2 or snr.db must be set")
        a2 = _a2_from_snr(snr_db, sigma2, get("snr.map", "str", "average"),
                          p2=1.0 - p1)
    frame = FrameConfig(N=get("frame.n", "int", 10), M=get("frame.m", "int", 10),
                        a1=get("frame.a1", "float", 0.0), a2=a2,
                        p1=p1, p2=1.0 - p1)
    kinds = get("jammer.kind", "list") or ["random_broadband"]
    tmode = get("threshold.mode", "str", "estimated")
    curves = tuple(Curve(k, JammerSpec(kind=JammerKind.parse(k), power=1.0),
                         threshold_mode=tmode) for k in kinds)
    return ExperimentConfig(curves=curves, frame=frame, **common)


def _quad_from(get):
    return QuadratureConfig(
        half_width_sigmas=get("capacity.half_width_sigmas", "float", 12.0),
        points=get("capacity.points", "int", 4001))


def _apply_overrides(cfg, raw, get):
    """Limited overrides on top of a preset: run sizes, axis, threshold."""
    consumed = {"experiment.preset", "run.master_seed"}
    updates = {}
    for key, attr, kind in (("run.blocks", "blocks", "int"),
                            ("run.payload_bits_per_block",
                             "payload_bits_per_block", "int"),
                            ("run.threads", "threads", "int"),
                            ("noise.sigma2", "sigma2_R", "float")):
        if key in raw:
            updates[attr] = get(key, kind)
            consumed.add(key)
    if "axis.values" in raw:
        updates["axis_values"] = tuple(float(v)
                                       for v in get("axis.values", "list"))
        consumed.add("axis.values")
    if "threshold.mode" in raw and cfg.mode == "ber":
        tmode = get("threshold.mode", "str")
        updates["curves"] = tuple(replace(c, threshold_mode=tmode)
                                  for c in cfg.curves)
        consumed.add("threshold.mode")
    if "frame.n" in raw and cfg.frame is not None:
        updates["frame"] = replace(cfg.frame, N=get("frame.n", "int"))
        consumed.add("frame.n")
    leftover = set(raw) - consumed
    if leftover:
        raise ConfigError(
            f"keys not overridable on a preset: {sorted(leftover)}")
    return replace(cfg, **updates) if updates else cfg


def config_from_file(path):
    return config_from_mapping(load_config(path))


# ---------------------------------------------------------------------------
# BER sweep


def _axis_point(cfg, value):
    """Resolve (P_J, frame) for one axis value."""
    if cfg.axis_name == "jnr_db":
        return 10.0 ** (value / 10.0) * cfg.sigma2_R, cfg.frame
    n = int(round(value))
    if n < 1:
        raise ConfigError(f"axis value N={value} is not a positive symbol length")
    pj = 10.0 ** (cfg.jnr_db_fixed / 10.0) * cfg.sigma2_R
    return pj, replace(cfg.frame, N=n)


def _spec_at_power(prepared, pj):
    """Rescale a prepared (phase-frozen) jammer spec to power pj."""
    if prepared.toneset is None:
        return replace(prepared, power=pj)
    ts = prepared.toneset
    scaled = signals.ToneSet(amps=ts.amps * math.sqrt(pj), freqs=ts.freqs,
                             phases=ts.phases)
    return replace(prepared, power=pj, toneset=scaled)


def _draw_block_channel(cfg, rng):
    if cfg.rician is None:
        return ChannelDraw(h1=1.0, h2=1.0, h3=1.0, sigma2_R=cfg.sigma2_R,
                           n_tau=cfg.n_tau)
    return channel.draw_channel(cfg.rician, cfg.sigma2_R, cfg.n_tau, rng)


def _det_levels(spec, ch, frame, n_tot, offset):
    """Block-averaged deterministic energy levels for a tonal jammer."""
    s = signals.gen_tone_sum(spec.toneset, n_tot, offset)
    s_del = signals.gen_tone_sum(spec.toneset, n_tot, offset - ch.n_tau) \
        if ch.n_tau else s
    h12 = ch.h1 * ch.h2
    e1 = float(np.mean(np.abs(h12 * frame.a1 * s + ch.h3 * s_del) ** 2))
    e2 = float(np.mean(np.abs(h12 * frame.a2 * s + ch.h3 * s_del) ** 2))
    return e1, e2


def _envelope_levels(spec, ch, frame):
    """Exact per-symbol energy levels for constant-envelope modulated jamming."""
    h12 = ch.h1 * ch.h2
    e1 = abs(h12 * frame.a1 + ch.h3) ** 2 * spec.power
    e2 = abs(h12 * frame.a2 + ch.h3) ** 2 * spec.power
    return float(e1), float(e2)


def _exact_threshold(spec, ch, frame, pj, n_tot, offset):
    """Detection threshold from true per-block quantities (no preamble)."""
    kind = spec.kind
    if kind is JammerKind.RANDOM_BROADBAND or kind is JammerKind.MOD_16QAM:
        v = theory.variances(ch, frame.a1, frame.a2, pj)
        return theory.optimal_threshold_random(v, frame.p1, frame.p2, frame.N)
    if kind in _CONSTANT_ENVELOPE:
        lo, hi = sorted(_envelope_levels(spec, ch, frame))
        d = theory.DeterministicEnergies(qd_1=lo, qd_2=hi, sigma2_R=ch.sigma2_R)
        return theory.refine_threshold_det(d, frame.p1, frame.p2, frame.N,
                                           ber_fn=theory.ber_det_noncentral)
    lo, hi = sorted(_det_levels(spec, ch, frame, n_tot, offset))
    d = theory.DeterministicEnergies(qd_1=lo, qd_2=hi, sigma2_R=ch.sigma2_R)
    return theory.refine_threshold_det(d, frame.p1, frame.p2, frame.N)


def _theory_columns(spec, ch, frame, pj, n_tot, offset):
    """(ber_theory, ber_gauss, sinr) predictions for one block."""
    kind = spec.kind
    try:
        if kind is JammerKind.RANDOM_BROADBAND:
            v = theory.variances(ch, frame.a1, frame.a2, pj)
            t = theory.optimal_threshold_random(v, frame.p1, frame.p2, frame.N)
            return (theory.ber_random(v, frame.p1, frame.p2, frame.N, t),
                    theory.ber_gaussian_approx(v, frame.p1, frame.p2, frame.N, t),
                    channel.sinr(ch, frame.a2, pj, True))
        if kind in _CONSTANT_ENVELOPE:
            lo, hi = sorted(_envelope_levels(spec, ch, frame))
            d = theory.DeterministicEnergies(qd_1=lo, qd_2=hi,
                                             sigma2_R=ch.sigma2_R)
            t = theory.refine_threshold_det(d, frame.p1, frame.p2, frame.N,
                                            ber_fn=theory.ber_det_noncentral)
            return (theory.ber_det_noncentral(d, frame.p1, frame.p2, frame.N, t),
                    math.nan, channel.sinr(ch, frame.a2, pj, True))
        if kind is JammerKind.MOD_16QAM:
            # no closed form for the envelope mixture; simulate only
            return (math.nan, math.nan, channel.sinr(ch, frame.a2, pj, True))
        lo, hi = sorted(_det_levels(spec, ch, frame, n_tot, offset))
        d = theory.DeterministicEnergies(qd_1=lo, qd_2=hi, sigma2_R=ch.sigma2_R)
        t = theory.refine_threshold_det(d, frame.p1, frame.p2, frame.N)
        return (theory.ber_det(d, frame.p1, frame.p2, frame.N, t),
                math.nan, channel.sinr(ch, frame.a2, pj, False))
    except (DegenerateChannelError, ValueError):
        return math.nan, math.nan, math.nan


def _run_ber_block(cfg, spec, curve, frame, pj, axis_i, curve_i, block_i):
    """Simulate one block; returns (errors, ber_theory, ber_gauss, sinr)."""
    ss = np.random.SeedSequence(cfg.master_seed,
                                spawn_key=(_STREAM_BLOCKS, axis_i, curve_i,
                                           block_i))
    rng = np.random.default_rng(ss)
    ch = _draw_block_channel(cfg, rng)
    nbits = cfg.payload_bits_per_block
    payload = (rng.random(nbits) < frame.p2).astype(np.int64)

    if curve.threshold_mode == "estimated":
        block_syms = frame.M + nbits
        offset = block_i * block_syms * frame.N
        decoded, _, _ = modem.run_link(spec, ch, frame, payload, rng,
                                       sample_offset=offset)
    else:
        n_tot = nbits * frame.N
        offset = block_i * n_tot
        amps_sym = np.where(payload == 0, float(frame.a1), float(frame.a2))
        jam = signals.gen_jammer_block(spec, n_tot + ch.n_tau,
                                       offset - ch.n_tau, rng)
        noise = math.sqrt(ch.sigma2_R / 2.0) * (
            rng.standard_normal(n_tot) + 1j * rng.standard_normal(n_tot))
        q = kernels.compose_energies(jam[ch.n_tau:], jam[:n_tot], noise,
                                     amps_sym, ch.h1 * ch.h2, ch.h3, frame.N)
        t_hat = _exact_threshold(spec, ch, frame, pj, n_tot, offset)
        decoded = modem.decode(q, t_hat)

    errors = int(np.count_nonzero(decoded != payload))
    th, ga, s = _theory_columns(spec, ch, frame, pj,
                                nbits * frame.N, block_i * nbits * frame.N)
    return errors, th, ga, s


def _run_baseline_point(cfg, scheme_i, axis_i, jnr_db, trials):
    ss = np.random.SeedSequence(cfg.master_seed,
                                spawn_key=(_STREAM_BASELINE, axis_i, scheme_i))
    rng = np.random.default_rng(ss)
    bl_cfg = baselines.BaselineConfig(
        scheme=(baselines.BaselineScheme.DSSS if scheme_i == 0
                else baselines.BaselineScheme.FH),
        eb_n0_db=cfg.baseline_eb_n0_db, spread_factor=cfg.baseline_spread)
    fn = baselines.dsss_ber_mc if scheme_i == 0 else baselines.fh_ber_mc
    return fn(bl_cfg, jnr_db, trials, rng)


_CURVE_FIELDS = ("errors", "bits", "ber_sim", "ci_low", "ci_high",
                 "ber_theory", "ber_gauss", "sinr")
_BASELINE_FIELDS = ("ber_sim", "ci_low", "ci_high")


def run_ber_sweep(cfg, progress=None):
    """Run a BER sweep; returns one row per axis value, wide columns.

    Per curve the columns are ``<label>.errors/bits/ber_sim/ci_low/ci_high/
    ber_theory/ber_gauss/sinr``; theory columns are block-averaged closed
    forms evaluated at per-block optimal thresholds and are NaN where no
    closed form applies.  With baselines enabled, ``dsss.*``/``fh.*``
    column groups are appended.
    """
    if cfg.mode != "ber":
        raise ConfigError("run_ber_sweep needs a BER-mode config")
    threads = _resolve_threads(cfg)
    prepared = []
    for curve_i, curve in enumerate(cfg.curves):
        ss = np.random.SeedSequence(cfg.master_seed,
                                    spawn_key=(_STREAM_PHASES, curve_i))
        base = replace(curve.jammer, power=1.0)
        prepared.append(signals.prepare_jammer(base, np.random.default_rng(ss)))

    columns = [cfg.axis_name]
    for curve in cfg.curves:
        columns += [f"{curve.label}.{f}" for f in _CURVE_FIELDS]
    if cfg.include_baselines:
        for name in ("dsss", "fh"):
            columns += [f"{name}.{f}" for f in _BASELINE_FIELDS]

    rows = []
    bits_per_point = cfg.blocks * cfg.payload_bits_per_block
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for axis_i, value in enumerate(cfg.axis_values):
            pj, frame = _axis_point(cfg, value)
            row = [value if cfg.axis_name != "n" else int(round(value))]
            for curve_i, curve in enumerate(cfg.curves):
                spec = _spec_at_power(prepared[curve_i], pj)
                futures = [
                    pool.submit(_run_ber_block, cfg, spec, curve, frame, pj,
                                axis_i, curve_i, block_i)
                    for block_i in range(cfg.blocks)]
                out = np.array([f.result() for f in futures], dtype=np.float64)
                errors = int(out[:, 0].sum())
                est = BerEstimate.from_counts(errors, bits_per_point)
                row += [est.errors, est.bits, est.ber, est.ci_low, est.ci_high,
                        float(out[:, 1].mean()), float(out[:, 2].mean()),
                        float(out[:, 3].mean())]
                if progress:
                    progress(f"{cfg.axis_name}={value:g} {curve.label}: "
                             f"ber={est.ber:.3e} ({est.bits} bits)")
            if cfg.include_baselines:
                trials = max(bits_per_point, 1000)
                futures = [pool.submit(_run_baseline_point, cfg, s, axis_i,
                                       value, trials) for s in (0, 1)]
                for name, fut in zip(("dsss", "fh"), futures):
                    est = fut.result()
                    row += [est.ber, est.ci_low, est.ci_high]
                    if progress:
                        progress(f"{cfg.axis_name}={value:g} {name}: "
                                 f"ber={est.ber:.3e}")
            rows.append(tuple(row))
    return SweepResult(columns=tuple(columns), rows=tuple(rows),
                       meta={"preset": cfg.preset, "mode": "ber",
                             "backend": kernels.BACKEND})


# ---------------------------------------------------------------------------
# capacity sweep


def _capacity_variances(cfg, snr_db, pj):
    p_a = 10.0 ** (snr_db / 10.0) * cfg.sigma2_R
    a2 = math.sqrt(2.0 * p_a)
    d1 = pj + cfg.sigma2_R
    d2 = (a2 + 1.0) ** 2 * pj + cfg.sigma2_R
    return theory.ConditionalVariances(d1, d2), p_a


def run_capacity_sweep(cfg, progress=None):
    """Capacity vs JNR (with the DT baseline) or mutual information vs p.

    Unit channel gains and the average-power alphabet mapping throughout;
    ``capacity_model`` picks the real or complex output model.
    """
    if cfg.mode != "capacity":
        raise ConfigError("run_capacity_sweep needs a capacity-mode config")
    meta = {"preset": cfg.preset, "mode": "capacity",
            "model": cfg.capacity_model}

    if cfg.axis_name == "p":
        pj = 10.0 ** (cfg.jnr_db_fixed / 10.0) * cfg.sigma2_R
        labels = [f"snr_{s:g}db" for s in cfg.snr_curves_db]
        columns = ["p"] + [f"mi.{lab}" for lab in labels]
        curves = [_capacity_variances(cfg, s, pj)[0] for s in cfg.snr_curves_db]
        rows = []
        for value in cfg.axis_values:
            row = [value] + [cap.mutual_information(value, v, cfg.quad,
                                                    cfg.capacity_model)
                             for v in curves]
            rows.append(tuple(row))
        peaks = {}
        for lab, v in zip(labels, curves):
            res = cap.capacity(v, cfg.quad, cfg.capacity_model)
            peaks[lab] = {"p_star": res.p_star,
                          "capacity_bits": res.capacity_bits}
            if progress:
                progress(f"{lab}: p*={res.p_star:.4f} "
                         f"C={res.capacity_bits:.4f} bits")
        meta["peaks"] = peaks
        return SweepResult(columns=tuple(columns), rows=tuple(rows), meta=meta)

    snr_db = cfg.snr_curves_db[0]
    columns = ("jnr_db", "aaj_capacity_bits", "aaj_p_star", "dt_capacity_bits")
    rows = []
    for value in cfg.axis_values:
        pj = 10.0 ** (value / 10.0) * cfg.sigma2_R
        v, p_a = _capacity_variances(cfg, snr_db, pj)
        res = cap.capacity(v, cfg.quad, cfg.capacity_model)
        dt = cap.dt_capacity(p_a, pj, cfg.sigma2_R)
        rows.append((value, res.capacity_bits, res.p_star, dt))
        if progress:
            progress(f"jnr_db={value:g}: aaj={res.capacity_bits:.4f} "
                     f"dt={dt:.4f}")
    meta["crossover_jnr_db"] = _find_crossover(rows)
    return SweepResult(columns=columns, rows=tuple(rows), meta=meta)


def _find_crossover(rows):
    """First JNR where the AAJ capacity meets the DT curve, interpolated."""
    gap = [r[1] - r[3] for r in rows]
    for i in range(1, len(gap)):
        if gap[i - 1] < 0 <= gap[i]:
            x0, x1 = rows[i - 1][0], rows[i][0]
            g0, g1 = gap[i - 1], gap[i]
            return x0 + (x1 - x0) * (-g0) / (g1 - g0)
    return math.nan


# ---------------------------------------------------------------------------
# CSV


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_csv(result, path):
    """Write a sweep as ``# schema=1`` plus an RFC-4180 body, LF endings."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# schema=1\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(result.columns)
            for row in result.rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Read an emitted CSV back into {column: list of floats (or strings)}."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if not first.startswith("# schema="):
            raise ValueError(f"{path}: missing schema line")
        reader = csv.reader(fh)
        columns = next(reader)
        data = {c: [] for c in columns}
        for row in reader:
            for c, v in zip(columns, row):
                try:
                    data[c].append(float(v))
                except ValueError:
                    data[c].append(v)
    return data
