"""Transmitter-side amplification mapping and receiver-side energy detection.

The transmitter never generates a waveform of its own.  It conveys bits by
switching the amplification factor applied to whatever jamming it receives:
bit '0' selects ``a1``, bit '1' selects ``a2`` (on-off keying is the special
case ``a1 = 0``).  The receiver integrates per-symbol average energy,
estimates a detection threshold from an alternating preamble and slices.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels, signals
from .errors import DegenerateThresholdError

__all__ = [
    "FrameConfig",
    "ThresholdEstimate",
    "build_preamble",
    "encode_frame",
    "symbol_energies",
    "estimate_threshold",
    "decode",
    "run_link",
]


@dataclass(frozen=True)
class FrameConfig:
    """Frame and alphabet description.

    Attributes
    ----------
    N : int
        Samples integrated per symbol, >= 1.
    M : int
        Preamble length in symbols; even, >= 2.
    a1, a2 : float
        Amplification factors for bits '0' and '1'; 0 <= a1 < a2.
    p1, p2 : float
        Prior probabilities of '0' and '1'; each in (0, 1), summing to 1.
    """

    N: int
    M: int
    a1: float
    a2: float
    p1: float = 0.5
    p2: float = 0.5

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("N must be >= 1")
        if int(self.M) < 2 or int(self.M) % 2:
            raise ValueError("M must be even and >= 2")
        if not 0 <= self.a1 < self.a2:
            raise ValueError("alphabet requires 0 <= a1 < a2")
        if not (0 < self.p1 < 1 and 0 < self.p2 < 1):
            raise ValueError("priors must lie in (0, 1)")
        if abs(self.p1 + self.p2 - 1.0) > 1e-9:
            raise ValueError("priors must sum to 1")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "M", int(self.M))


@dataclass(frozen=True)
class ThresholdEstimate:
    """Estimated energy levels and the threshold mapped from them."""

    q0_hat: float
    q1_hat: float
    t_hat: float


def build_preamble(M):
    """Alternating training bits '1','0','1','0',... of even length M."""
    M = int(M)
    if M < 2 or M % 2:
        raise ValueError("M must be even and >= 2")
    bits = np.zeros(M, dtype=np.int64)
    bits[0::2] = 1
    return bits


def encode_frame(bits, cfg):
    """Per-sample amplification sequence: each bit repeated N times as a1/a2."""
    bits = np.asarray(bits, dtype=np.int64)
    per_symbol = np.where(bits == 0, cfg.a1, cfg.a2)
    return np.repeat(per_symbol, cfg.N)


def symbol_energies(y, N):
    """Average energy of each N-sample symbol: q[m] = mean(|y|^2) over symbol m."""
    y = np.asarray(y)
    N = int(N)
    if y.shape[0] % N:
        raise ValueError(f"block length {y.shape[0]} is not divisible by N={N}")
    e = y.real ** 2 + y.imag ** 2 if np.iscomplexobj(y) else y ** 2
    return e.reshape(-1, N).mean(axis=1)


def _t_ed(x, y, p1, p2, N):
    # threshold mapping for two energy levels 0 < x < y; log form avoids
    # overflow of (y/x)**N at large N
    return (x * y / (y - x)) * (np.log(p1 / p2) / N + np.log(y / x))


def estimate_threshold(preamble_energies, cfg):
    """Estimate the two energy levels and map them to a threshold.

    The preamble alternates starting with '1', so '1'-symbol energies sit at
    even indexes and '0'-symbol energies at odd indexes; each level is the
    mean of its M/2 energies.  The threshold applies the level-to-threshold
    mapping to (min, max) of the two estimates, which keeps the logarithm
    argument positive even when noise swaps their order.

    Raises
    ------
    DegenerateThresholdError
        If the two estimated levels coincide.
    """
    q = np.asarray(preamble_energies, dtype=np.float64)
    if q.shape[0] != cfg.M:
        raise ValueError(f"expected {cfg.M} preamble energies, got {q.shape[0]}")
    q1_hat = float(q[0::2].mean())
    q0_hat = float(q[1::2].mean())
    if q0_hat == q1_hat:
        raise DegenerateThresholdError(
            "estimated energy levels coincide; threshold undefined this block")
    x, y = sorted((q0_hat, q1_hat))
    t_hat = float(_t_ed(x, y, cfg.p1, cfg.p2, cfg.N))
    return ThresholdEstimate(q0_hat=q0_hat, q1_hat=q1_hat, t_hat=t_hat)


def decode(energies, t_hat):
    """Slice energies against the threshold; ties decode to '0'."""
    q = np.asarray(energies, dtype=np.float64)
    return (q > t_hat).astype(np.int64)


def run_link(jam_spec, ch, cfg, payload_bits, rng, sample_offset=0):
    """Run one block: preamble plus payload through one channel draw.

    The jamming block is generated at absolute offset ``sample_offset``
    (minus the JR-path look-back) so tonal waveforms continue smoothly
    across consecutive blocks.  Receiver noise is drawn from ``rng`` after
    the jamming samples.

    Returns
    -------
    (decoded, est, energies)
        Decoded payload bits, the threshold estimate, and the per-symbol
        energies of the whole block (preamble first).

    Raises
    ------
    DegenerateThresholdError
        Propagated from threshold estimation.
    """
    payload_bits = np.asarray(payload_bits, dtype=np.int64)
    if payload_bits.size == 0:
        raise ValueError("payload must be non-empty")
    rng = np.random.default_rng(rng)

    bits = np.concatenate([build_preamble(cfg.M), payload_bits])
    amps_sym = np.where(bits == 0, float(cfg.a1), float(cfg.a2))
    n_tot = bits.shape[0] * cfg.N

    jam = signals.gen_jammer_block(
        jam_spec, n_tot + ch.n_tau, sample_offset - ch.n_tau, rng)
    noise = np.sqrt(ch.sigma2_R / 2.0) * (
        rng.standard_normal(n_tot) + 1j * rng.standard_normal(n_tot))

    q = kernels.compose_energies(jam[ch.n_tau:], jam[:n_tot], noise,
                                 amps_sym, ch.h1 * ch.h2, ch.h3, cfg.N)
    est = estimate_threshold(q[:cfg.M], cfg)
    decoded = decode(q[cfg.M:], est.t_hat)
    return decoded, est, q
