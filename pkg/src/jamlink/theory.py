"""Closed-form detection performance: energy laws, BER, thresholds, limits.

Under random broadband (CSCG) jamming the per-symbol average energy is
gamma-distributed with shape N and mean delta2_k, the conditional variance
of a received sample given symbol k.  Under deterministic (tone) jamming the
energy concentrates around a computable deterministic part qd_k with only
receiver noise spreading it.  Everything here is a pure function; the
simulator is cross-validated against these forms, not the other way round.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special, stats

from . import signals
from .errors import DegenerateChannelError, NumericalFailureError, UnboundedLimitError

__all__ = [
    "ConditionalVariances",
    "DeterministicEnergies",
    "delta2",
    "variances",
    "energy_pdf_random",
    "optimal_threshold_random",
    "ber_random",
    "q_det",
    "ber_det",
    "ber_det_noncentral",
    "optimal_threshold_det",
    "refine_threshold_det",
    "ber_general",
    "ber_gaussian_approx",
    "sinr_limit",
]


@dataclass(frozen=True)
class ConditionalVariances:
    """Ordered pair of conditional received-sample variances.

    Construction sorts the two values so ``delta2_1 < delta2_2`` always
    holds; equal values are rejected because no detector can separate them.
    """

    delta2_1: float
    delta2_2: float

    def __post_init__(self):
        lo, hi = sorted((float(self.delta2_1), float(self.delta2_2)))
        if not lo > 0:
            raise ValueError("conditional variances must be > 0")
        if lo == hi:
            raise DegenerateChannelError("conditional variances coincide")
        object.__setattr__(self, "delta2_1", lo)
        object.__setattr__(self, "delta2_2", hi)

    @property
    def ratio(self):
        return self.delta2_2 / self.delta2_1


@dataclass(frozen=True)
class DeterministicEnergies:
    """Deterministic energy levels under tone jamming, plus noise variance."""

    qd_1: float
    qd_2: float
    sigma2_R: float

    def __post_init__(self):
        if not 0 <= self.qd_1 < self.qd_2:
            raise DegenerateChannelError(
                "deterministic energies must satisfy 0 <= qd_1 < qd_2")
        if not self.sigma2_R > 0:
            raise ValueError("sigma2_R must be > 0")


def delta2(ch, a_k, P_J):
    """Conditional variance |h1 h2 a_k + h3|^2 P_J + sigma2_R."""
    if not P_J > 0:
        raise ValueError("P_J must be > 0")
    return float(abs(ch.h1 * ch.h2 * a_k + ch.h3) ** 2 * P_J + ch.sigma2_R)


def variances(ch, a1, a2, P_J):
    """ConditionalVariances for an amplification alphabet on one channel draw."""
    return ConditionalVariances(delta2(ch, a1, P_J), delta2(ch, a2, P_J))


def energy_pdf_random(q, N, delta2_k):
    """Density of the per-symbol average energy under CSCG jamming.

    A gamma density with shape ``N`` and scale ``delta2_k / N`` (mean
    ``delta2_k``, variance ``delta2_k^2 / N``); zero for q <= 0.
    """
    if not delta2_k > 0:
        raise ValueError("delta2_k must be > 0")
    q = np.asarray(q, dtype=np.float64)
    pdf = stats.gamma.pdf(q, a=N, scale=delta2_k / N)
    out = np.where(q > 0, pdf, 0.0)
    return float(out) if out.ndim == 0 else out


def _threshold_two_levels(x, y, p1, p2, N):
    # written as log(p1/p2)/N + log(y/x) to dodge (y/x)**N overflow
    return (x * y / (y - x)) * (math.log(p1 / p2) / N + math.log(y / x))


def optimal_threshold_random(v, p1, p2, N):
    """BER-minimizing threshold for the two-variance gamma energy laws.

    Equals ``(d1 d2 / (d2 - d1)) (ln(p1/p2)/N + ln(d2/d1))``; for equal
    priors the symbol length N cancels entirely.
    """
    return float(_threshold_two_levels(v.delta2_1, v.delta2_2, p1, p2, N))


def ber_random(v, p1, p2, N, threshold):
    """Exact BER of the energy detector under CSCG jamming at a threshold.

    ``p1 (1 - P(N, N T / d1)) + p2 P(N, N T / d2)`` with P the regularized
    lower incomplete gamma function.  Broadcasts over ``threshold``.

    Energies are nonnegative, so any threshold below zero decides '1'
    always; such thresholds are evaluated as zero, which is exact.
    """
    t = np.maximum(np.asarray(threshold, dtype=np.float64), 0.0)
    miss0 = 1.0 - special.gammainc(N, N * t / v.delta2_1)
    miss1 = special.gammainc(N, N * t / v.delta2_2)
    out = p1 * miss0 + p2 * miss1
    return float(out) if out.ndim == 0 else out


def q_det(ts, ch, a_k, N, n_offset=0):
    """Deterministic per-symbol energy of a tone sum through the channel.

    Direct N-sample summation of |h1 h2 a_k s[n] + h3 s[n - n_tau]|^2 / N
    starting at absolute sample ``n_offset``; no approximation involved.
    """
    s = signals.gen_tone_sum(ts, N, n_offset)
    s_del = signals.gen_tone_sum(ts, N, n_offset - ch.n_tau)
    comp = ch.h1 * ch.h2 * a_k * s + ch.h3 * s_del
    return float(np.mean(np.abs(comp) ** 2))


def ber_det(d, p1, p2, N, threshold):
    """Shifted-gamma BER approximation under deterministic jamming.

    Both branch arguments are clamped at zero so thresholds at or below a
    level degrade to the correct limiting probability instead of a domain
    error.  This drops the noise-times-signal cross term; see
    :func:`ber_det_noncentral` for the exact law.
    """
    t = np.asarray(threshold, dtype=np.float64)
    x0 = np.maximum(t - d.qd_1, 0.0)
    x1 = np.maximum(t - d.qd_2, 0.0)
    miss0 = 1.0 - special.gammainc(N, N * x0 / d.sigma2_R)
    miss1 = special.gammainc(N, N * x1 / d.sigma2_R)
    out = p1 * miss0 + p2 * miss1
    return float(out) if out.ndim == 0 else out


def ber_det_noncentral(d, p1, p2, N, threshold):
    """Exact BER under deterministic jamming plus CSCG receiver noise.

    With the cross term kept, ``2 N Q / sigma2_R`` is noncentral chi-square
    with ``2N`` degrees of freedom and noncentrality ``2 N qd_k / sigma2_R``.
    The shifted-gamma form of :func:`ber_det` ignores the cross term and
    understates the spread (variance ``sigma2^2/N`` instead of
    ``(sigma2^2 + 2 qd sigma2)/N``).
    """
    t = np.asarray(threshold, dtype=np.float64)
    x = 2.0 * N * t / d.sigma2_R
    lam1 = 2.0 * N * d.qd_1 / d.sigma2_R
    lam2 = 2.0 * N * d.qd_2 / d.sigma2_R
    if lam1 > 0:
        miss0 = stats.ncx2.sf(x, 2 * N, lam1)
    else:
        miss0 = stats.chi2.sf(x, 2 * N)
    miss1 = stats.ncx2.cdf(x, 2 * N, lam2)
    out = p1 * miss0 + p2 * miss1
    return float(out) if out.ndim == 0 else out


def optimal_threshold_det(d, p1, p2, N):
    """Closed-form threshold between the two deterministic energy levels.

    Computes ``(qd_1 - xi qd_2) / (1 - xi)`` with
    ``xi = (p2/p1) exp(((N-1)/N) (qd_2 - qd_1) / sigma2_R)``.  When xi is
    numerically 1 (always the case for N = 1 with equal priors) the formula
    is singular and the numeric refinement is returned instead.
    """
    log_xi = math.log(p2 / p1) + ((N - 1) / N) * (d.qd_2 - d.qd_1) / d.sigma2_R
    if abs(log_xi) < 1e-12 or log_xi > 700.0:
        # singular or overflowing: hand off to the search
        return refine_threshold_det(d, p1, p2, N)
    xi = math.exp(log_xi)
    return float((d.qd_1 - xi * d.qd_2) / (1.0 - xi))


def refine_threshold_det(d, p1, p2, N, grid_points=512, ber_fn=None):
    """Golden-section refinement of the deterministic-case BER minimum.

    The closed form above can sit measurably off the true minimizer, so this
    search is the authoritative optimum.  The bracket deliberately extends
    past ``qd_2``: for N > 1 the '1'-branch density vanishes like
    ``(T - qd_2)^(N-1)`` at the level itself, which pushes the minimizer
    strictly above it.  ``ber_fn`` defaults to :func:`ber_det`; pass
    :func:`ber_det_noncentral` to optimize against the exact law.
    """
    ber_fn = ber_fn or ber_det
    lo = d.qd_1
    hi = d.qd_2 + 15.0 * d.sigma2_R
    grid = np.linspace(lo, hi, grid_points)
    vals = ber_fn(d, p1, p2, N, grid)
    i = int(np.argmin(vals))
    i = min(max(i, 1), grid_points - 2)
    try:
        res = optimize.minimize_scalar(
            lambda t: ber_fn(d, p1, p2, N, t),
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden", options={"xtol": 1e-12})
    except ValueError:
        # flat plateau around the grid minimum; the grid point is good enough
        return float(grid[i])
    if not np.isfinite(res.x):
        raise NumericalFailureError("threshold refinement did not converge")
    return float(res.x)


def ber_general(A, B1, B2, p1, p2, N, threshold):
    """Unified BER: gamma branches with per-symbol scale A and shift B.

    ``A`` may be a scalar (shared noise scale, deterministic case) or a pair
    ``(A1, A2)`` (per-symbol variances, random case).  ``(A=(d1, d2),
    B=0)`` reproduces :func:`ber_random`; ``(A=sigma2_R, B=(qd_1, qd_2))``
    reproduces :func:`ber_det`.
    """
    a = np.broadcast_to(np.asarray(A, dtype=np.float64), (2,))
    t = np.asarray(threshold, dtype=np.float64)
    x0 = np.maximum(t - B1, 0.0)
    x1 = np.maximum(t - B2, 0.0)
    out = p1 * (1.0 - special.gammainc(N, N * x0 / a[0])) \
        + p2 * special.gammainc(N, N * x1 / a[1])
    return float(out) if out.ndim == 0 else out


def ber_gaussian_approx(v, p1, p2, N, threshold):
    """Large-N Gaussian (central-limit) BER approximation.

    ``p1 Q((T - d1) sqrt(N)/d1) + p2 Q((d2 - T) sqrt(N)/d2)`` with Q the
    standard normal tail.  Accurate only while the threshold stays a bounded
    number of standard deviations from both means.
    """
    t = np.asarray(threshold, dtype=np.float64)
    rn = math.sqrt(N)
    out = p1 * stats.norm.sf((t - v.delta2_1) * rn / v.delta2_1) \
        + p2 * stats.norm.sf((v.delta2_2 - t) * rn / v.delta2_2)
    return float(out) if out.ndim == 0 else out


def sinr_limit(ch, a_k):
    """Large-P_J SINR ceiling |h1|^2 |h2|^2 a_k^2 / |h3|^2."""
    if ch.h3 == 0:
        raise UnboundedLimitError("SINR grows without bound when h3 = 0")
    return float((abs(ch.h1) * abs(ch.h2) * a_k) ** 2 / abs(ch.h3) ** 2)
