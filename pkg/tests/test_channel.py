"""Fading draw statistics and received-signal composition."""

import numpy as np
import pytest

from jamlink.channel import (ChannelDraw, RicianParams, compose_received,
                             draw_channel, sinr)


def _draw_many(params, n, seed=0):
    rng = np.random.default_rng(seed)
    return [draw_channel(params, 1.0, 0, rng) for _ in range(n)]


class TestDrawChannel:
    def test_pure_los_limit(self):
        p = RicianParams(k_factor=1e12, los_h1=1 + 1j, los_h2=2.0, los_h3=-1j)
        ch = draw_channel(p, 1.0, 0, np.random.default_rng(0))
        assert abs(ch.h1 - (1 + 1j)) < 1e-5
        assert abs(ch.h2 - 2.0) < 1e-5
        assert abs(ch.h3 - (-1j)) < 1e-5

    def test_rayleigh_unit_second_moment(self):
        p = RicianParams(k_factor=0.0, los_h1=0, los_h2=0, los_h3=0)
        draws = _draw_many(p, 10**5)
        m2 = np.mean([abs(d.h1) ** 2 for d in draws])
        assert np.isclose(m2, 1.0, rtol=0.02)

    def test_rician_moment_identity(self):
        # K/(K+1)*|los|^2 + 1/(K+1) = 1 for unit LOS
        draws = _draw_many(RicianParams(k_factor=10.0), 10**5)
        m2 = np.mean([abs(d.h2) ** 2 for d in draws])
        assert np.isclose(m2, 1.0, rtol=0.02)

    def test_empirical_k_ratio(self):
        draws = _draw_many(RicianParams(k_factor=10.0), 10**5)
        h = np.array([d.h3 for d in draws])
        los_power = abs(h.mean()) ** 2
        scatter_power = h.var()
        assert np.isclose(los_power / scatter_power, 10.0, rtol=0.05)

    def test_seeded_determinism(self):
        p = RicianParams(k_factor=10.0)
        a = draw_channel(p, 1.0, 0, np.random.default_rng(5))
        b = draw_channel(p, 1.0, 0, np.random.default_rng(5))
        assert (a.h1, a.h2, a.h3) == (b.h1, b.h2, b.h3)

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            RicianParams(k_factor=-1.0)


class TestComposeReceived:
    def test_all_zero(self):
        ch = ChannelDraw(1.0, 1.0, 0.0, 1e-30, 0)
        jam = np.ones(10, dtype=complex)
        y = compose_received(jam, np.zeros(10), ch, np.random.default_rng(0))
        np.testing.assert_allclose(np.abs(y), 0.0, atol=1e-13)

    def test_constant_gain_collapse(self, rng):
        # n_tau = 0, amps constant: y = (h1 h2 a + h3) jam
        ch = ChannelDraw(0.7 + 0.1j, 1.2, 0.5 - 0.2j, 1e-30, 0)
        jam = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        y = compose_received(jam, np.full(64, 2.0), ch, rng)
        want = (ch.h1 * ch.h2 * 2.0 + ch.h3) * jam
        np.testing.assert_allclose(y, want, rtol=1e-10, atol=1e-12)

    def test_unit_everything(self):
        ch = ChannelDraw(1.0, 1.0, 1.0, 1e-30, 0)
        jam = np.ones(5, dtype=complex)
        y = compose_received(jam, np.ones(5), ch, np.random.default_rng(0))
        np.testing.assert_allclose(y, 2.0, atol=1e-13)

    def test_delay_lookback(self, rng):
        ch = ChannelDraw(1.0, 1.0, 1.0, 1e-30, n_tau=3)
        jam = np.arange(13, dtype=complex)  # 3 look-back + 10 aligned
        y = compose_received(jam, np.ones(10), ch, rng)
        want = jam[3:] + jam[:10]
        np.testing.assert_allclose(y, want, atol=1e-13)

    def test_length_mismatch(self, rng):
        ch = ChannelDraw(1.0, 1.0, 1.0, 1.0, n_tau=2)
        with pytest.raises(ValueError):
            compose_received(np.ones(10, dtype=complex), np.ones(10), ch, rng)

    def test_noise_variance(self, rng):
        ch = ChannelDraw(0.0, 0.0, 0.0, 4.0, 0)
        y = compose_received(np.zeros(10**5, dtype=complex),
                             np.zeros(10**5), ch, rng)
        assert np.isclose(np.mean(np.abs(y) ** 2), 4.0, rtol=0.05)


class TestSinr:
    def test_hand_value(self):
        ch = ChannelDraw(1.0, 1.0, 1.0, 1.0, 0)
        assert np.isclose(sinr(ch, 2.0, 10.0, True), 40.0 / 11.0)

    def test_zero_amplification(self, unit_channel):
        assert sinr(unit_channel, 0.0, 10.0, True) == 0.0

    def test_deterministic_equals_jnr(self, unit_channel):
        assert np.isclose(sinr(unit_channel, 1.0, 7.0, False), 7.0)

    def test_increasing_in_pj_and_bounded(self, unit_channel):
        vals = [sinr(unit_channel, 2.0, pj, True) for pj in (1, 10, 100, 1e4)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 4.0  # limit |h1 h2 a|^2 / |h3|^2
