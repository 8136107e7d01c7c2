"""Experiment presets, sweep execution, and CSV emission."""

import numpy as np
import pytest
from dataclasses import replace

from jamlink.errors import ConfigError
from jamlink.harness import (Curve, ExperimentConfig, PRESET_NAMES,
                             SweepResult, config_from_file,
                             config_from_mapping, emit_csv, preset_config,
                             read_csv, run_ber_sweep, run_capacity_sweep)
from jamlink.signals import JammerKind, JammerSpec


def _tiny_ber_cfg(**kw):
    cfg = preset_config("fig4", seed=777)
    small = dict(blocks=4, payload_bits_per_block=500, threads=1)
    small.update(kw)
    return replace(cfg, **small)


class TestPresets:
    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_constructs(self, name):
        cfg = preset_config(name)
        assert cfg.preset == name
        assert len(cfg.axis_values) >= 2

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_config("fig99")

    def test_seed_override(self):
        assert preset_config("fig2", seed=42).master_seed == 42

    def test_fig2_has_five_jammer_kinds(self):
        kinds = {c.jammer.kind for c in preset_config("fig2").curves}
        assert kinds == {JammerKind.SINGLE_TONE, JammerKind.MULTI_TONE,
                         JammerKind.NARROWBAND, JammerKind.DET_BROADBAND,
                         JammerKind.RANDOM_BROADBAND}

    def test_fig3_is_modulated(self):
        kinds = {c.jammer.kind for c in preset_config("fig3").curves}
        assert kinds == {JammerKind.MOD_BPSK, JammerKind.MOD_QPSK,
                         JammerKind.MOD_16QAM}

    def test_fig4_uses_exact_threshold_and_baselines(self):
        cfg = preset_config("fig4")
        assert cfg.curves[0].threshold_mode == "exact"
        assert cfg.include_baselines
        assert cfg.rician is None  # fixed unit gains
        assert np.isclose(cfg.frame.a2, np.sqrt(10.0))

    def test_fig5_sweeps_window_length(self):
        cfg = preset_config("fig5")
        assert cfg.axis_name == "n"
        assert cfg.jnr_db_fixed == 10.0

    def test_fig7_and_fig8_are_capacity_mode(self):
        assert preset_config("fig7").mode == "capacity"
        c8 = preset_config("fig8")
        assert c8.mode == "capacity" and c8.capacity_model == "complex"


class TestValidation:
    def test_axis_must_be_monotone(self):
        with pytest.raises(ConfigError):
            replace(preset_config("fig4"), axis_values=(0.0, 10.0, 5.0))

    def test_ber_mode_needs_curves(self):
        with pytest.raises(ConfigError):
            replace(preset_config("fig4"), curves=())

    def test_bad_mode(self):
        with pytest.raises(ConfigError):
            replace(preset_config("fig4"), mode="magic")

    def test_n_axis_values_must_be_integral(self):
        with pytest.raises(ConfigError):
            replace(preset_config("fig5"), axis_values=(2.0, 4.5))


class TestConfigFromMapping:
    def test_preset_with_overrides(self):
        cfg = config_from_mapping({"experiment.preset": "fig4",
                                   "run.blocks": "7",
                                   "threshold.mode": "estimated"})
        assert cfg.blocks == 7
        assert all(c.threshold_mode == "estimated" for c in cfg.curves)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="bogus.key"):
            config_from_mapping({"bogus.key": "1"})

    def test_custom_requires_axis(self):
        with pytest.raises(ConfigError, match="axis.values"):
            config_from_mapping({"frame.a2": "2.0"})

    def test_custom_ber_experiment(self):
        cfg = config_from_mapping({
            "axis.values": "0, 10, 20",
            "jammer.kind": "single_tone, random_broadband",
            "frame.a2": "2.0",
            "channel.fading": "false",
        })
        assert cfg.axis_values == (0.0, 10.0, 20.0)
        assert [c.label for c in cfg.curves] == ["single_tone",
                                                 "random_broadband"]
        assert cfg.rician is None

    def test_a2_from_snr_mapping(self):
        cfg = config_from_mapping({
            "axis.values": "0, 10",
            "snr.db": "5",
            "snr.map": "average",
            "channel.fading": "false",
        })
        # sqrt(P_A / p2) with P_A = 10^0.5, p2 = 0.5
        assert np.isclose(cfg.frame.a2, np.sqrt(2.0 * 10.0 ** 0.5))

    def test_a2_snr_on_mapping(self):
        cfg = config_from_mapping({
            "axis.values": "0, 10",
            "snr.db": "10",
            "snr.map": "on",
            "channel.fading": "false",
        })
        assert np.isclose(cfg.frame.a2, np.sqrt(10.0))

    def test_missing_amplitude_spec(self):
        with pytest.raises(ConfigError, match="frame.a2 or snr.db"):
            config_from_mapping({"axis.values": "0, 10"})

    def test_file_roundtrip(self, tmp_path):
        p = tmp_path / "exp.cfg"
        p.write_text("experiment.preset = fig6\nrun.blocks = 3\n")
        cfg = config_from_file(p)
        assert cfg.preset == "fig6" and cfg.blocks == 3


class TestCsv:
    def _result(self):
        return SweepResult(columns=("a", "b.c"),
                           rows=((1.0, 2.5), (3.0, float("nan"))))

    def test_roundtrip(self, tmp_path):
        p = tmp_path / "out.csv"
        emit_csv(self._result(), p)
        cols = read_csv(p)
        assert cols["a"] == [1.0, 3.0]
        assert cols["b.c"][0] == 2.5 and np.isnan(cols["b.c"][1])

    def test_schema_line_first(self, tmp_path):
        p = tmp_path / "out.csv"
        emit_csv(self._result(), p)
        text = p.read_bytes()
        assert text.startswith(b"# schema=1\n")
        assert b"\r" not in text

    def test_full_precision(self, tmp_path):
        val = 0.123456789012345678
        p = tmp_path / "out.csv"
        emit_csv(SweepResult(columns=("x",), rows=((val,),)), p)
        assert read_csv(p)["x"][0] == val

    def test_unwritable_path_reports_target(self, tmp_path):
        with pytest.raises(OSError, match="no/such"):
            emit_csv(self._result(), tmp_path / "no" / "such" / "f.csv")


class TestBerSweep:
    def test_small_sweep_shape_and_theory(self):
        cfg = _tiny_ber_cfg(axis_values=(10.0, 40.0))
        res = run_ber_sweep(cfg)
        assert len(res.rows) == 2
        cols = dict(zip(res.columns, res.rows[1]))
        assert cols["jnr_db"] == 40.0
        # 2000 bits at BER ~7e-5: near-zero errors; CI must cover theory
        assert cols["aaj.ber_theory"] == pytest.approx(7.3e-5, rel=0.05)
        assert cols["aaj.ci_low"] <= cols["aaj.ber_theory"]
        assert cols["aaj.bits"] == 2000.0
        assert 0.4 <= cols["dsss.ber_sim"] <= 0.5
        assert 0.4 <= cols["fh.ber_sim"] <= 0.5

    def test_estimated_threshold_tracks_theory_at_moderate_jnr(self):
        cfg = preset_config("fig6", seed=3)
        cfg = replace(cfg, axis_values=(15.0,), blocks=20,
                      payload_bits_per_block=2000, threads=1)
        res = run_ber_sweep(cfg)
        row = dict(zip(res.columns, res.rows[0]))
        th = row["exact.ber_theory"]
        assert row["exact.ci_low"] <= th <= row["exact.ci_high"]
        # estimated threshold does no better than the exact optimum
        assert row["estimated.ber_sim"] >= row["exact.ber_sim"] * 0.8

    def test_thread_count_invariance(self):
        cfg = _tiny_ber_cfg(axis_values=(20.0, 30.0))
        r1 = run_ber_sweep(replace(cfg, threads=1))
        r2 = run_ber_sweep(replace(cfg, threads=3))
        assert r1.rows == r2.rows

    def test_tonal_curve_gets_nan_gaussian_column(self):
        cfg = preset_config("fig2", seed=5)
        cfg = replace(cfg, axis_values=(10.0,), blocks=2,
                      payload_bits_per_block=200, threads=1,
                      curves=tuple(c for c in cfg.curves
                                   if c.label == "single_tone"))
        res = run_ber_sweep(cfg)
        row = dict(zip(res.columns, res.rows[0]))
        assert np.isnan(row["single_tone.ber_gauss"])
        assert np.isfinite(row["single_tone.ber_theory"])

    def test_window_axis_sweep(self):
        cfg = preset_config("fig5", seed=11)
        cfg = replace(cfg, axis_values=(2.0, 10.0), blocks=4,
                      payload_bits_per_block=500, threads=1)
        res = run_ber_sweep(cfg)
        assert res.columns[0] == "n"
        key = "random_broadband.ber_theory"
        b2 = dict(zip(res.columns, res.rows[0]))[key]
        b10 = dict(zip(res.columns, res.rows[1]))[key]
        assert b10 < b2  # longer window integrates more energy


class TestCapacitySweep:
    def test_prior_axis_with_peaks(self):
        cfg = preset_config("fig7", seed=1)
        cfg = replace(cfg, axis_values=tuple(np.linspace(0.0, 1.0, 21)),
                      snr_curves_db=(10.0,), threads=1)
        res = run_capacity_sweep(cfg)
        assert res.columns == ("p", "mi.snr_10db")
        mis = np.array([r[1] for r in res.rows])
        assert abs(mis[0]) < 1e-8 and abs(mis[-1]) < 1e-8
        peak = res.meta["peaks"]["snr_10db"]
        assert 0.0 < peak["p_star"] < 1.0
        assert peak["capacity_bits"] >= mis.max() - 1e-9

    def test_jnr_axis_with_crossover(self):
        cfg = preset_config("fig8", seed=1)
        cfg = replace(cfg, axis_values=tuple(np.arange(8.0, 16.0, 0.5)),
                      threads=1)
        res = run_capacity_sweep(cfg)
        assert res.columns == ("jnr_db", "aaj_capacity_bits", "aaj_p_star",
                               "dt_capacity_bits")
        assert np.isclose(res.meta["crossover_jnr_db"], 11.62, atol=0.05)

    def test_mode_mismatch_rejected(self):
        cfg = preset_config("fig4")
        with pytest.raises(ConfigError):
            run_capacity_sweep(cfg)
        with pytest.raises(ConfigError):
            run_ber_sweep(preset_config("fig7"))
