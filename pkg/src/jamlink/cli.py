"""Command-line front end: sweeps, capacity curves, closed forms, selftest."""

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import harness, theory
from .capacity import capacity as cap_capacity
from .capacity import mutual_information
from .errors import ConfigError, JamlinkError
from .modem import FrameConfig
from .signals import JammerKind, JammerSpec

__all__ = ["cli_main", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="jamlink",
                     description="Jamming-modulation link simulator and "
                                 "closed-form analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_run_flags(p, need_out=True):
        p.add_argument("--preset", choices=harness.PRESET_NAMES)
        p.add_argument("--config", metavar="FILE")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=float,
                       help="target payload bits per sweep point")
        p.add_argument("--threads", type=int)
        p.add_argument("--out", metavar="CSV", required=need_out)
        p.add_argument("--quiet", action="store_true")

    add_run_flags(sub.add_parser("sweep", help="Monte Carlo BER sweep"))
    add_run_flags(sub.add_parser("capacity", help="capacity / mutual-information sweep"))

    t = sub.add_parser("theory", help="evaluate one closed form")
    t.add_argument("--op", required=True,
                   choices=["optimal-threshold", "ber-random", "ber-gaussian",
                            "ber-det", "optimal-threshold-det", "mi", "capacity"])
    t.add_argument("--d1", type=float, help="low conditional variance")
    t.add_argument("--d2", type=float, help="high conditional variance")
    t.add_argument("--qd1", type=float, help="low deterministic energy level")
    t.add_argument("--qd2", type=float, help="high deterministic energy level")
    t.add_argument("--sigma2", type=float, default=1.0)
    t.add_argument("--p", type=float, default=0.5, help="prior of '0' (or input p for mi)")
    t.add_argument("--n", type=int, default=1, help="samples per symbol")
    t.add_argument("--t", type=float, help="threshold (default: optimal)")
    t.add_argument("--model", choices=["real", "complex"], default="real")

    s = sub.add_parser("selftest", help="run the built-in invariant checks")
    s.add_argument("--quiet", action="store_true")
    return parser


def _resolve_config(args):
    if args.preset and args.config:
        raise ConfigError("--preset and --config are mutually exclusive")
    if args.config:
        cfg = harness.config_from_file(args.config)
        if args.seed is not None:
            cfg = replace(cfg, master_seed=int(args.seed))
    elif args.preset:
        cfg = harness.preset_config(args.preset, seed=args.seed)
    else:
        raise ConfigError("one of --preset or --config is required")
    if args.trials is not None:
        blocks = max(1, round(args.trials / cfg.payload_bits_per_block))
        cfg = replace(cfg, blocks=blocks)
    if args.threads is not None:
        cfg = replace(cfg, threads=int(args.threads))
    return cfg


def _cmd_sweep(args):
    cfg = _resolve_config(args)
    if cfg.mode != "ber":
        raise ConfigError(f"preset {cfg.preset!r} is a capacity experiment; "
                          "use the 'capacity' subcommand")
    progress = None if args.quiet else (lambda msg: print(msg))
    result = harness.run_ber_sweep(cfg, progress=progress)
    harness.emit_csv(result, args.out)
    if not args.quiet:
        print(f"wrote {args.out} ({len(result.rows)} rows, "
              f"backend={result.meta['backend']})")
    return 0


def _cmd_capacity(args):
    cfg = _resolve_config(args)
    if cfg.mode != "capacity":
        raise ConfigError(f"preset {cfg.preset!r} is a BER experiment; "
                          "use the 'sweep' subcommand")
    progress = None if args.quiet else (lambda msg: print(msg))
    result = harness.run_capacity_sweep(cfg, progress=progress)
    harness.emit_csv(result, args.out)
    if not args.quiet:
        cross = result.meta.get("crossover_jnr_db")
        if cross is not None and not math.isnan(cross):
            print(f"crossover at JNR = {cross:.2f} dB")
        print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 0


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ConfigError(f"--op {args.op} requires " +
                          ", ".join(f"--{n}" for n in missing))


def _cmd_theory(args):
    p1 = args.p
    p2 = 1.0 - p1
    if args.op in ("optimal-threshold", "ber-random", "ber-gaussian",
                   "mi", "capacity"):
        _require(args, "d1", "d2")
        v = theory.ConditionalVariances(args.d1, args.d2)
        if args.op == "optimal-threshold":
            value = theory.optimal_threshold_random(v, p1, p2, args.n)
        elif args.op == "ber-random":
            t = args.t if args.t is not None else \
                theory.optimal_threshold_random(v, p1, p2, args.n)
            value = theory.ber_random(v, p1, p2, args.n, t)
        elif args.op == "ber-gaussian":
            t = args.t if args.t is not None else \
                theory.optimal_threshold_random(v, p1, p2, args.n)
            value = theory.ber_gaussian_approx(v, p1, p2, args.n, t)
        elif args.op == "mi":
            value = mutual_information(args.p, v, model=args.model)
        else:
            res = cap_capacity(v, model=args.model)
            print(f"p_star={res.p_star:.17g}")
            value = res.capacity_bits
    else:
        _require(args, "qd1", "qd2")
        d = theory.DeterministicEnergies(qd_1=args.qd1, qd_2=args.qd2,
                                         sigma2_R=args.sigma2)
        if args.op == "ber-det":
            t = args.t if args.t is not None else \
                theory.refine_threshold_det(d, p1, p2, args.n)
            value = theory.ber_det(d, p1, p2, args.n, t)
        else:
            value = theory.refine_threshold_det(d, p1, p2, args.n)
    print(f"{value:.17g}")
    return 0


# ---------------------------------------------------------------------------
# selftest


def _check_threshold_optimality(rng):
    for _ in range(5):
        d1 = rng.uniform(0.5, 2.0)
        v = theory.ConditionalVariances(d1, d1 * rng.uniform(1.5, 8.0))
        n = int(rng.integers(1, 30))
        t_star = theory.optimal_threshold_random(v, 0.5, 0.5, n)
        best = theory.ber_random(v, 0.5, 0.5, n, t_star)
        grid = np.linspace(v.delta2_1 * 0.2, v.delta2_2 * 2.0, 200)
        if best > theory.ber_random(v, 0.5, 0.5, n, grid).min() + 1e-12:
            raise AssertionError(f"threshold beaten on grid (N={n})")


def _check_mi_endpoints(rng):
    v = theory.ConditionalVariances(1.0, 4.0)
    for p in (0.0, 1.0):
        if abs(mutual_information(p, v)) > 1e-8:
            raise AssertionError(f"MI({p}) != 0")
    lam, pa, pb = 0.3, 0.2, 0.7
    mid = mutual_information(lam * pa + (1 - lam) * pb, v)
    if mid < lam * mutual_information(pa, v) \
            + (1 - lam) * mutual_information(pb, v) - 1e-8:
        raise AssertionError("MI concavity violated")


def _check_chi_square(rng):
    from scipy import stats

    from . import kernels
    n_per, nsym = 10, 4000
    delta2 = 5.0
    jam = np.sqrt(0.5) * (rng.standard_normal(n_per * nsym)
                          + 1j * rng.standard_normal(n_per * nsym))
    noise = np.sqrt(0.5) * (rng.standard_normal(n_per * nsym)
                            + 1j * rng.standard_normal(n_per * nsym))
    q = kernels.compose_energies(jam, jam, noise, np.full(nsym, 1.0),
                                 complex(1.0), complex(1.0), n_per)
    # delta2 = |1*1 + 1|^2 * 1 + 1 = 5
    stat = stats.kstest(2 * n_per * q / delta2, stats.chi2(2 * n_per).cdf)
    if stat.pvalue < 0.01:
        raise AssertionError(f"KS p={stat.pvalue:.4f} < 0.01")


def _check_determinism(rng):
    cfg = harness.ExperimentConfig(
        preset="custom", mode="ber", axis_name="jnr_db", axis_values=(10.0,),
        curves=(harness.Curve("bbr", JammerSpec(
            kind=JammerKind.RANDOM_BROADBAND, power=1.0)),),
        frame=FrameConfig(N=10, M=10, a1=0.0, a2=2.0),
        rician=None, blocks=4, payload_bits_per_block=500, master_seed=7)
    r1 = harness.run_ber_sweep(replace(cfg, threads=1))
    r2 = harness.run_ber_sweep(replace(cfg, threads=4))
    if r1.rows != r2.rows:
        raise AssertionError("thread count changed results")


def _check_gaussian_approx(rng):
    # thresholds a bounded number of standard deviations from the means;
    # at the optimal threshold (deep tails) the CLT error grows with N
    v = theory.ConditionalVariances(1.0, 2.0)
    n = 100
    for u in (0.25, 0.5, 1.0):
        for t in (v.delta2_1 * (1 + u / math.sqrt(n)),
                  v.delta2_2 * (1 - u / math.sqrt(n))):
            exact = theory.ber_random(v, 0.5, 0.5, n, t)
            approx = theory.ber_gaussian_approx(v, 0.5, 0.5, n, t)
            if abs(approx - exact) / exact > 0.05:
                raise AssertionError(
                    f"Gaussian approximation off at N={n}, u={u}")


def _cmd_selftest(args):
    checks = [
        ("threshold-optimality", _check_threshold_optimality),
        ("mi-endpoints-concavity", _check_mi_endpoints),
        ("chi-square-law", _check_chi_square),
        ("thread-determinism", _check_determinism),
        ("gaussian-approx", _check_gaussian_approx),
    ]
    rng = np.random.default_rng(20240817)
    failed = 0
    for name, fn in checks:
        try:
            fn(rng)
        except AssertionError as exc:
            failed += 1
            print(f"FAIL {name}: {exc}")
        else:
            if not args.quiet:
                print(f"ok {name}")
    if failed:
        print(f"{failed} of {len(checks)} checks failed")
        return 2
    if not args.quiet:
        print(f"all {len(checks)} checks passed")
    return 0


def cli_main(argv=None):
    """Entry point; returns the process exit code (0 ok, 1 config, 2 runtime)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"sweep": _cmd_sweep, "capacity": _cmd_capacity,
                "theory": _cmd_theory, "selftest": _cmd_selftest}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (JamlinkError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
