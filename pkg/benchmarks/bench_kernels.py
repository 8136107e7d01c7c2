"""Compare the compiled kernels against the pure-numpy reference path.

Run:  python3 benchmarks/bench_kernels.py [--symbols 200000] [--n 10]

The module-level backend is chosen at import time (JAMLINK_NO_NUMBA=1 forces
numpy), so this script times whatever `jamlink.kernels` selected alongside
the always-available numpy reference implementations.
"""

import argparse
import statistics
import time

import numpy as np

from jamlink import kernels


def bench(fn, args, repeats):
    fn(*args)  # warmup (JIT compile on the compiled path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--symbols", type=int, default=200_000)
    ap.add_argument("--n", type=int, default=10, help="samples per symbol")
    ap.add_argument("--tones", type=int, default=41)
    ap.add_argument("--repeats", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    m = args.symbols * args.n
    jam = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
    noise = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
    amps = np.where(rng.random(args.symbols) < 0.5, 2.0, 0.0)

    tone_amps = rng.uniform(0.5, 1.5, args.tones)
    freqs = np.linspace(0.05, 0.45, args.tones)
    phases = rng.uniform(0, 2 * np.pi, args.tones)

    print(f"backend: {kernels.BACKEND}")
    print(f"compose_energies: {args.symbols} symbols x N={args.n}")
    cases = [
        ("selected", kernels.compose_energies),
        ("numpy-ref", kernels._np_compose_energies),
    ]
    for label, fn in cases:
        t = bench(fn, (jam, jam, noise, amps, 1.0 + 0j, 1.0 + 0j, args.n),
                  args.repeats)
        rate = m / t / 1e6
        print(f"  {label:10s} {t * 1e3:8.2f} ms   {rate:8.1f} Msamples/s")

    print(f"tone_sum: {args.tones} tones x {m} samples")
    for label, fn in (("selected", kernels.tone_sum),
                      ("numpy-ref", kernels._np_tone_sum)):
        t = bench(fn, (tone_amps, freqs, phases, 0, m), args.repeats)
        rate = m / t / 1e6
        print(f"  {label:10s} {t * 1e3:8.2f} ms   {rate:8.1f} Msamples/s")


if __name__ == "__main__":
    main()
