"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from phasesynth import _kernels_py
from phasesynth.mpe import povm_table

try:
    from phasesynth import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def cases():
    draws = np.arange(1_000_000, dtype=np.uint64)
    grid, cdf = povm_table(64)
    u = np.random.default_rng(0).random(1_000_000)
    phases = np.random.default_rng(1).uniform(0.01, 1.56, 4096)
    angles = np.random.default_rng(2).uniform(0.0, 1.57, 4096)
    return {
        "philox_uniforms 1e6": lambda k: k.philox_uniforms(123, 1, np.uint64(0), draws),
        "inverse_cdf 1e6": lambda k: k.inverse_cdf(u, grid, cdf),
        "prepare_phase_state n=6": lambda k: k.prepare_phase_state(phases, 6),
        "prepare_frqi_state n=6": lambda k: k.prepare_frqi_state(angles, 6),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _kernels_py}
    if _kernels_cy is not None:
        backends["cython"] = _kernels_cy
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':26s}" + "".join(f"{b:>14s}" for b in backends) + "   speedup")
    for name, fn in cases().items():
        times = {}
        for b, k in backends.items():
            fn(k)
            times[b] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        row = f"{name:26s}" + "".join(f"{t * 1e3:11.2f} ms" for t in times.values())
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
