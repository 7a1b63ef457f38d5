"""Time the compiled and numpy kernel backends on production-sized inputs.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from squeezedho import _kernels
from squeezedho.factory import displacement_bands, squeeze_bands, _norm_bound
from squeezedho.fock import DEFAULT_POLICY


def cases():
    x = np.linspace(-12.0, 12.0, 2001)
    rng = np.random.default_rng(0)
    dim = DEFAULT_POLICY.dim
    coeffs = rng.normal(size=(200, dim)) + 1j * rng.normal(size=(200, dim))
    work = dim + DEFAULT_POLICY.guard_band
    v = np.zeros(work, complex)
    v[0] = 1.0
    disp = displacement_bands(2.0 + 1.0j, work)
    sq = squeeze_bands(1.0, work)
    steps_d = int(np.ceil(_norm_bound(disp)))
    steps_s = int(np.ceil(_norm_bound(sq)))
    return {
        "hermite_table(256, 2001 pts)": lambda: _kernels.hermite_table(256, x),
        "superpose(200 x 257, 2001 pts)": lambda: _kernels.superpose(coeffs, x),
        "expm_banded displacement alpha=2+i": lambda: _kernels.expm_banded(disp, v, steps_d),
        "expm_banded squeeze r=1": lambda: _kernels.expm_banded(sq, v, steps_s),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = _kernels.available_backends()
    timings = {}
    for b in backends:
        _kernels.use_backend(b)
        for name, fn in cases().items():
            fn()  # warm up
            timings[(name, b)] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':40s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in cases():
        row = f"{name:40s}" + "".join(f"{timings[(name, b)] * 1e3:10.2f}ms" for b in backends)
        if len(backends) > 1:
            row += f"{timings[(name, 'python')] / timings[(name, 'cython')]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
