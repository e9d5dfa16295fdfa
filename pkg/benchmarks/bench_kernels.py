"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel is run on identical input by both backends, and outputs are
compared before timing so a fast but wrong backend cannot look good. The
end-to-end cases swap the backend under the public functions.
"""

import argparse
import json
import sys
import timeit
from contextlib import contextmanager

import numpy as np

from benford_laplace import kernels
from benford_laplace.conformity import analyze
from benford_laplace.digits import DigitSpec, delta_extrema
from benford_laplace.kernels import compiled_backend, python_backend


def kernel_cases(rng):
    s = np.linspace(-30.0, 30.0, 200_000)
    data = rng.exponential(size=2_000_000) * 10.0 ** rng.integers(-5, 6, size=2_000_000)
    return [
        ("htilde b=10 d=1 (200k points)", "htilde", (s, 10, 1, 1, 1e-12)),
        ("htilde b=2 d=1 (200k points)", "htilde", (s, 2, 1, 1, 1e-12)),
        ("significant_digits first (2M)", "significant_digits", (data, 10, 1)),
        ("digit_histogram first (2M)", "digit_histogram", (data, 10, 1)),
        ("digit_histogram second (2M)", "digit_histogram", (data, 10, 2)),
    ]


@contextmanager
def using(backend):
    saved = {name: getattr(kernels, name) for name in ("htilde", "significant_digits", "digit_histogram")}
    try:
        for name in saved:
            setattr(kernels, name, getattr(backend, name))
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def end_to_end_cases(rng):
    data = rng.lognormal(3.0, 2.0, size=1_000_000)
    points = [np.array([x]) for x in np.linspace(0.0, np.log(10.0), 2000)]
    return [
        ("htilde 2000 single-point calls", lambda: [kernels.htilde(p, 10, 1, 1, 1e-12) for p in points]),
        ("delta_extrema d=1..9", lambda: [delta_extrema(DigitSpec(10, d, 1)) for d in range(1, 10)]),
        ("analyze 1M records", lambda: analyze(data)),
    ]


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=1e-15) if np.ndim(a) else a == b


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write results to this file")
    args = parser.parse_args(argv)

    fast = compiled_backend()
    if fast is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1

    results = []

    def report(label, t_slow, t_fast):
        results.append({"case": label, "numpy_s": t_slow, "cython_s": t_fast, "speedup": t_slow / t_fast})
        print(f"{label:34s} {1e3 * t_slow:11.2f} {1e3 * t_fast:12.2f} {t_slow / t_fast:7.1f}x")

    rng = np.random.default_rng(0)
    print(f"{'case':34s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s}")
    for label, name, call_args in kernel_cases(rng):
        slow_fn, fast_fn = getattr(python_backend, name), getattr(fast, name)
        if not _same(slow_fn(*call_args), fast_fn(*call_args)):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 2
        report(label, _best(lambda: slow_fn(*call_args), args.repeat), _best(lambda: fast_fn(*call_args), args.repeat))

    for label, run in end_to_end_cases(rng):
        with using(python_backend):
            t_slow = _best(run, args.repeat)
        with using(fast):
            t_fast = _best(run, args.repeat)
        report(label, t_slow, t_fast)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
