"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each case is
timed with both backends swapped into ``har_ensemble._backend`` and the
outputs are checked for agreement before timing.
"""
import argparse
import contextlib
import timeit

import numpy as np

from har_ensemble import _backend, _kernels_py
from har_ensemble.classifiers import RandomForest
from har_ensemble.features import FeatureConfig, extract_feature_matrix
from har_ensemble.dataio import ChannelSpec

try:
    from har_ensemble import _kernels
except ImportError:
    _kernels = None


@contextlib.contextmanager
def use(module):
    saved = _backend.fft_rows, _backend.best_split
    _backend.fft_rows, _backend.best_split = module.fft_rows, module.best_split
    try:
        yield
    finally:
        _backend.fft_rows, _backend.best_split = saved


def cases(rng):
    rows = rng.normal(size=(2000, 256))
    X = rng.normal(size=(2000, 40))
    y = (X[:, 0] + X[:, 1] > 0).astype(np.intp) + (X[:, 2] > 1)
    idx = np.arange(len(X), dtype=np.intp)
    feats = np.arange(X.shape[1], dtype=np.intp)
    windows = rng.normal(size=(500, 250, 3))
    channels = [ChannelSpec.from_name(n) for n in ("acc_x", "acc_y", "acc_z")]
    return {
        "fft_rows 2000x256": lambda: _backend.fft_rows(rows),
        "best_split 2000x40": lambda: _backend.best_split(X, y, idx, feats, 3, 1),
        "forest fit 20 trees": lambda: RandomForest(n_trees=20, seed=0).fit(X, y),
        "feature extraction 500 windows": lambda: extract_feature_matrix(windows, channels, 50.0, FeatureConfig()),
    }


def _payload(result):
    # extract_feature_matrix returns (X, names); the kernels return arrays or tuples
    if isinstance(result, tuple) and isinstance(result[1], list):
        return result[0]
    return np.asarray(result, dtype=np.complex128 if np.iscomplexobj(result) else np.float64)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the fallback is available")
        return
    bench = cases(np.random.default_rng(0))
    print(f"{'case':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in bench.items():
        with use(_kernels_py):
            ref = fn()
        with use(_kernels):
            got = fn()
        if not isinstance(ref, RandomForest):
            np.testing.assert_allclose(_payload(got), _payload(ref), rtol=1e-9, atol=1e-9)
        times = {}
        for label, mod in (("python", _kernels_py), ("cython", _kernels)):
            with use(mod):
                times[label] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        print(f"{name:34s} {times['python']:10.4f} {times['cython']:10.4f} {times['python'] / times['cython']:7.1f}x")


if __name__ == "__main__":
    main()
