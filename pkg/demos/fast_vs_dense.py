# # Dense Gaussian versus fast Hadamard projections
#
# The fast map multiplies by random signs, applies a Walsh-Hadamard transform
# and keeps k random rows. It agrees with its own materialized matrix up to rounding,
# and it is cheaper to build and to store than a dense Gaussian matrix.

import time

import numpy as np

from hyperjl import ProjectionSpec, apply, make_projection

d, k = 48, 16
fast = make_projection(ProjectionSpec(d, k, 0.5, seed=1, method="fast-hadamard"))
dense = fast.materialize()
v = np.random.default_rng(0).normal(size=(5, d))
print("max |fast(v) - M v|:", np.abs(apply(fast, v) - v @ dense.T).max())

# Rough timings; build plus apply on 256 vectors.

rng = np.random.default_rng(1)
for d in (1024, 4096, 16384):
    v = rng.normal(size=(256, d))
    for method in ("dense-gaussian", "fast-hadamard"):
        t0 = time.perf_counter()
        m = make_projection(ProjectionSpec(d, 256, 0.5, seed=2, method=method))
        t1 = time.perf_counter()
        apply(m, v)
        t2 = time.perf_counter()
        print(f"d={d:6d} {method:15s} build {t1 - t0:.4f}s apply {t2 - t1:.4f}s")
