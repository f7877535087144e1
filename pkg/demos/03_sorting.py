"""Sort keys in [1, n] with the three linear-time pipelines.

Run:  python demos/03_sorting.py
"""

import time

import numpy as np

import iperm
from iperm import sorting

keys = iperm.as_key_array([2, 2, 7, 7, 5, 7, 7, 8, 9, 2])
print("input", keys.tolist())
for algo in iperm.SortAlgorithm:
    a = keys.copy()
    iperm.sort(a, algo)
    print(f"{algo.value:18s}", a.tolist())

# Stability: carry each key's original position along as a satellite.
a, tags = keys.copy(), np.arange(1, 11)
iperm.sort_stable_preserving(a, sat=tags)
print()
print("stable keys ", a.tolist())
print("origin      ", tags.tolist())

# Timing at a million keys (first call loads the compiled kernels).
rng = np.random.default_rng(1)
n = 10**6
f = rng.integers(1, n + 1, size=n)
iperm.sort(f[:10] % 10 + 1)
aux = np.zeros(n, dtype=np.int64)
print()
for algo in iperm.SortAlgorithm:
    a = f.copy()
    t0 = time.perf_counter()
    sorting.sort(a, algo, None if algo is iperm.SortAlgorithm.UNSTABLE else aux)
    dt = time.perf_counter() - t0
    assert np.array_equal(a, np.sort(f))
    print(f"{algo.value:18s} n={n}  {dt * 1e3:7.1f} ms")
