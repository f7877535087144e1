"""Count element accesses and allocations to see the O(n) time and O(1) space.

Run:  python demos/04_instrumentation.py
"""

import numpy as np

from iperm import sorting
from iperm.instrument import CountingArray, ProvenanceViolation, TracedArray, peak_allocation

rng = np.random.default_rng(3)

print("     n     reads    writes  accesses/n")
for k in range(10, 17):
    n = 1 << k
    a = CountingArray(rng.integers(1, n + 1, size=n))
    sorting.run_stages("unstable", a)
    print(f"{n:6d} {a.reads:9d} {a.writes:9d} {a.accesses / n:10.2f}")

print()
sorting.sort(rng.integers(1, 11, size=10))
for n in (1 << 12, 1 << 20):
    f = rng.integers(1, n + 1, size=n)
    print(f"unstable sort, n={n:8d}: {peak_allocation(sorting.sort_unstable_inplace, f)} bytes allocated")

# The third pipeline never writes a value it did not read from the keys.
f = rng.integers(1, 101, size=100)
sorting.run_stages("stable-preserving", TracedArray(f), [0] * 100)
print("stable-preserving: every write is a moved key")
try:
    sorting.run_stages("unstable", TracedArray(f), None)
except ProvenanceViolation as exc:
    print("unstable:", exc)
