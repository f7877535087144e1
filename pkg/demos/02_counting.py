"""Count idempotent maps and multisets two ways: closed form and enumeration.

Run:  python demos/02_counting.py
"""

from math import comb

from iperm import oracle

print(" n  formula  enumerated  permutations  multisets  C(2n-1,n)")
for n in range(1, 8):
    formula = oracle.formula_table(n)
    maps = oracle.enumeration_table(n)
    perms = sum(1 for _ in oracle.enumerate_idempotent_perms(n))
    ms = oracle.formula_table(n, "multiset").total
    print(f"{n:2d} {formula.total:8d} {maps.total:11d} {perms:13d} {ms:10d} {comb(2 * n - 1, n):10d}")

print()
print("per-degree rows for n = 5")
print(oracle.formula_table(5))

# Exact integers: these overflow 64 bits quickly.
print()
print("n = 40, k = 3:", oracle.cardinality_idempotent(40, 3))
