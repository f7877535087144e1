"""Walk one idempotent permutation through every representation.

Run:  python demos/01_worked_example.py
"""

import numpy as np

import iperm
from iperm import core_model, oracle

pi = iperm.as_key_array([3, -1, 6, 8, -4, 7, -5, -9, -10, 2])
print("idempotent permutation  ", pi.tolist())
print("class decomposition     ", core_model.decompose(pi, "IdempotentPerm"))

# Negative entries are the fixed elements; the sign bit is the characteristic
# function, so inversion marks finished positions in an n-bit scratch instead.
inv = pi.copy()
iperm.invert_inplace(inv, mode="bit")
print("inverse                 ", inv.tolist())

iota = iperm.map_from_inverse(inv)
print("idempotent map          ", iota.tolist())

m = inv.copy()
iperm.fill_forward_inplace(m)
print("sorted multiset         ", m.tolist())
print("m composed with |pi|    ", list(oracle.compose(m.tolist(), pi.tolist())))

gamma = pi.copy()
iperm.associative_permute(gamma)
print("associative permute     ", gamma.tolist())
iperm.fill_forward_inplace(gamma)
assert np.array_equal(gamma, m)

# Going back from the map gives the canonical permutation: idle ranks of a
# class follow position order, which the input above does not.
again = iota.copy()
iperm.map_to_perm(again)
print("canonical re-encoding   ", again.tolist())
print("input canonical?        ", iperm.validate_idempotent_perm(pi, canonical=True))
print("re-encoding canonical?  ", iperm.validate_idempotent_perm(again, canonical=True))
