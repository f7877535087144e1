"""Array kernels shared by the pure-Python and JIT-compiled code paths.

Every kernel indexes its arrays with plain integers and ``len`` only, so the
same source runs on Python lists, numpy arrays, instrumented wrappers, and
(compiled with numba) on contiguous ``int64`` arrays.

Values are 1-based; storage is 0-based, so value ``v`` addresses ``a[v - 1]``.
"""

import numpy as np
import numba


def to_idempotent_unstable(a):
    n = len(a)
    i = 0
    while i < n:
        v = a[i]
        w = a[v - 1]
        if w == v:
            i += 1
        else:
            a[i] = w
            a[v - 1] = v


def stable_rank_permutation(a, out):
    # The single-pass form can leave a value's own slot to a duplicate when the
    # slot index is reached as a free slot before the value is first seen,
    # e.g. (1, 1, 2). Marking all first occurrences before filling free slots
    # keeps every distinct value fixed.
    n = len(a)
    for i in range(n):
        out[i] = 0
    for i in range(n):
        v = a[i]
        if out[v - 1] == 0:
            out[v - 1] = i + 1
    j = 0
    for i in range(n):
        if out[a[i] - 1] != i + 1:
            while out[j] != 0:
                j += 1
            out[j] = i + 1


def apply_forward(a, sigma):
    n = len(a)
    for i in range(n):
        if sigma[i] != i + 1:
            cur = i
            nxt = sigma[cur] - 1
            while nxt != i:
                a[cur], a[nxt] = a[nxt], a[cur]
                sigma[cur] = cur + 1
                cur = nxt
                nxt = sigma[cur] - 1
            sigma[cur] = cur + 1


def apply_forward_keyed(a, sat, sigma):
    n = len(a)
    for i in range(n):
        if sigma[i] != i + 1:
            cur = i
            nxt = sigma[cur] - 1
            while nxt != i:
                a[cur], a[nxt] = a[nxt], a[cur]
                sat[cur], sat[nxt] = sat[nxt], sat[cur]
                sigma[cur] = cur + 1
                cur = nxt
                nxt = sigma[cur] - 1
            sigma[cur] = cur + 1


def apply_inverse(a, sigma_inv):
    n = len(a)
    for i in range(n):
        j = sigma_inv[i] - 1
        while j != i:
            a[i], a[j] = a[j], a[i]
            sigma_inv[i] = sigma_inv[j]
            sigma_inv[j] = j + 1
            j = sigma_inv[i] - 1


def apply_inverse_keyed(a, sat, sigma_inv):
    n = len(a)
    for i in range(n):
        j = sigma_inv[i] - 1
        while j != i:
            a[i], a[j] = a[j], a[i]
            sat[i], sat[j] = sat[j], sat[i]
            sigma_inv[i] = sigma_inv[j]
            sigma_inv[j] = j + 1
            j = sigma_inv[i] - 1


def invert_signtag(a):
    n = len(a)
    for i in range(n):
        if a[i] > 0:
            prev = i + 1
            cur = a[i]
            while cur != i + 1:
                nxt = a[cur - 1]
                a[cur - 1] = -prev
                prev = cur
                cur = nxt
            a[i] = -prev
    for i in range(n):
        a[i] = -a[i]


def invert_signtag_bits(a, bits):
    # bits carries an explicit characteristic function; it travels with the
    # element it annotates, so bits[|a(x)|] of the result equals bits[x].
    n = len(a)
    for i in range(n):
        if a[i] > 0:
            prev = i + 1
            cur = a[i]
            carried = bits[i]
            while cur != i + 1:
                nxt = a[cur - 1]
                a[cur - 1] = -prev
                b = bits[cur - 1]
                bits[cur - 1] = carried
                carried = b
                prev = cur
                cur = nxt
            a[i] = -prev
            bits[i] = carried
    for i in range(n):
        a[i] = -a[i]


def invert_bittag(a, scratch):
    # scratch is a packed bit array, bit p set once position p is final.
    n = len(a)
    for i in range(n):
        if scratch[i >> 3] & (1 << (i & 7)) == 0:
            v = a[i]
            neg = v < 0
            prev = i + 1
            cur = -v if neg else v
            while cur != i + 1:
                w = a[cur - 1]
                a[cur - 1] = -prev if neg else prev
                scratch[(cur - 1) >> 3] |= 1 << ((cur - 1) & 7)
                neg = w < 0
                prev = cur
                cur = -w if neg else w
            a[i] = -prev if neg else prev
            scratch[i >> 3] |= 1 << (i & 7)
    for q in range(len(scratch)):
        scratch[q] = 0


def map_to_perm(a):
    n = len(a)
    for i in range(n):
        if a[i] == i + 1:
            a[i] = -1
    for i in range(n):
        v = a[i]
        if v > 0:
            a[v - 1] -= 1
    s = 0
    for i in range(n):
        v = a[i]
        if v < 0:
            s += v
            a[i] = s
    for i in range(n - 1, -1, -1):
        v = a[i]
        if v > 0:
            a[v - 1] += 1
            a[i] = -a[v - 1] + 1


def map_to_perm_out(a, out):
    n = len(a)
    for i in range(n):
        out[i] = 0
    for i in range(n):
        if a[i] == i + 1:
            out[i] = -1
    for i in range(n):
        v = a[i]
        if v != i + 1:
            out[v - 1] -= 1
    s = 0
    for i in range(n):
        v = out[i]
        if v < 0:
            s += v
            out[i] = s
    for i in range(n - 1, -1, -1):
        v = a[i]
        if v != i + 1:
            out[v - 1] += 1
            out[i] = -out[v - 1] + 1
    for i in range(n):
        v = out[i]
        if v < 0:
            out[i] = -v


def map_to_perm_quadratic(a):
    # One counting scan per fixed element leaves -(last rank of its class) on
    # the fixed position; rewriting idle elements during those scans would let
    # a written rank alias a later fixed value, so ranks are handed out by a
    # single right-to-left pass afterwards.
    n = len(a)
    c = 0
    for i in range(n):
        if a[i] == i + 1:
            c += 1
            for x in range(n):
                if a[x] == i + 1 and x != i:
                    c += 1
            a[i] = -c
    for i in range(n - 1, -1, -1):
        v = a[i]
        if v > 0:
            a[v - 1] += 1
            a[i] = -a[v - 1] + 1


def perm_to_map_quadratic(a):
    n = len(a)
    # Idle ranks become the rank of their class's fixed element. Earlier
    # classes' tags are below the current range, so they are never rescanned.
    i = 0
    while i < n:
        if a[i] < 0:
            c = -a[i]
            hi = n + 1
            x = i + 1
            while x < n:
                if a[x] < 0:
                    hi = -a[x]
                    break
                x += 1
            for x in range(n):
                v = a[x]
                if c < v and v < hi:
                    a[x] = c
        i += 1
    # Fixed elements now carry their own index; idle tags hold class ranks,
    # which are visited in increasing order along with their fixed element.
    for x in range(n):
        if a[x] < 0:
            a[x] = -(x + 1)
    c = 1
    for i in range(n):
        if a[i] == -(i + 1):
            cnt = 0
            for x in range(n):
                if a[x] == c:
                    a[x] = -(i + 1)
                    cnt += 1
            c += 1 + cnt
    for x in range(n):
        a[x] = -a[x]


def map_from_inverse(a, out):
    n = len(a)
    for i in range(n):
        v = a[i]
        if v < 0:
            out[-v - 1] = -v
        else:
            w = a[i - 1]
            out[v - 1] = out[(-w if w < 0 else w) - 1]


def fill_forward(a):
    n = len(a)
    for i in range(n):
        v = a[i]
        if v < 0:
            a[i] = -v
        else:
            a[i] = a[i - 1]


def associative_permute(a):
    n = len(a)
    i = 0
    while i < n:
        v = a[i]
        if v < 0 or v == i + 1:
            i += 1
            continue
        j = v
        a[i] = a[j - 1]
        a[j - 1] = j
        while a[i] < 0:
            k = -a[i]
            a[i] = a[k - 1]
            a[k - 1] = -j
            j = k
            if k == i + 1:
                # cycle closed on the leader; stepping on would swap it back
                break


def copy_abs(src, dst):
    for i in range(len(src)):
        v = src[i]
        dst[i] = -v if v < 0 else v


def iter_multiset(a):
    n = len(a)
    j = 0
    for i in range(n):
        v = a[i]
        if v < 0:
            j = -v
        yield j


KERNELS = {
    name: obj
    for name, obj in list(globals().items())
    if callable(obj) and not name.startswith("_") and obj.__module__ == __name__
    and name != "iter_multiset"
}

# Scalar words each kernel keeps live beyond its array arguments (loop
# indices, carried values, swap temporaries).
SCALAR_WORDS = {
    "to_idempotent_unstable": 2,
    "stable_rank_permutation": 2,
    "apply_forward": 4,
    "apply_forward_keyed": 4,
    "apply_inverse": 3,
    "apply_inverse_keyed": 3,
    "invert_signtag": 4,
    "invert_signtag_bits": 6,
    "invert_bittag": 5,
    "map_to_perm": 2,
    "map_to_perm_out": 2,
    "map_to_perm_quadratic": 3,
    "perm_to_map_quadratic": 4,
    "map_from_inverse": 2,
    "fill_forward": 2,
    "associative_permute": 3,
    "copy_abs": 2,
    "iter_multiset": 2,
}

_compiled = {}


def compiled(name):
    fn = _compiled.get(name)
    if fn is None:
        fn = numba.njit(cache=True, nogil=True)(KERNELS[name])
        _compiled[name] = fn
    return fn


def is_native(*arrays):
    """True when every array can go to the compiled kernel without copying."""
    for arr in arrays:
        if not isinstance(arr, np.ndarray) or arr.ndim != 1:
            return False
        if arr.dtype != np.int64 and arr.dtype != np.uint8:
            return False
        if not arr.flags.c_contiguous or not arr.flags.writeable:
            return False
    return True


def run(name, *arrays):
    if is_native(*arrays):
        compiled(name)(*arrays)
    else:
        KERNELS[name](*arrays)
