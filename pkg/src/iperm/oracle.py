"""Brute-force ground truth: closed-form counts, enumerations, naive references.

Everything here favours obvious correctness over speed. Enumerations are
capped at ``n <= ENUM_LIMIT`` and emit tuples in lexicographic order.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .core_model import check_idempotent_map, check_idempotent_perm, check_raw_map, validate_idempotent_perm
from .errors import IpermError, InvalidState

ENUM_LIMIT = 8


class CountSource(enum.Enum):
    FORMULA = "Formula"
    ENUMERATION = "Enumeration"


class Family(enum.Enum):
    IDEMPOTENT = "idempotent"
    MULTISET = "multiset"


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise IpermError(f"k={k} is outside [1, {n}]")


def cardinality_idempotent(n: int, k: int) -> int:
    """Number of idempotent maps (equivalently permutations) of [n] with k fixed points."""
    _check_k(n, k)
    return comb(n, k) * k ** (n - k)


def cardinality_multiset(n: int, k: int) -> int:
    """Number of n-element multisets over [n] with exactly k distinct values."""
    _check_k(n, k)
    return comb(n, k) * comb(n - 1, k - 1)


@dataclass(frozen=True)
class CountTable:
    n: int
    rows: tuple[int, ...]  # rows[k - 1] is the count for degree k
    source: CountSource
    family: Family = Family.IDEMPOTENT

    @property
    def total(self) -> int:
        return sum(self.rows)

    def __str__(self) -> str:
        lines = [f"# family={self.family.value} n={self.n} source={self.source.value}"]
        lines += [f"k={k} count={c}" for k, c in enumerate(self.rows, start=1)]
        lines.append(f"total={self.total}")
        return "\n".join(lines)


def formula_table(n: int, family=Family.IDEMPOTENT) -> CountTable:
    family = Family(family)
    if n < 1:
        raise IpermError("n must be at least 1")
    card = cardinality_idempotent if family is Family.IDEMPOTENT else cardinality_multiset
    return CountTable(n, tuple(card(n, k) for k in range(1, n + 1)), CountSource.FORMULA, family)


def enumeration_table(n: int, family=Family.IDEMPOTENT) -> CountTable:
    family = Family(family)
    _guard(n)
    rows = [0] * n
    if family is Family.IDEMPOTENT:
        for iota in enumerate_idempotent_maps(n):
            rows[len(set(iota)) - 1] += 1
    else:
        for m in enumerate_multisets(n):
            rows[len(set(m)) - 1] += 1
    return CountTable(n, tuple(rows), CountSource.ENUMERATION, family)


# -- enumeration ----------------------------------------------------------


def _guard(n: int) -> None:
    if n < 1:
        raise IpermError("n must be at least 1")
    if n > ENUM_LIMIT:
        raise IpermError(f"enumeration is limited to n <= {ENUM_LIMIT}, got n={n}")


def _labelled(n: int):
    """Yield (A, labels): fixed set A and, for each idle element, an index into A."""
    for k in range(1, n + 1):
        for A in itertools.combinations(range(1, n + 1), k):
            for labels in itertools.product(range(k), repeat=n - k):
                yield A, labels


def _map_from_labels(n, A, labels):
    fixed = set(A)
    out = []
    it = iter(labels)
    for x in range(1, n + 1):
        out.append(x if x in fixed else A[next(it)])
    return tuple(out)


def _perm_from_labels(n, A, labels):
    # class j has 1 + s_j members; its boundary rank c_j goes to the fixed
    # element, and idle members take the following ranks in position order
    sizes = [1] * len(A)
    for j in labels:
        sizes[j] += 1
    boundary = list(itertools.accumulate([1] + sizes[:-1]))
    nxt = [c + 1 for c in boundary]
    fixed = {x: j for j, x in enumerate(A)}
    out = []
    it = iter(labels)
    for x in range(1, n + 1):
        if x in fixed:
            out.append(-boundary[fixed[x]])
        else:
            j = next(it)
            out.append(nxt[j])
            nxt[j] += 1
    return tuple(out)


def enumerate_idempotent_maps(n: int) -> Iterator[tuple[int, ...]]:
    """Every idempotent map of [n] once, built from its fixed set and labels."""
    _guard(n)
    yield from sorted(_map_from_labels(n, A, lab) for A, lab in _labelled(n))


def enumerate_idempotent_perms(n: int) -> Iterator[tuple[int, ...]]:
    """Every canonical sign-tagged idempotent permutation of [n] once.

    Idle ranks of a class increase with position, so these are exactly the
    permutations that arise from idempotent maps.
    """
    _guard(n)
    yield from sorted(_perm_from_labels(n, A, lab) for A, lab in _labelled(n))


def enumerate_multisets(n: int) -> Iterator[tuple[int, ...]]:
    _guard(n)
    yield from itertools.combinations_with_replacement(range(1, n + 1), n)


def enumerate_raw_maps(n: int) -> Iterator[tuple[int, ...]]:
    _guard(n)
    yield from itertools.product(range(1, n + 1), repeat=n)


def filter_idempotent_maps(n: int) -> Iterator[tuple[int, ...]]:
    """Same set as :func:`enumerate_idempotent_maps`, by testing all n^n maps."""
    for f in enumerate_raw_maps(n):
        if all(f[f[x] - 1] == f[x] for x in range(n)):
            yield f


def filter_idempotent_perms(n: int, canonical: bool = True) -> Iterator[tuple[int, ...]]:
    """Idempotent permutations found by testing every signed permutation."""
    _guard(n)
    found = []
    for p in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            cand = tuple(s * v for s, v in zip(signs, p))
            if validate_idempotent_perm(np.array(cand, dtype=np.int64), canonical=canonical):
                found.append(cand)
    yield from sorted(found)


# -- naive references -----------------------------------------------------


def compose(m: Sequence[int], p: Sequence[int]) -> tuple[int, ...]:
    """``x(i) = m(|p(i)|)``."""
    if len(m) != len(p):
        raise IpermError(f"lengths differ: {len(m)} and {len(p)}")
    check_idempotent_perm(np.array(p, dtype=np.int64))
    return tuple(m[abs(v) - 1] for v in p)


def reference_sort(a: Sequence[int]) -> tuple[int, ...]:
    check_raw_map(np.array(a, dtype=np.int64))
    return tuple(sorted(a))


def reference_stable_sort(pairs) -> tuple[tuple[int, int], ...]:
    """Sort (key, tag) pairs by key alone; ties keep their input order."""
    return tuple(sorted((tuple(p) for p in pairs), key=lambda p: p[0]))


def reference_invert(p: Sequence[int]) -> tuple[int, ...]:
    """Place ``x`` (with the sign of ``p(x)``) at position ``|p(x)|``."""
    n = len(p)
    out = [0] * n
    for x, v in enumerate(p, start=1):
        if not 1 <= abs(v) <= n or out[abs(v) - 1] != 0:
            raise InvalidState("not a permutation")
        out[abs(v) - 1] = x if v > 0 else -x
    return tuple(out)


def reference_map_to_perm(iota: Sequence[int]) -> tuple[int, ...]:
    """Ranks of a stable sort by (value, fixed first, position)."""
    check_idempotent_map(np.array(iota, dtype=np.int64))
    n = len(iota)
    order = sorted(range(n), key=lambda x: (iota[x], iota[x] != x + 1, x))
    out = [0] * n
    for r, x in enumerate(order, start=1):
        out[x] = -r if iota[x] == x + 1 else r
    return tuple(out)


def reference_perm_to_map(p: Sequence[int]) -> tuple[int, ...]:
    """Each element maps to the fixed element owning the largest boundary <= its rank."""
    check_idempotent_perm(np.array(p, dtype=np.int64))
    owner = {-v: x for x, v in enumerate(p, start=1) if v < 0}
    bounds = sorted(owner)
    out = []
    for v in p:
        c = max(b for b in bounds if b <= abs(v))
        out.append(owner[c])
    return tuple(out)


def reference_gamma(p: Sequence[int]) -> tuple[int, ...]:
    """Idle positions hold their own index; boundary ``|p(a)|`` holds ``-a``."""
    check_idempotent_perm(np.array(p, dtype=np.int64))
    out = list(range(1, len(p) + 1))
    for x, v in enumerate(p, start=1):
        if v < 0:
            out[-v - 1] = -x
    return tuple(out)


def reference_fill_forward(a: Sequence[int]) -> tuple[int, ...]:
    out = []
    for v in a:
        out.append(-v if v < 0 else out[-1])
    return tuple(out)


def reference_stable_rank(a: Sequence[int]) -> tuple[int, ...]:
    """Gather permutation ``sigma`` with ``a[sigma]`` idempotent, first occurrences fixed."""
    n = len(a)
    out = [0] * n
    first = {}
    for i, v in enumerate(a, start=1):
        first.setdefault(v, i)
    for v, i in first.items():
        out[v - 1] = i
    free = iter(j for j in range(n) if out[j] == 0)
    for i, v in enumerate(a, start=1):
        if first[v] != i:
            out[next(free)] = i
    return tuple(out)


# -- vectorized references for large random inputs -------------------------


def reference_sort_array(keys: np.ndarray) -> np.ndarray:
    """Counting sort of keys in [1, n] built from numpy primitives."""
    n = len(keys)
    counts = np.bincount(keys, minlength=n + 1)[1:]
    return np.repeat(np.arange(1, n + 1, dtype=np.int64), counts)


def reference_stable_order(keys: np.ndarray) -> np.ndarray:
    """1-based original positions of ``keys`` in stable sorted order."""
    return np.argsort(keys, kind="stable").astype(np.int64) + 1
