"""Array states, their validators, and class decomposition.

A key array of length ``n`` holds 1-based values. Depending on what has been
done to it, it is in one of the :class:`SemanticState` states; fixed elements
of permutations are tagged by a negative sign (the implicit characteristic
function). The state is never trusted: every consumer re-validates.

All validators run in O(n) and own their scratch (an n-entry "seen" mask for
permutation checks). ``check_*`` functions raise :class:`InvalidState` with the
first violated condition; ``validate_*`` functions return a bool.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidState, KeyOutOfRange, LengthOverflow

MAX_N = 2**62


class SemanticState(enum.Enum):
    RawMap = "RawMap"
    IdempotentMap = "IdempotentMap"
    IdempotentPerm = "IdempotentPerm"
    InverseIdempotentPerm = "InverseIdempotentPerm"
    Gamma = "Gamma"
    SortedMultiset = "SortedMultiset"
    RankPerm = "RankPerm"


@dataclass(frozen=True)
class ClassDecomposition:
    """Fixed indices ``A``, class boundaries ``C`` and class sizes ``cprime``."""

    k: int
    A: tuple[int, ...]
    C: tuple[int, ...]
    cprime: tuple[int, ...]

    def __str__(self) -> str:
        def join(xs):
            return ",".join(str(x) for x in xs)

        return f"k={self.k} A={join(self.A)} C={join(self.C)} c'={join(self.cprime)}"


@dataclass
class CharacteristicBits:
    """Explicit characteristic function: one 0/1 entry per element."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 1 or np.any(self.bits > 1):
            raise ValueError("characteristic bits must be a 1-D 0/1 sequence")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def degree(self) -> int:
        return int(self.bits.sum())


def as_key_array(data: Sequence[int]) -> np.ndarray:
    """Copy ``data`` into a fresh contiguous int64 array."""
    arr = np.array(data, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("key arrays are one-dimensional")
    return arr


def check_length(a) -> int:
    n = len(a)
    if n > MAX_N:
        raise LengthOverflow(f"n={n} exceeds {MAX_N}")
    return n


def _values(a) -> np.ndarray:
    check_length(a)
    return np.asarray(a, dtype=np.int64)


def to_implicit(magnitudes, phi: CharacteristicBits) -> np.ndarray:
    """Signed form of an all-positive array plus explicit characteristic bits."""
    mags = _values(magnitudes)
    if len(phi) != len(mags):
        raise ValueError("characteristic bits and array differ in length")
    return np.where(phi.bits == 1, -mags, mags)


def to_explicit(a) -> tuple[np.ndarray, CharacteristicBits]:
    """Split a sign-tagged array into magnitudes and explicit bits."""
    vals = _values(a)
    return np.abs(vals), CharacteristicBits((vals < 0).astype(np.uint8))


# -- checks ---------------------------------------------------------------


def _check_magnitudes(vals: np.ndarray) -> None:
    n = len(vals)
    mags = np.abs(vals)
    bad = np.flatnonzero((mags < 1) | (mags > n))
    if bad.size:
        p = int(bad[0])
        raise KeyOutOfRange(f"element {int(vals[p])} at position {p + 1} is outside [1, {n}]")


def _check_permutation(vals: np.ndarray) -> None:
    _check_magnitudes(vals)
    n = len(vals)
    seen = np.zeros(n, dtype=bool)
    seen[np.abs(vals) - 1] = True
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0]) + 1
        raise InvalidState(f"magnitudes are not a permutation of [{n}]: {missing} is missing")


def _check_fixed_order(vals: np.ndarray, first_at_start: bool) -> np.ndarray:
    """Negative magnitudes increase by position; returns negative positions."""
    neg = np.flatnonzero(vals < 0)
    if len(vals) and neg.size == 0:
        raise InvalidState("no fixed (negative) element")
    if first_at_start and len(vals) and vals[0] > 0:
        raise InvalidState("position 1 is not fixed")
    mags = -vals[neg]
    drop = np.flatnonzero(np.diff(mags) <= 0)
    if drop.size:
        p = int(neg[drop[0] + 1]) + 1
        raise InvalidState(f"fixed magnitudes not increasing at position {p}")
    return neg


def check_raw_map(a) -> None:
    vals = _values(a)
    n = len(vals)
    # min/max need no O(n) temporaries; the sort hot path relies on that
    if n == 0 or (vals.min() >= 1 and vals.max() <= n):
        return
    bad = np.flatnonzero((vals < 1) | (vals > n))
    p = int(bad[0])
    raise KeyOutOfRange(f"element {int(vals[p])} at position {p + 1} is outside [1, {n}]")


def check_idempotent_map(a) -> None:
    vals = _values(a)
    check_raw_map(vals)
    img = vals[vals - 1]
    bad = np.flatnonzero(img != vals)
    if bad.size:
        x = int(bad[0]) + 1
        raise InvalidState(f"iota(iota({x})) != iota({x})")


def check_idempotent_perm(a, canonical: bool = False) -> None:
    vals = _values(a)
    _check_permutation(vals)
    neg = _check_fixed_order(vals, first_at_start=False)
    if neg.size and vals[neg[0]] != -1:
        raise InvalidState(f"first fixed element is {int(-vals[neg[0]])}, expected 1")
    if canonical:
        _check_idle_order(vals)


def check_inverse_idempotent_perm(a, canonical: bool = False) -> None:
    vals = _values(a)
    _check_permutation(vals)
    _check_fixed_order(vals, first_at_start=True)
    if canonical:
        # idle entries of each class follow their fixed entry in increasing order
        prev = np.concatenate(([0], vals[:-1]))
        bad = np.flatnonzero((vals > 0) & (prev > 0) & (vals <= prev))
        if bad.size:
            raise InvalidState(f"idle elements out of order at position {int(bad[0]) + 1}")


def _check_idle_order(vals: np.ndarray) -> None:
    n = len(vals)
    if n < 2:
        return
    pos = np.empty(n, dtype=np.int64)
    pos[np.abs(vals) - 1] = np.arange(n)
    is_fixed_rank = np.zeros(n + 1, dtype=bool)
    is_fixed_rank[-vals[vals < 0]] = True
    r = np.arange(1, n)  # consecutive ranks r, r + 1
    same_class_idle = ~is_fixed_rank[r] & ~is_fixed_rank[r + 1]
    bad = np.flatnonzero(same_class_idle & (pos[r - 1] > pos[r]))
    if bad.size:
        rr = int(r[bad[0]])
        raise InvalidState(f"idle ranks {rr} and {rr + 1} of one class are out of position order")


def check_gamma(a) -> None:
    vals = _values(a)
    _check_magnitudes(vals)
    _check_fixed_order(vals, first_at_start=True)
    idx = np.arange(1, len(vals) + 1)
    bad = np.flatnonzero((vals > 0) & (vals != idx))
    if bad.size:
        p = int(bad[0]) + 1
        raise InvalidState(f"idle position {p} holds {int(vals[p - 1])}, expected {p}")


def check_sorted_multiset(a) -> None:
    vals = _values(a)
    check_raw_map(vals)
    bad = np.flatnonzero(np.diff(vals) < 0)
    if bad.size:
        raise InvalidState(f"decreasing at position {int(bad[0]) + 2}")


def check_rank_perm(a) -> None:
    vals = _values(a)
    check_raw_map(vals)
    _check_permutation(vals)


_CHECKS = {
    SemanticState.RawMap: check_raw_map,
    SemanticState.IdempotentMap: check_idempotent_map,
    SemanticState.IdempotentPerm: check_idempotent_perm,
    SemanticState.InverseIdempotentPerm: check_inverse_idempotent_perm,
    SemanticState.Gamma: check_gamma,
    SemanticState.SortedMultiset: check_sorted_multiset,
    SemanticState.RankPerm: check_rank_perm,
}


def check_state(a, state: SemanticState) -> None:
    _CHECKS[SemanticState(state)](a)


def _predicate(check):
    def validate(a, *args, **kwargs) -> bool:
        try:
            check(a, *args, **kwargs)
        except InvalidState:
            return False
        return True

    validate.__name__ = check.__name__.replace("check_", "validate_")
    validate.__doc__ = f"Boolean form of :func:`{check.__name__}`."
    return validate


validate_raw_map = _predicate(check_raw_map)
validate_idempotent_map = _predicate(check_idempotent_map)
validate_idempotent_perm = _predicate(check_idempotent_perm)
validate_inverse_idempotent_perm = _predicate(check_inverse_idempotent_perm)
validate_gamma = _predicate(check_gamma)
validate_sorted_multiset = _predicate(check_sorted_multiset)
validate_rank_perm = _predicate(check_rank_perm)
validate_state = _predicate(check_state)


def decompose(a, state: SemanticState) -> ClassDecomposition:
    """Extract ``(k, A, C, c')`` from an idempotent object.

    Supported states are IdempotentMap, IdempotentPerm, InverseIdempotentPerm,
    Gamma and SortedMultiset. The array is validated first.
    """
    state = SemanticState(state)
    vals = _values(a)
    check_state(vals, state)
    n = len(vals)
    if state is SemanticState.IdempotentMap:
        A = np.flatnonzero(vals == np.arange(1, n + 1)) + 1
        cprime = np.bincount(vals, minlength=n + 1)[A]
        C = np.concatenate(([1], 1 + np.cumsum(cprime)[:-1])) if n else A
    elif state is SemanticState.SortedMultiset:
        A, cprime = np.unique(vals, return_counts=True)
        C = np.concatenate(([1], 1 + np.cumsum(cprime)[:-1])) if n else A
    else:
        neg = np.flatnonzero(vals < 0)
        if state is SemanticState.IdempotentPerm:
            A, C = neg + 1, -vals[neg]
        elif state in (SemanticState.InverseIdempotentPerm, SemanticState.Gamma):
            C, A = neg + 1, -vals[neg]
        else:
            raise ValueError(f"{state.value} has no class decomposition")
        cprime = np.diff(np.concatenate((C, [n + 1])))

    def tup(xs):
        return tuple(int(x) for x in xs)

    return ClassDecomposition(len(A), tup(A), tup(C), tup(cprime))
