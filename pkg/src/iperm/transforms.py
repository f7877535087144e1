"""In-place transformations among maps, idempotent maps and idempotent permutations.

Every function mutates its array argument(s) and returns ``None`` unless it
fills an output array, in which case the output is returned. Arrays may be
int64 numpy arrays (run by the compiled kernels), Python lists, or any object
supporting ``len`` and integer indexing (run by the same kernels in Python).

Pass ``check=False`` to skip the O(n) precondition validation.
"""

from __future__ import annotations

import enum
from typing import Callable, Iterator, Optional

import numpy as np

from . import _kernels
from .core_model import (
    CharacteristicBits,
    check_gamma,
    check_idempotent_map,
    check_idempotent_perm,
    check_inverse_idempotent_perm,
    check_length,
    check_rank_perm,
    check_raw_map,
    validate_idempotent_perm,
)
from .errors import InvalidState, NeedsBitTag


class TagMode(enum.Enum):
    SIGN = "sign"
    BIT = "bit"


class BitScratch:
    """Caller-owned scratch of exactly ``nbits`` bits, packed eight per byte.

    It must be all-zero when lent to an operation and is all-zero again when
    the operation returns.
    """

    def __init__(self, nbits: int):
        self.nbits = nbits
        self.words = np.zeros((nbits + 7) // 8, dtype=np.uint8)

    def __len__(self) -> int:
        return self.nbits

    def is_clear(self) -> bool:
        # max() reduces without the boolean temporary that any() would build
        return self.words.size == 0 or int(self.words.max()) == 0


def _keys(a) -> int:
    if isinstance(a, np.ndarray) and a.dtype != np.int64:
        raise TypeError(f"key arrays must be int64, got {a.dtype}")
    return check_length(a)


def _same_length(a, b, what: str) -> None:
    if len(a) != len(b):
        raise ValueError(f"{what} has length {len(b)}, expected {len(a)}")


def to_idempotent_unstable(a, check: bool = True) -> None:
    """Rearrange a map of [n] into itself so that it becomes idempotent.

    Swaps ``a[i]`` with ``a[a[i]]`` until every value sits on its own index
    once. The result is a rearrangement of the input, not a stable one.
    """
    _keys(a)
    if check:
        check_raw_map(a)
    _kernels.run("to_idempotent_unstable", a)


def stable_rank_permutation(a, out=None, check: bool = True):
    """Compute the permutation ``sigma`` with ``a[sigma[i]]`` idempotent and stable.

    The first occurrence of each distinct value lands on the slot named by the
    value; later duplicates fill the remaining slots in scan order. ``a`` is
    not modified. Returns ``out``.
    """
    n = _keys(a)
    if check:
        check_raw_map(a)
    if out is None:
        out = np.zeros(n, dtype=np.int64)
    _keys(out)
    _same_length(a, out, "out")
    _kernels.run("stable_rank_permutation", a, out)
    return out


def apply_forward(a, sigma, check: bool = True) -> None:
    """Gather ``a[i] <- a[sigma[i]]`` in place; ``sigma`` is reset to the identity."""
    _keys(a)
    _keys(sigma)
    _same_length(a, sigma, "sigma")
    if check:
        check_rank_perm(sigma)
    _kernels.run("apply_forward", a, sigma)


def apply_inverse(a, sigma_inv, check: bool = True) -> None:
    """Scatter ``a[sigma_inv[i]] <- a[i]`` in place; ``sigma_inv`` is reset to the identity."""
    _keys(a)
    _keys(sigma_inv)
    _same_length(a, sigma_inv, "sigma_inv")
    if check:
        check_rank_perm(sigma_inv)
    _kernels.run("apply_inverse", a, sigma_inv)


def invert_inplace(a, mode="bit", scratch: Optional[BitScratch] = None,
                   phi: Optional[CharacteristicBits] = None, check: bool = True) -> None:
    """Invert a permutation in place.

    ``mode="sign"`` marks finished elements with the sign bit, so the input
    must be all-positive; an explicit characteristic function ``phi`` is
    carried along and becomes the inverse's characteristic function.

    ``mode="bit"`` inverts a sign-tagged idempotent permutation (or its
    inverse); the sign bit is taken, so finished positions are marked in an
    n-bit ``scratch`` instead.
    """
    mode = TagMode(mode)
    n = _keys(a)
    if mode is TagMode.SIGN:
        vals = np.asarray(a)
        if n and vals.min() < 0:
            raise NeedsBitTag("sign-tagged inversion needs an all-positive array")
        if check:
            check_rank_perm(a)
        if phi is None:
            _kernels.run("invert_signtag", a)
        else:
            _same_length(a, phi, "phi")
            _kernels.run("invert_signtag_bits", a, phi.bits)
        return
    if check and not validate_idempotent_perm(a):
        check_inverse_idempotent_perm(a)
    if scratch is None:
        scratch = BitScratch(n)
    if scratch.nbits != n:
        raise ValueError(f"scratch holds {scratch.nbits} bits, expected {n}")
    if not scratch.is_clear():
        raise ValueError("scratch must be zeroed")
    _kernels.run("invert_bittag", a, scratch.words)


def map_to_perm(a, check: bool = True) -> None:
    """Replace an idempotent map by its idempotent permutation in O(n).

    Each element becomes the rank of its value; the fixed element of a class
    gets the class's first rank (negated) and idle elements the following
    ranks in position order.
    """
    _keys(a)
    if check:
        check_idempotent_map(a)
    _kernels.run("map_to_perm", a)


def map_to_perm_out(a, out=None, check: bool = True):
    """Write the ranks of an idempotent map into ``out``, unsigned; ``a`` is only read."""
    n = _keys(a)
    if check:
        check_idempotent_map(a)
    if out is None:
        out = np.zeros(n, dtype=np.int64)
    _keys(out)
    _same_length(a, out, "out")
    _kernels.run("map_to_perm_out", a, out)
    return out


def map_to_perm_quadratic(a, check: bool = True) -> None:
    """Same result as :func:`map_to_perm`, with one O(n) scan per fixed element."""
    _keys(a)
    if check:
        check_idempotent_map(a)
    _kernels.run("map_to_perm_quadratic", a)


def perm_to_map_quadratic(a, check: bool = True) -> None:
    """Replace an idempotent permutation by its idempotent map in O(kn)."""
    _keys(a)
    if check:
        check_idempotent_perm(a)
    _kernels.run("perm_to_map_quadratic", a)


def map_from_inverse(a, out=None, check: bool = True):
    """Build the idempotent map from an inverse idempotent permutation into ``out``."""
    n = _keys(a)
    if check:
        check_inverse_idempotent_perm(a)
    if out is None:
        out = np.zeros(n, dtype=np.int64)
    _keys(out)
    _same_length(a, out, "out")
    _kernels.run("map_from_inverse", a, out)
    return out


def check_fill_forward_input(a) -> None:
    vals = np.asarray(a, dtype=np.int64)
    if len(vals) and vals[0] > 0:
        raise InvalidState("position 1 is not fixed")
    try:
        check_inverse_idempotent_perm(vals)
    except InvalidState as inverse_error:
        try:
            check_gamma(vals)
        except InvalidState:
            raise inverse_error from None


def fill_forward_inplace(a, check: bool = True) -> None:
    """Turn an inverse idempotent permutation (or gamma) into the sorted multiset.

    Negative entries become their magnitude; positive entries repeat their left
    neighbour. The input cannot be recovered afterwards.
    """
    _keys(a)
    if check:
        check_fill_forward_input(a)
    _kernels.run("fill_forward", a)


def iter_multiset(a, check: bool = True) -> Iterator[int]:
    """Yield the sorted multiset encoded by an inverse idempotent permutation."""
    _keys(a)
    if check:
        check_inverse_idempotent_perm(a)
    for v in _kernels.iter_multiset(a):
        yield int(v)


def multiset_stream(a, emit: Callable[[int], object], check: bool = True) -> None:
    """Call ``emit`` with each value of the sorted multiset, leaving ``a`` untouched."""
    for v in iter_multiset(a, check=check):
        emit(v)


def associative_permute(a, check: bool = True) -> None:
    """Invert the fixed elements of an idempotent permutation while permuting idle ones.

    Idle positions end up holding their own index and class boundary ``c_j``
    holds ``-a_j``; :func:`fill_forward_inplace` then yields the sorted multiset.
    """
    _keys(a)
    if check:
        check_idempotent_perm(a)
    _kernels.run("associative_permute", a)
