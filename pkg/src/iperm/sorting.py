"""Linear-time sorting of n keys drawn from [1, n].

Three pipelines built from :mod:`iperm.transforms`:

* ``unstable`` rewrites the keys in place through the idempotent map, the
  idempotent permutation and gamma; only scalar words are used.
* ``stable-aux`` first routes the keys through a stable rank permutation held
  in a caller-provided auxiliary array.
* ``stable-preserving`` also uses the auxiliary array, but keys are only ever
  moved, never rewritten.

The stable pipelines accept an optional satellite array ``sat`` (one word per
key) that follows its key; this is how stability is observed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .core_model import check_length, check_raw_map
from .errors import InvalidState


class SortAlgorithm(enum.Enum):
    UNSTABLE = "unstable"
    STABLE_AUX = "stable-aux"
    STABLE_PRESERVING = "stable-preserving"


def _prepare(a, aux, sat, check):
    if isinstance(a, np.ndarray) and a.dtype != np.int64:
        raise TypeError(f"key arrays must be int64, got {a.dtype}")
    n = check_length(a)
    if check:
        check_raw_map(a)
    if aux is None:
        aux = np.zeros(n, dtype=np.int64)
    elif len(aux) != n:
        raise ValueError(f"aux has length {len(aux)}, expected {n}")
    if sat is not None and len(sat) != n:
        raise ValueError(f"sat has length {len(sat)}, expected {n}")
    return aux


STAGES = {
    SortAlgorithm.UNSTABLE: (
        ("to_idempotent_unstable", "a"),
        ("map_to_perm", "a"),
        ("associative_permute", "a"),
        ("fill_forward", "a"),
    ),
    SortAlgorithm.STABLE_AUX: (
        ("stable_rank_permutation", "a", "aux"),
        ("apply_forward", "a", "aux"),
        ("map_to_perm", "a"),
        ("associative_permute", "a"),
        ("fill_forward", "a"),
    ),
    SortAlgorithm.STABLE_PRESERVING: (
        ("stable_rank_permutation", "a", "aux"),
        ("apply_forward", "a", "aux"),
        ("map_to_perm_out", "a", "aux"),
        ("apply_inverse", "a", "aux"),
    ),
}


def run_stages(algorithm, a, aux=None, hook=None) -> None:
    """Run the unkeyed kernel sequence of ``algorithm`` without validation.

    ``hook(name)``, when given, is called before each stage.
    """
    arrays = {"a": a, "aux": aux}
    for name, *roles in STAGES[SortAlgorithm(algorithm)]:
        if hook is not None:
            hook(name)
        _kernels.run(name, *(arrays[r] for r in roles))


def sort_unstable_inplace(a, check: bool = True) -> None:
    """Sort ``a`` in place; intermediate values range over [-n, n]."""
    if isinstance(a, np.ndarray) and a.dtype != np.int64:
        raise TypeError(f"key arrays must be int64, got {a.dtype}")
    check_length(a)
    if check:
        check_raw_map(a)
    run_stages(SortAlgorithm.UNSTABLE, a)


def sort_stable_aux(a, aux=None, sat=None, check: bool = True) -> None:
    """Stable sort using an n-word auxiliary array (contents destroyed).

    Keys are rewritten through negative ranks on the way, so intermediate
    values range over [-n, n] here as well.
    """
    aux = _prepare(a, aux, sat, check)
    if sat is None:
        run_stages(SortAlgorithm.STABLE_AUX, a, aux)
        return
    _kernels.run("stable_rank_permutation", a, aux)
    _kernels.run("apply_forward_keyed", a, sat, aux)
    _kernels.run("map_to_perm", a)
    # the ranks are about to be consumed by associative permuting, so
    # satellites take their destinations from a copy in aux
    _kernels.run("copy_abs", a, aux)
    _kernels.run("apply_inverse", sat, aux)
    _kernels.run("associative_permute", a)
    _kernels.run("fill_forward", a)


def sort_stable_preserving(a, aux=None, sat=None, check: bool = True) -> None:
    """Stable sort that only moves keys; ``aux`` (n words) is destroyed."""
    aux = _prepare(a, aux, sat, check)
    if sat is None:
        run_stages(SortAlgorithm.STABLE_PRESERVING, a, aux)
        return
    _kernels.run("stable_rank_permutation", a, aux)
    _kernels.run("apply_forward_keyed", a, sat, aux)
    _kernels.run("map_to_perm_out", a, aux)
    _kernels.run("apply_inverse_keyed", a, sat, aux)


_PIPELINES = {
    SortAlgorithm.UNSTABLE: sort_unstable_inplace,
    SortAlgorithm.STABLE_AUX: sort_stable_aux,
    SortAlgorithm.STABLE_PRESERVING: sort_stable_preserving,
}


@dataclass
class SortRequest:
    keys: object
    algorithm: SortAlgorithm = SortAlgorithm.UNSTABLE
    aux: Optional[object] = None
    sat: Optional[object] = None

    def __post_init__(self):
        self.algorithm = SortAlgorithm(self.algorithm)
        if self.algorithm is SortAlgorithm.UNSTABLE:
            if self.aux is not None:
                raise InvalidState("the unstable pipeline takes no auxiliary array")
            if self.sat is not None:
                raise InvalidState("the unstable pipeline does not carry satellites")
        elif self.aux is None:
            self.aux = np.zeros(len(self.keys), dtype=np.int64)

    def run(self, check: bool = True) -> None:
        if self.algorithm is SortAlgorithm.UNSTABLE:
            sort_unstable_inplace(self.keys, check=check)
        else:
            _PIPELINES[self.algorithm](self.keys, self.aux, self.sat, check=check)


def sort(a, algorithm="unstable", aux=None, sat=None, check: bool = True) -> None:
    """Sort ``a`` in place with the named pipeline; ``sat`` follows its key."""
    SortRequest(a, algorithm, aux, sat).run(check=check)
