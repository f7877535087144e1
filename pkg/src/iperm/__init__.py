"""Idempotent maps, idempotent permutations and linear-time sorting of keys in [1, n]."""

from .core_model import (
    ClassDecomposition,
    CharacteristicBits,
    SemanticState,
    as_key_array,
    check_state,
    decompose,
    validate_gamma,
    validate_idempotent_map,
    validate_idempotent_perm,
    validate_inverse_idempotent_perm,
    validate_rank_perm,
    validate_raw_map,
    validate_sorted_multiset,
)
from .errors import InvalidState, IpermError, KeyOutOfRange, LengthOverflow, NeedsBitTag
from .sorting import SortAlgorithm, SortRequest, sort, sort_stable_aux, sort_stable_preserving, sort_unstable_inplace
from .transforms import (
    BitScratch,
    TagMode,
    apply_forward,
    apply_inverse,
    associative_permute,
    fill_forward_inplace,
    invert_inplace,
    iter_multiset,
    map_from_inverse,
    map_to_perm,
    map_to_perm_out,
    map_to_perm_quadratic,
    multiset_stream,
    perm_to_map_quadratic,
    stable_rank_permutation,
    to_idempotent_unstable,
)

__version__ = "0.1.0"
