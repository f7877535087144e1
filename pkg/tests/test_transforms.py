import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import GAMMA, IOTA, MULTISET, PI, PI_INV, PI_STABLE, arr
from iperm import core_model as cm
from iperm import oracle
from iperm import transforms as tf
from iperm.errors import InvalidState, KeyOutOfRange, NeedsBitTag
from iperm.instrument import peak_allocation

BACKENDS = ["native", "python"]


def make(values, backend):
    return arr(values) if backend == "native" else list(values)


def tup(a):
    return tuple(int(v) for v in a)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# -- worked examples ------------------------------------------------------


@pytest.mark.parametrize("given_,expected", [
    ((3, 1, 3), (1, 3, 3)),
    ((1, 2, 3), (1, 2, 3)),
    ((2, 2, 2, 5, 7, 7, 7, 7, 8, 9), (2, 2, 2, 7, 5, 7, 7, 8, 9, 7)),
])
def test_to_idempotent_unstable(given_, expected, backend):
    a = make(given_, backend)
    tf.to_idempotent_unstable(a)
    assert tup(a) == expected


@pytest.mark.parametrize("given_,expected", [
    ((3, 1, 3), (2, 3, 1)),
    ((1, 2, 3), (1, 2, 3)),
    ((1, 1, 2), (1, 3, 2)),
    (IOTA, (2, 1, 4, 6, 5, 7, 3, 8, 9, 10)),
])
def test_stable_rank_permutation(given_, expected, backend):
    a = make(given_, backend)
    out = tf.stable_rank_permutation(a, out=make([0] * len(given_), backend))
    assert tup(out) == expected
    assert tup(a) == given_


@pytest.mark.parametrize("a,sigma,expected", [
    ((3, 1, 3), (2, 3, 1), (1, 3, 3)),
    ((3, 3, 3), (1, 2, 3), (3, 3, 3)),
    ((2, 1, 4, 3), (2, 1, 4, 3), (1, 2, 3, 4)),
])
def test_apply_forward(a, sigma, expected, backend):
    a, sigma_ = make(a, backend), make(sigma, backend)
    tf.apply_forward(a, sigma_)
    assert tup(a) == expected
    assert tup(sigma_) == tuple(range(1, len(sigma) + 1))


@pytest.mark.parametrize("a,sigma_inv,expected", [
    ((1, 2, 3), (2, 3, 1), (3, 1, 2)),
    ((1, 2, 3), (1, 2, 3), (1, 2, 3)),
    ((1, 3, 3), (2, 1, 3), (3, 1, 3)),
])
def test_apply_inverse(a, sigma_inv, expected, backend):
    a, s = make(a, backend), make(sigma_inv, backend)
    tf.apply_inverse(a, s)
    assert tup(a) == expected
    assert tup(s) == tuple(range(1, len(expected) + 1))


def test_apply_rejects_non_permutation():
    with pytest.raises(InvalidState):
        tf.apply_forward(arr([1, 2]), arr([1, 1]))
    with pytest.raises(ValueError):
        tf.apply_inverse(arr([1, 2]), arr([1]))


@pytest.mark.parametrize("given_,expected", [((PI, PI_INV)), ((PI_INV, PI)), ((PI_STABLE, oracle.reference_invert(PI_STABLE)))])
def test_invert_bittag(given_, expected, backend):
    a = make(given_, backend)
    scratch = tf.BitScratch(len(given_))
    tf.invert_inplace(a, mode="bit", scratch=scratch)
    assert tup(a) == expected
    assert scratch.is_clear()


def test_invert_signtag(backend):
    a = make((2, 3, 1), backend)
    tf.invert_inplace(a, mode="sign")
    assert tup(a) == (3, 1, 2)
    with pytest.raises(NeedsBitTag):
        tf.invert_inplace(arr(PI), mode="sign")


def test_invert_signtag_carries_explicit_bits():
    mags, phi = cm.to_explicit(arr(PI))
    tf.invert_inplace(mags, mode="sign", phi=phi)
    assert tup(cm.to_implicit(mags, phi)) == PI_INV


def test_invert_scratch_contract():
    with pytest.raises(ValueError):
        tf.invert_inplace(arr(PI), scratch=tf.BitScratch(9))
    dirty = tf.BitScratch(10)
    dirty.words[0] = 1
    with pytest.raises(ValueError):
        tf.invert_inplace(arr(PI), scratch=dirty)
    assert len(tf.BitScratch(10)) == 10
    assert tf.BitScratch(10).words.nbytes == 2


def test_invert_rejects_raw_map():
    with pytest.raises(InvalidState):
        tf.invert_inplace(arr([2, -1, 1]))


@pytest.mark.parametrize("op", [tf.map_to_perm, tf.map_to_perm_quadratic])
@pytest.mark.parametrize("given_,expected", [
    (IOTA, PI_STABLE),
    ((1, 3, 3), (-1, 3, -2)),
    ((1, 2, 3), (-1, -2, -3)),
    ((1,), (-1,)),
])
def test_map_to_perm(op, given_, expected, backend):
    a = make(given_, backend)
    op(a)
    assert tup(a) == expected


@pytest.mark.parametrize("given_,expected", [
    ((1, 3, 3), (1, 3, 2)),
    ((1, 2, 3), (1, 2, 3)),
    (IOTA, (2, 1, 6, 7, 4, 8, 5, 9, 10, 3)),
])
def test_map_to_perm_out(given_, expected, backend):
    a = make(given_, backend)
    out = tf.map_to_perm_out(a, make([7] * len(given_), backend))
    assert tup(out) == expected
    assert tup(a) == given_


@pytest.mark.parametrize("given_,expected", [
    (PI, IOTA),
    (PI_STABLE, IOTA),
    ((-1, -2, -3), (1, 2, 3)),
    ((-1, 3, -2), (1, 3, 3)),
])
def test_perm_to_map_quadratic(given_, expected, backend):
    a = make(given_, backend)
    tf.perm_to_map_quadratic(a)
    assert tup(a) == expected


@pytest.mark.parametrize("given_,expected", [
    (PI_INV, IOTA),
    ((-1,), (1,)),
    ((-1, -2, -3), (1, 2, 3)),
])
def test_map_from_inverse(given_, expected, backend):
    a = make(given_, backend)
    out = tf.map_from_inverse(a, make([0] * len(given_), backend))
    assert tup(out) == expected
    assert tup(a) == given_


@pytest.mark.parametrize("given_", [PI_INV, GAMMA])
def test_fill_forward(given_, backend):
    a = make(given_, backend)
    tf.fill_forward_inplace(a)
    assert tup(a) == MULTISET


def test_fill_forward_rejects_positive_start():
    with pytest.raises(InvalidState, match="position 1"):
        tf.fill_forward_inplace(arr([2, -1]))


@pytest.mark.parametrize("given_,expected", [
    (PI_INV, MULTISET),
    ((-1,), (1,)),
    ((-1, 2), (1, 1)),
])
def test_multiset_stream(given_, expected, backend):
    a = make(given_, backend)
    got = []
    tf.multiset_stream(a, got.append)
    assert tuple(got) == expected
    assert tup(a) == given_
    assert tuple(tf.iter_multiset(a)) == expected


@pytest.mark.parametrize("given_,expected", [
    (PI, GAMMA),
    (PI_STABLE, GAMMA),
    ((-1, -2, -3), (-1, -2, -3)),
    ((2, -1, 3), (-2, 2, 3)),
])
def test_associative_permute(given_, expected, backend):
    a = make(given_, backend)
    tf.associative_permute(a)
    assert tup(a) == expected


@pytest.mark.parametrize("op", [
    tf.to_idempotent_unstable, tf.map_to_perm, tf.map_to_perm_quadratic,
    tf.perm_to_map_quadratic, tf.associative_permute, tf.fill_forward_inplace,
])
def test_empty_is_noop(op):
    a = arr([])
    op(a)
    assert a.size == 0


def test_out_of_range_keys_rejected():
    with pytest.raises(KeyOutOfRange):
        tf.to_idempotent_unstable(arr([1, 4, 2]))
    with pytest.raises(TypeError):
        tf.to_idempotent_unstable(np.array([1, 2], dtype=np.int32))


# -- exhaustive over small n ----------------------------------------------


@pytest.mark.parametrize("n", range(1, 7))
def test_exhaustive_maps(n):
    for iota in oracle.enumerate_idempotent_maps(n):
        p = arr(iota)
        tf.map_to_perm(p)
        assert tup(p) == oracle.reference_map_to_perm(iota)
        q = arr(iota)
        tf.map_to_perm_quadratic(q)
        assert np.array_equal(p, q)
        back = p.copy()
        tf.perm_to_map_quadratic(back)
        assert tup(back) == iota
        inv = p.copy()
        tf.invert_inplace(inv)
        assert tup(tf.map_from_inverse(inv)) == iota
        m = inv.copy()
        tf.fill_forward_inplace(m)
        assert oracle.compose(tup(m), tup(p)) == iota


@pytest.mark.parametrize("n", range(1, 7))
def test_exhaustive_perms(n):
    for pi in oracle.enumerate_idempotent_perms(n):
        a = arr(pi)
        tf.invert_inplace(a)
        assert tup(a) == oracle.reference_invert(pi)
        tf.invert_inplace(a)
        assert tup(a) == pi
        g = arr(pi)
        tf.associative_permute(g)
        assert tup(g) == oracle.reference_gamma(pi)
        inv = arr(oracle.reference_invert(pi))
        tf.fill_forward_inplace(inv)
        tf.fill_forward_inplace(g)
        assert np.array_equal(g, inv)
        as_map = arr(pi)
        tf.perm_to_map_quadratic(as_map)
        assert oracle.compose(tup(inv), pi) == tup(as_map)


@pytest.mark.parametrize("n", range(1, 5))
def test_exhaustive_broad_perms(n):
    # idle ranks in any order: inversion and associative permuting still apply
    for pi in oracle.filter_idempotent_perms(n, canonical=False):
        a = arr(pi)
        tf.invert_inplace(a)
        assert tup(a) == oracle.reference_invert(pi)
        g = arr(pi)
        tf.associative_permute(g)
        assert tup(g) == oracle.reference_gamma(pi)
        m = arr(pi)
        tf.perm_to_map_quadratic(m)
        assert tup(m) == oracle.reference_perm_to_map(pi)


@pytest.mark.parametrize("n", range(1, 6))
def test_exhaustive_stable_rank(n):
    for f in itertools.product(range(1, n + 1), repeat=n):
        sigma = tf.stable_rank_permutation(arr(f))
        assert tup(sigma) == oracle.reference_stable_rank(f)
        tags = list(range(1, n + 1))
        gathered = [(f[s - 1], tags[s - 1]) for s in sigma]
        a = arr(f)
        tf.apply_forward(a, sigma)
        assert cm.validate_idempotent_map(a)
        assert tup(a) == tuple(k for k, _ in gathered)
        # fixed slot holds the first occurrence; idle duplicates keep input order
        by_value = {}
        for pos, (k, t) in enumerate(gathered, start=1):
            by_value.setdefault(k, []).append((pos != k, t))
        for entries in by_value.values():
            tags_in_order = [t for _, t in sorted(entries)]
            assert tags_in_order == sorted(tags_in_order)


@pytest.mark.parametrize("n", range(1, 6))
def test_exhaustive_to_idempotent(n):
    for f in itertools.product(range(1, n + 1), repeat=n):
        a = arr(f)
        tf.to_idempotent_unstable(a)
        assert cm.validate_idempotent_map(a)
        assert sorted(a.tolist()) == sorted(f)


# -- random and property-based --------------------------------------------


def random_perm(rng, n):
    """A random canonical idempotent permutation via a random idempotent map."""
    k = int(rng.integers(1, n + 1))
    fixed = np.sort(rng.choice(n, size=k, replace=False)) + 1
    iota = fixed[rng.integers(0, k, size=n)]
    iota[fixed - 1] = fixed
    tf.map_to_perm(iota)
    return iota


def test_inversion_involution_large(rng):
    n = 10**5
    scratch = tf.BitScratch(n)
    for _ in range(1000):
        pi = random_perm(rng, n)
        a = pi.copy()
        tf.invert_inplace(a, scratch=scratch, check=False)
        tf.invert_inplace(a, scratch=scratch, check=False)
        assert np.array_equal(a, pi)
        assert scratch.is_clear()


def test_large_random_against_vectorized_reference(rng):
    n = 200_000
    pi = random_perm(rng, n)
    inv = pi.copy()
    tf.invert_inplace(inv)
    expected = np.empty(n, dtype=np.int64)
    expected[np.abs(pi) - 1] = np.sign(pi) * np.arange(1, n + 1)
    assert np.array_equal(inv, expected)
    g = pi.copy()
    tf.associative_permute(g)
    gamma = np.arange(1, n + 1)
    neg = np.flatnonzero(pi < 0)
    gamma[-pi[neg] - 1] = -(neg + 1)
    assert np.array_equal(g, gamma)


raw_maps = st.integers(1, 40).flatmap(lambda n: st.lists(st.integers(1, n), min_size=n, max_size=n))


@settings(max_examples=300, deadline=None)
@given(raw_maps)
def test_property_pipeline_states(f):
    a = arr(f)
    tf.to_idempotent_unstable(a)
    cm.check_idempotent_map(a)
    tf.map_to_perm(a)
    cm.check_idempotent_perm(a, canonical=True)
    tf.invert_inplace(a)
    cm.check_inverse_idempotent_perm(a, canonical=True)
    assert list(tf.iter_multiset(a)) == sorted(f)


@settings(max_examples=300, deadline=None)
@given(raw_maps)
def test_property_map_perm_agree(f):
    a = arr(f)
    tf.to_idempotent_unstable(a)
    iota = tup(a)
    fast, slow = arr(iota), list(iota)
    tf.map_to_perm(fast)
    tf.map_to_perm_quadratic(slow)
    assert tup(fast) == tuple(slow) == oracle.reference_map_to_perm(iota)
    out = tf.map_to_perm_out(arr(iota))
    assert np.array_equal(out, np.abs(fast))
    tf.associative_permute(fast)
    cm.check_gamma(fast)
    assert cm.decompose(fast, "Gamma") == cm.decompose(arr(iota), "IdempotentMap")


@settings(max_examples=200, deadline=None)
@given(st.permutations(list(range(1, 30))))
def test_property_signtag_inverse(p):
    a = arr(p)
    tf.invert_inplace(a, mode="sign")
    assert np.array_equal(arr(p)[a - 1], np.arange(1, len(p) + 1))


# -- space ----------------------------------------------------------------

SPACE_N = 1 << 18
LIMIT = 16 * 1024


def _space_inputs(rng):
    n = SPACE_N
    f = rng.integers(1, n + 1, size=n)
    iota = f.copy()
    tf.to_idempotent_unstable(iota)
    pi = iota.copy()
    tf.map_to_perm(pi)
    inv = pi.copy()
    tf.invert_inplace(inv)
    return f, iota, pi, inv


def test_constant_space(rng):
    f, iota, pi, inv = _space_inputs(rng)
    n = len(f)
    out = np.zeros(n, dtype=np.int64)
    scratch = tf.BitScratch(n)
    cases = [
        (lambda a: tf.to_idempotent_unstable(a, check=False), f),
        (lambda a: tf.stable_rank_permutation(a, out, check=False), f),
        (lambda a: tf.map_to_perm(a, check=False), iota),
        (lambda a: tf.map_to_perm_out(a, out, check=False), iota),
        (lambda a: tf.invert_inplace(a, scratch=scratch, check=False), pi),
        (lambda a: tf.associative_permute(a, check=False), pi),
        (lambda a: tf.map_from_inverse(a, out, check=False), inv),
        (lambda a: tf.fill_forward_inplace(a, check=False), inv),
        (lambda a: tf.multiset_stream(a, lambda v: None, check=False), inv),
    ]
    for op, data in cases:
        op(data.copy())  # first call loads the compiled kernel
        a = data.copy()
        assert peak_allocation(op, a) < LIMIT
    warm = np.ones(4, dtype=np.int64)
    tf.apply_forward(warm.copy(), warm.cumsum())
    tf.apply_inverse(warm.copy(), warm.cumsum())
    sigma = tf.stable_rank_permutation(f)
    a = f.copy()
    assert peak_allocation(lambda: tf.apply_forward(a, sigma, check=False)) < LIMIT
    rho = np.abs(pi)
    assert peak_allocation(lambda: tf.apply_inverse(a, rho, check=False)) < LIMIT


def test_bittag_scratch_is_n_bits():
    for n in (1, 7, 8, 9, 1000):
        s = tf.BitScratch(n)
        assert len(s) == n
        assert s.words.size * 8 - n < 8
