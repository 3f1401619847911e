import numpy as np
from hypothesis import given, settings, strategies as st

from relstab import linalg as la
from relstab.decomposition import (canonical_key, is_indecomposable, is_isomorphic, krull_schmidt,
                                   local_certificate)
from relstab.groups import cyclic_group, elementary_abelian
from relstab.modules import (conjugate_module, direct_sum_module, hom_space, is_intertwiner, jordan_block_module,
                             regular_module, tensor_product, trivial_module, zero_module)

C4 = cyclic_group(4)
C9 = cyclic_group(9)
V4 = elementary_abelian(2, 2)


def jordan_sum(group, p, sizes):
    return direct_sum_module(*[jordan_block_module(group, p, s) for s in sizes])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=4), st.integers(0, 10**6))
def test_jordan_types_recovered_after_base_change(sizes, seed):
    m = jordan_sum(C9, 3, sizes)
    change = la.random_invertible(np.random.default_rng(seed), m.dim, 3)
    dec = krull_schmidt(conjugate_module(m, change), seed=seed % 7 + 1)
    assert sorted(x.dim for x in dec.expanded()) == sorted(sizes)
    assert la.is_invertible(dec.iso.matrix, 3)
    assert is_intertwiner(dec.direct_sum(), dec.original, dec.iso.matrix)


def test_indecomposables():
    assert is_indecomposable(regular_module(V4, 2))
    assert is_indecomposable(jordan_block_module(C4, 2, 3))
    assert not is_indecomposable(jordan_sum(C4, 2, [1, 1]))
    j2 = jordan_block_module(C4, 2, 2)
    assert local_certificate(j2, hom_space(j2, j2).mats)


def test_tensor_of_jordan_blocks_over_c4():
    # J2 ⊗ J2 ≅ J2 ⊕ J2 and J2 ⊗ J3 ≅ J2 ⊕ J4 in characteristic 2
    j2, j3 = jordan_block_module(C4, 2, 2), jordan_block_module(C4, 2, 3)
    assert sorted(krull_schmidt(tensor_product(j2, j2)).dims()) == [(2, 2)]
    assert sorted(d for d, _ in krull_schmidt(tensor_product(j2, j3)).dims()) == [2, 4]


def test_isomorphism_witness():
    m = jordan_sum(C4, 2, [1, 3])
    n = conjugate_module(m, la.random_invertible(np.random.default_rng(5), 4, 2))
    ok, w = is_isomorphic(m, n)
    assert ok and w.is_valid() and la.is_invertible(w.matrix, 2)
    assert not is_isomorphic(m, jordan_sum(C4, 2, [2, 2]))[0]


def test_canonical_key_is_an_invariant():
    m = jordan_sum(C4, 2, [2, 3])
    n = conjugate_module(m, la.random_invertible(np.random.default_rng(1), 5, 2))
    assert canonical_key(m) == canonical_key(n)
    assert canonical_key(trivial_module(C4, 2)) != canonical_key(jordan_block_module(C4, 2, 2))


def test_zero_module_decomposes_trivially():
    dec = krull_schmidt(zero_module(C4, 2))
    assert dec.dims() == [] and dec.direct_sum().dim == 0
