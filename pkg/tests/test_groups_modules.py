import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relstab import linalg as la
from relstab.groups import GroupError, build_group, cyclic_group, elementary_abelian, left_cosets, subgroup
from relstab.modules import (ModuleError, build_module, coevaluation, dual_module, evaluation, hom_space,
                             hom_space_kron, identity_map, induce, jordan_block_module, perm_on_cosets,
                             regular_module, restrict, tensor_product, trivial_module, compose_maps,
                             tensor_map_module, module_tensor_map, swap_map, direct_sum_module, kernel, cokernel)

C4 = cyclic_group(4)
V4 = elementary_abelian(2, 2)


def test_group_orders_and_p_groups():
    assert C4.order == 4 and V4.order == 4 and elementary_abelian(3, 2).order == 9
    assert C4.is_p_group(2) and not C4.is_p_group(3)
    assert V4.is_abelian()
    assert build_group([(1, 2, 0), (1, 0, 2)]).order == 6


def test_group_rejects_non_permutations():
    with pytest.raises(GroupError):
        build_group([(0, 0, 1)])


def test_cosets_partition():
    g = C4.element_index(C4.generators[0])
    h = subgroup(C4, [int(C4.mult[g, g])])
    reps, labels = left_cosets(C4, h)
    assert len(reps) == 2 and sorted(set(labels)) == [0, 1]


def test_build_module_checks_relations():
    with pytest.raises(ModuleError):
        build_module(C4, 2, [np.array([[0, 1], [1, 1]])])  # order 3 matrix on a C4 generator
    with pytest.raises(ModuleError):
        build_module(C4, 2, [np.array([[1, 1], [0, 1]]), np.array([[1, 0], [0, 1]])])


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_hom_space_matches_kron_oracle(a, b):
    x, y = jordan_block_module(C4, 2, a), jordan_block_module(C4, 2, b)
    fast, slow = hom_space(x, y), hom_space_kron(x, y)
    assert fast.dim == slow.dim == min(a, b)
    assert all(f.is_valid() for f in fast.maps())
    stacked = np.concatenate([fast.vectors(), slow.vectors()])
    assert la.rank(stacked, 2) == fast.dim


def test_hom_dims_for_v4():
    k, kg = trivial_module(V4, 2), regular_module(V4, 2)
    assert hom_space(k, kg).dim == 1 and hom_space(kg, kg).dim == 4


def test_snake_identities():
    b = jordan_block_module(C4, 2, 2)
    coev, ev = coevaluation(b), evaluation(b)
    assert coev.is_valid() and ev.is_valid()
    bd = dual_module(b)
    # (ev ⊗ B)(B ⊗ coev) = id_B, up to the unit isomorphisms which are identities on matrices
    lhs = compose_maps(tensor_map_module(ev, b), module_tensor_map(b, coev))
    assert np.array_equal(lhs.matrix, identity_map(b).matrix)
    assert bd.dim == b.dim


def test_swap_is_an_intertwiner():
    a, b = jordan_block_module(C4, 2, 2), jordan_block_module(C4, 2, 3)
    assert swap_map(a, b).is_valid()
    assert tensor_product(a, b).dim == 6


def test_restrict_and_induce_dimensions():
    g = C4.element_index(C4.generators[0])
    h = subgroup(C4, [int(C4.mult[g, g])])
    kh = trivial_module(h, 2)
    ind = induce(kh, C4)
    assert ind.dim == 2
    assert hom_space(ind, perm_on_cosets(C4, h, 2)).dim == hom_space(ind, ind).dim
    assert restrict(regular_module(C4, 2), h).dim == 4


def test_kernel_and_cokernel():
    j3 = jordan_block_module(C4, 2, 3)
    j1 = jordan_block_module(C4, 2, 1)
    f = hom_space(j3, j1).maps()[0]
    (ker, inc), (cok, _) = kernel(f), cokernel(f)
    assert ker.dim == 2 and cok.dim == 0 and inc.is_valid()
    assert direct_sum_module(j1, j3).dim == 4
