import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from relstab.decomposition import is_isomorphic, krull_schmidt
from relstab.groups import build_group, cyclic_group, elementary_abelian
from relstab.modules import (direct_sum_module, free_module, hom_space, identity_map, jordan_block_module, regular_module,
                             trivial_module, zero_map)
from relstab.stable import (StableError, check_les_st, cone_st, factors_through_projective, fibre_st, omega,
                            sigma, split_free, stable_hom, strip_projectives, triangle_from_ses)

C4 = cyclic_group(4)
C8 = cyclic_group(8)
V4 = elementary_abelian(2, 2)


def j(n, group=C8):
    return jordan_block_module(group, 2, n)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2))
def test_strip_removes_free_summands(n, rank):
    m = direct_sum_module(j(n), *[free_module(C8, 2, 1)] * rank) if rank else j(n)
    assert strip_projectives(m).dim == n
    assert split_free(regular_module(C8, 2)).module.dim == 0


@settings(max_examples=14, deadline=None)
@given(st.integers(1, 7))
def test_syzygies_of_cyclic_blocks(n):
    # over C_8, Ω J_n = J_{8-n} and Σ undoes Ω
    assert omega(j(n)).dim == 8 - n
    assert is_isomorphic(sigma(omega(j(n))), j(n))[0]


def test_heller_shift_on_v4_grows():
    k = trivial_module(V4, 2)
    assert [omega(k).dim, omega(omega(k)).dim] == [3, 5]


def test_stable_hom_dims_over_c4():
    # stable End(J_i) over C_4 has dimension min(i, 4 - i)
    assert [stable_hom(j(i, C4), j(i, C4)).dim for i in (1, 2, 3)] == [1, 2, 1]
    assert stable_hom(j(4, C4), j(2, C4)).dim == 0


def test_projective_factorisation_witness():
    kg = regular_module(C4, 2)
    f = hom_space(kg, j(1, C4)).maps()[0]
    ok, w = factors_through_projective(f)
    assert ok and w is not None
    assert not factors_through_projective(identity_map(j(2, C4)))[0]


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 3))
def test_cone_and_fibre_triangles_are_exact(a, b, pick):
    x, y = j(a, C4), j(b, C4)
    hom = hom_space(x, y)
    f = hom.maps()[pick % hom.dim] if hom.dim else zero_map(x, y)
    for t in (cone_st(f), fibre_st(f)):
        assert t.validate()
        for w in (j(1, C4), j(2, C4), j(3, C4)):
            assert all(r.ok for r in check_les_st(t, w))


def test_broken_triangle_is_detected():
    f = hom_space(j(1, C4), j(2, C4)).maps()[0]
    t = cone_st(f)
    broken = dataclasses.replace(t, g=zero_map(t.Y, t.Z))
    reports = [r for w in (j(1, C4), j(2, C4)) for r in check_les_st(broken, w)]
    assert not all(r.ok for r in reports)


def test_triangle_from_short_exact_sequence():
    sub = hom_space(j(1, C4), j(2, C4)).maps()[0]
    quo = hom_space(j(2, C4), j(1, C4)).maps()[0]
    t = triangle_from_ses(sub, quo)
    assert t.validate() and t.shift.dim == 3


def test_zero_map_cone_is_sum():
    x, y = j(1, C4), j(2, C4)
    t = cone_st(zero_map(x, y))
    assert sorted(d for d, _ in krull_schmidt(t.Z).dims()) == [2, 3]


def test_non_p_group_rejected():
    s3 = build_group([(1, 2, 0), (1, 0, 2)])
    with pytest.raises(StableError):
        omega(trivial_module(s3, 2))
