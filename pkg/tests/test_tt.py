import pytest
from hypothesis import given, settings, strategies as st

from relstab.groups import cyclic_group, elementary_abelian
from relstab.modules import jordan_block_module, regular_module, trivial_module
from relstab.sandboxes import c4_j2, c4_trivial_summand, v4_cosets
from relstab.tt import (TTError, birational_report, in_thick, nilpotence_order, projective_points,
                        rank_variety_support, relative_nilpotence_order, stable_unit_dims, thick_closure,
                        xi_power)

C4 = cyclic_group(4)
V4 = elementary_abelian(2, 2)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3))
def test_projective_points_count(p, r):
    pts = projective_points(p, r)
    assert len(pts) == (p**r - 1) // (p - 1) == len(set(pts))
    assert all(next(c for c in q if c) == 1 for q in pts)


def test_rank_varieties_on_v4():
    assert rank_variety_support(trivial_module(V4, 2)).points == tuple(projective_points(2, 2))
    free = rank_variety_support(regular_module(V4, 2))
    assert free.points == () and free.complete
    b = v4_cosets().B
    assert rank_variety_support(b).points == ((1, 0),)
    with pytest.raises(TTError):
        rank_variety_support(trivial_module(C4, 2))


def test_tate_cohomology_dimensions():
    assert [d for _, d in stable_unit_dims(C4, 2, 2)] == [1] * 5
    assert dict(stable_unit_dims(V4, 2, 2)) == {-2: 2, -1: 1, 0: 1, 1: 2, 2: 3}


def test_xi_power_edges():
    ctx = c4_j2().ctx()
    assert xi_power(ctx, 0).matrix.tolist() == [[1]]
    with pytest.raises(TTError):
        xi_power(ctx, -1)
    with pytest.raises(TTError):
        nilpotence_order(ctx, ctx.B, cap=0)


def test_nilpotence_tracks_B_summands():
    sb = c4_j2()
    ctx = sb.ctx()
    assert nilpotence_order(ctx, sb.module("j2")) == 1
    assert nilpotence_order(ctx, sb.module("j4")) == 1
    assert relative_nilpotence_order(ctx, sb.module("j2")) == 0
    # on J1 the relative order is at most the stmod order and at least one less
    n, nr = nilpotence_order(ctx, sb.module("j1")), relative_nilpotence_order(ctx, sb.module("j1"))
    assert n is not None and nr is not None and nr <= n <= nr + 1


def test_thick_closure_of_trivial_module_is_everything():
    uni = thick_closure(C4, 2, [trivial_module(C4, 2)], 8)
    assert uni.saturated
    assert all(in_thick(uni, jordan_block_module(C4, 2, n)) for n in range(1, 5))


def test_thick_closure_of_projective_is_zero():
    uni = thick_closure(V4, 2, [regular_module(V4, 2)], 8)
    assert uni.saturated and not in_thick(uni, trivial_module(V4, 2))


def test_unsaturated_universe_refuses_membership():
    uni = thick_closure(V4, 2, [trivial_module(V4, 2)], 64, max_members=2)
    assert not uni.saturated
    with pytest.raises(TTError):
        in_thick(uni, trivial_module(V4, 2))


def test_birational_reports():
    sb = v4_cosets()
    rep = birational_report(sb.ctx(), sb.corpus)
    assert rep.ok and set(rep.U.points) == {(0, 1), (1, 1)}
    assert "ok=true" in rep.records()
    triv = c4_trivial_summand()
    rep = birational_report(triv.ctx(), triv.corpus[:3], cap_nilp=3)
    assert rep.degenerate.startswith("B has a trivial summand")
