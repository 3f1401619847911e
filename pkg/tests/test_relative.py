import numpy as np
import pytest

from relstab import linalg as la
from relstab.groups import cyclic_group
from relstab.modules import (GMap, add_maps, compose_maps, hom_space, identity_map, jordan_block_module,
                             direct_sum_module, regular_module, tensor_product, zero_map,
                             zero_module)
from relstab.relative import (RelativeError, check_les, contractible_space, image_triangle, is_contractible,
                              is_contractible_object, is_rel_iso, make_ctx, rel_cone, rel_hom, sigma_B,
                              sigma_B_inv, stable_B_iso, strip_relative)
from relstab.sandboxes import c4_j2


@pytest.fixture(scope="module")
def sb():
    return c4_j2()


@pytest.fixture(scope="module")
def ctx(sb):
    return sb.ctx()


def test_context_validation(sb):
    other = cyclic_group(4)
    with pytest.raises(RelativeError):
        make_ctx(sb.group, 2, jordan_block_module(other, 2, 2))
    with pytest.raises(RelativeError):
        make_ctx(sb.group, 2, zero_module(sb.group, 2))


def test_contractible_objects(sb, ctx):
    assert is_contractible_object(ctx, ctx.B)
    assert is_contractible_object(ctx, sb.module("j4"))
    assert is_contractible_object(ctx, tensor_product(ctx.B, sb.module("j3")))
    assert not is_contractible_object(ctx, sb.module("j1"))
    assert not is_contractible_object(ctx, sb.module("j3"))


def test_contractibility_witness_recombines(sb, ctx):
    x, y = sb.module("j3"), sb.module("j1_j2")
    null = contractible_space(ctx, x, y)
    assert null.shape[0] > 0
    f = GMap(x, y, null[0].reshape(y.dim, x.dim))
    ok, (phi_b, phi_p) = is_contractible(ctx, f)
    assert ok and phi_b.is_valid() and phi_p.is_valid()


def test_rel_hom_is_a_quotient(sb, ctx):
    x = sb.module("j1")
    assert rel_hom(ctx, x, x).dim == 1
    assert rel_hom(ctx, sb.module("j2"), sb.module("j2")).dim == 0
    rh = rel_hom(ctx, sb.module("j1_j3"), sb.module("j1_j3"))
    assert rh.dim + rh.null.shape[0] == hom_space(sb.module("j1_j3"), sb.module("j1_j3")).dim


def test_regular_B_recovers_stable_category():
    g = cyclic_group(4)
    ctx = make_ctx(g, 2, regular_module(g, 2))
    j2 = jordan_block_module(g, 2, 2)
    assert rel_hom(ctx, j2, j2).dim == 2
    assert strip_relative(ctx, j2).dim == 2


def test_relative_strip_drops_B_summands(sb, ctx):
    assert strip_relative(ctx, sb.module("j1_j2")).dim == 1
    assert strip_relative(ctx, sb.module("j3_j4")).dim == 3
    assert strip_relative(ctx, ctx.FB).dim == 3


def test_sigma_B_round_trip(sb, ctx):
    for name in ("j1", "j3", "j1_j3"):
        x = sb.module(name)
        assert stable_B_iso(ctx, sigma_B(ctx, sigma_B_inv(ctx, x)), x, route="both")


def test_identity_cone_is_contractible(sb, ctx):
    x = sb.module("j1_j3")
    t = rel_cone(ctx, identity_map(x))
    assert t.validate(ctx) and strip_relative(ctx, t.Z).dim == 0


def test_rel_iso_detection(sb, ctx):
    x = sb.module("j1_j2")
    ok, g = is_rel_iso(ctx, identity_map(x))
    assert ok and g.is_valid()
    # the projection J1 ⊕ J2 → J1 only kills a contractible summand
    proj = GMap(x, sb.module("j1"), np.concatenate([la.identity(1), la.zeros(1, 2)], axis=1))
    assert is_rel_iso(ctx, proj)[0]
    assert not is_rel_iso(ctx, zero_map(sb.module("j1"), sb.module("j3")))[0]


def test_image_triangle_of_split_sequence(sb, ctx):
    j1, j3 = sb.module("j1"), sb.module("j3")
    y = direct_sum_module(j1, j3)
    incl = GMap(j1, y, np.concatenate([la.identity(1), la.zeros(3, 1)]))
    surj = GMap(y, j3, np.concatenate([la.zeros(3, 1), la.identity(3)], axis=1))
    t = image_triangle(ctx, incl, surj)
    assert t.validate(ctx)
    assert all(r.ok for w in (j1, j3) for r in check_les(ctx, t, w))


def _ses(a, b, c):
    incl = next(f for f in hom_space(a, b).maps() if la.rank(f.matrix, 2) == a.dim)
    surj = next(g for g in hom_space(b, c).maps()
                if la.rank(g.matrix, 2) == c.dim and not la.mul(g.matrix, incl.matrix, 2).any())
    return incl, surj


def test_non_split_E_B_sequence(sb, ctx):
    # 0 → J1 → J2 → J1 → 0 splits after tensoring with B = J2
    j1, j2 = sb.module("j1"), sb.module("j2")
    t = image_triangle(ctx, *_ses(j1, j2, j1))
    assert t.validate(ctx)
    assert all(r.ok for w in (j1, sb.module("j3")) for r in check_les(ctx, t, w))


def test_sequence_outside_E_B_is_rejected(sb, ctx):
    with pytest.raises(RelativeError, match="not E_B"):
        image_triangle(ctx, *_ses(sb.module("j1"), sb.module("j3"), sb.module("j2")))


def test_sum_of_contractibles_is_contractible(sb, ctx):
    x, y = sb.module("j3"), sb.module("j3")
    null = contractible_space(ctx, x, y)
    f = GMap(x, y, null[0].reshape(3, 3))
    g = GMap(x, y, null[-1].reshape(3, 3))
    assert is_contractible(ctx, add_maps(f, g))[0]
    assert is_contractible(ctx, compose_maps(identity_map(y), f))[0]
