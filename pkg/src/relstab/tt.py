"""Desk-scale tensor-triangular geometry around a relative context.

Tensor powers ``ξ^{⊗n}: F_n → 1`` are built as ``ξ ∘ (F_B ⊗ ξ^{⊗(n-1)})``
with projective summands of ``F_B ⊗ F_{n-1}`` split off at every step;
those summands cannot affect whether a map vanishes in stmod.

Supports are rank varieties of elementary abelian groups, evaluated at the
GF(p)-rational points of projective space only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .decomposition import canonical_key, indecomposable_iso, krull_schmidt
from .groups import FiniteGroup
from .modules import (GMap, GModule, cokernel, direct_sum_module, dual_module, hom_space, kernel,
                      tensor_product, trivial_module, zero_module)
from .relative import (RelCtx, is_contractible, rel_hom,
                       strip_relative)
from .stable import (CANONICAL_DIM, cone_st, factors_through_projective, injective_hull, is_projective,
                     omega, projective_cover, projective_null_space, sigma, split_free, stable_hom,
                     strip_projectives)

DEFAULT_CAP_NILP = 8
DEFAULT_DIM_CAP = 64
MAX_MEMBERS = 512
PROBE_LIMIT = 64


class TTError(ValueError):
    pass


# --------------------------------------------------------------------------
# nilpotence of ξ_B


def xi_power(ctx: RelCtx, n: int) -> GMap:
    """``ξ_B^{⊗n}`` with projective-free source; ``n = 0`` gives ``id_1``."""
    if n < 0:
        raise TTError("tensor power must be non-negative")
    key = ("xi", n)
    if key in ctx._memo:
        return ctx._memo[key]
    p = ctx.p
    if n == 0:
        one = trivial_module(ctx.group, p)
        out = GMap(one, one, la.identity(1))
    elif n == 1:
        out = _prune_source(ctx.xiB, ctx.seed)
    else:
        prev = xi_power(ctx, n - 1)
        f = ctx.FB
        big = tensor_product(f, prev.source)
        # F ⊗ F_{n-1} → F ⊗ 1 = F → 1
        mat = la.mul(ctx.xiB.matrix, la.kron(la.identity(f.dim), prev.matrix, p), p)
        out = _prune_source(GMap(big, prev.target, mat), ctx.seed)
    ctx._memo[key] = out
    return out


def _prune_source(f: GMap, seed: int) -> GMap:
    """Restrict ``f`` to the summands of its source on which it is nonzero in stmod.

    Maps factoring through a projective form a tensor ideal, so the dropped
    summands change neither ``f ⊗ X`` nor later powers beyond such maps.
    """
    p = f.p
    split = split_free(f.source)
    src = split.module
    if src.dim == 0:
        return GMap(src, f.target, la.zeros(f.target.dim, 0))
    g = la.mul(f.matrix, split.inc.matrix, p)
    dec = krull_schmidt(src, seed)
    keep, sel = [], []
    off = 0
    for u in dec.expanded():
        cols = dec.iso.matrix[:, off:off + u.dim]
        if not factors_through_projective(GMap(u, f.target, la.mul(g, cols, p)))[0]:
            keep.append(u)
            sel.extend(range(off, off + u.dim))
        off += u.dim
    if not keep:
        z = zero_module(f.source.group, p)
        return GMap(z, f.target, la.zeros(f.target.dim, 0))
    return GMap(direct_sum_module(*keep), f.target, la.mul(g, dec.iso.matrix[:, sel], p))


def xi_power_on(ctx: RelCtx, n: int, x: GModule) -> GMap:
    """``ξ^{⊗n} ⊗ X : F_n ⊗ X → X``."""
    xi = xi_power(ctx, n)
    return GMap(tensor_product(xi.source, x), x, la.kron(xi.matrix, la.identity(x.dim), ctx.p))


def nilpotence_order(ctx: RelCtx, x: GModule, cap: int = DEFAULT_CAP_NILP) -> int | None:
    """Least ``n ≤ cap`` with ``ξ^{⊗n} ⊗ X`` zero in stmod, or ``None`` past the cap."""
    if cap < 1:
        raise TTError("nilpotence cap must be at least 1")
    xs = split_free(x).module
    if xs.dim == 0:
        return 1
    for n in range(1, cap + 1):
        if factors_through_projective(xi_power_on(ctx, n, xs))[0]:
            return n
    return None


def relative_nilpotence_order(ctx: RelCtx, x: GModule, cap: int = DEFAULT_CAP_NILP) -> int | None:
    """Least ``n ≤ cap`` with ``π(ξ^{⊗n} ⊗ X) = 0`` in Δ, or ``None``."""
    xs = split_free(x).module
    if xs.dim == 0:
        return 0
    for n in range(0, cap + 1):
        if is_contractible(ctx, xi_power_on(ctx, n, xs))[0]:
            return n
    return None


def xi_square(ctx: RelCtx) -> GMap:
    """``ξ_B ⊗ ξ_B : F_B⊗F_B → 1`` on the full source.

    Unlike :func:`xi_power` nothing is pruned: dropping stmod-zero summands
    ``A`` of the source would change the cone by ``ΣA``.
    """
    src = tensor_product(ctx.FB, ctx.FB)
    return GMap(src, ctx.unit, la.kron(ctx.xiB.matrix, ctx.xiB.matrix, ctx.p))


def cone_xi(ctx: RelCtx) -> GModule:
    return cone_st(ctx.xiB, ctx.seed).Z


def cone_xi_sq(ctx: RelCtx) -> GModule:
    """``C = cone(ξ^{⊗2})``, checked to satisfy ``ξ^{⊗2} ⊗ C = 0`` in stmod."""
    c = cone_st(xi_square(ctx), ctx.seed, canonical=False).Z
    if not factors_through_projective(xi_power_on(ctx, 2, c))[0]:
        raise TTError("ξ^{⊗2} ⊗ cone(ξ^{⊗2}) is not zero in stmod")
    return c


def phantom_identities(ctx: RelCtx) -> dict[str, bool]:
    b_xi = GMap(tensor_product(ctx.FB, ctx.B), ctx.B,
                la.kron(ctx.xiB.matrix, la.identity(ctx.B.dim), ctx.p))
    c = cone_st(xi_square(ctx), ctx.seed, canonical=False).Z
    return {
        "xi_tensor_B_contractible": is_contractible(ctx, b_xi)[0],
        "xi_tensor_B_stmod_zero": factors_through_projective(b_xi)[0],
        "xi_sq_tensor_C_stmod_zero": factors_through_projective(xi_power_on(ctx, 2, c))[0],
    }


# --------------------------------------------------------------------------
# thick closure


@dataclass
class IdealUniverse:
    generators: list[GModule]
    members: list[GModule]
    dim_cap: int
    saturated: bool
    tensor_generators: list[GModule] = field(default_factory=list)
    seed: int = 1
    probe: str = "basis"

    def find(self, u: GModule) -> int | None:
        key = canonical_key(u)
        for i, m in enumerate(self.members):
            if canonical_key(m) == key and indecomposable_iso(m, u) is not None:
                return i
        return None

    def dims(self) -> list[int]:
        return [m.dim for m in self.members]


def _small_stable_part(m: GModule, dim_cap: int) -> GModule | None:
    s = split_free(m).module
    return s if 0 < s.dim <= dim_cap else None


def _cone_candidate(f: GMap, dim_cap: int) -> GModule | None:
    x, y = f.source, f.target
    hull, i_x = injective_hull(x)
    u = GMap(x, direct_sum_module(y, hull), np.concatenate([f.matrix, i_x.matrix], axis=0))
    return _small_stable_part(cokernel(u)[0], dim_cap)


def _fibre_candidate(f: GMap, dim_cap: int) -> GModule | None:
    x, y = f.source, f.target
    cover, p_y = projective_cover(y)
    u = GMap(direct_sum_module(x, cover), y, np.concatenate([f.matrix, p_y.matrix], axis=1))
    return _small_stable_part(kernel(u)[0], dim_cap)


def _probe_maps(a: GModule, b: GModule, probe: str = "basis") -> list[GMap]:
    """Maps ``a → b`` whose cones and fibres are explored.

    ``"basis"`` walks the hom-space basis and skips maps that vanish in stmod
    or repeat an earlier stable class up to a scalar.  ``"classes"`` takes
    every nonzero stable class up to scalars when there are at most
    ``PROBE_LIMIT`` of them (a basis alone may consist of isomorphisms with
    trivial cones) and falls back to the basis otherwise.
    """
    p = a.p
    if probe == "classes":
        sh = stable_hom(a, b)
        if sh.dim and p**sh.dim <= PROBE_LIMIT:
            out = []
            for c in itertools.product(range(p), repeat=sh.dim):
                nz = [x for x in c if x]
                if nz and nz[0] == 1:
                    mat = np.tensordot(np.array(c, dtype=np.int64), sh.reps, axes=1) % p
                    out.append(GMap(a, b, mat))
            return out
    elif probe != "basis":
        raise TTError(f"unknown probe mode {probe!r}")
    hom = hom_space(a, b)
    if hom.dim == 0:
        return []
    ech = la.Echelon(a.dim * b.dim, p)
    for row in projective_null_space(a, b):
        ech.add(row)
    seen = set()
    out = []
    for m, v in zip(hom.maps(), hom.vectors()):
        r = ech.reduce(v)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            continue
        r = (r * pow(int(r[nz[0]]), -1, p)) % p
        key = r.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def thick_closure(group: FiniteGroup, p: int, generators, dim_cap: int = DEFAULT_DIM_CAP,
                  tensor_generators=(), seed: int = 1,
                  max_members: int = MAX_MEMBERS, probe: str = "basis") -> IdealUniverse:
    """Bounded thick (⊗-)closure of ``generators`` inside stmod.

    Moves: cones and fibres of stable-hom classes between members (see
    :func:`_probe_maps`), tensor
    products with ``tensor_generators``, Σ and Ω.  Produced objects are
    stripped of projectives and discarded when their dimension exceeds
    ``dim_cap``; surviving ones contribute their indecomposable summands.
    Each pair of members is processed once, when its later member arrives.
    """
    generators = list(generators)
    tensor_generators = list(tensor_generators)
    for m in generators + tensor_generators:
        if m.group is not group or m.p != p:
            raise TTError("generator does not live over the given group and field")
    uni = IdealUniverse(generators, [], dim_cap, False, tensor_generators, seed, probe)
    queue: list[int] = []

    def offer(m: GModule | None):
        if m is None or m.dim == 0:
            return
        for u, _ in krull_schmidt(m, seed).summands:
            if u.dim <= dim_cap and uni.find(u) is None:
                if len(uni.members) >= max_members:
                    raise OverflowError
                uni.members.append(u)
                queue.append(len(uni.members) - 1)

    try:
        for g in generators:
            if g.dim:
                # projective summands of generators are kept as members
                for u, _ in krull_schmidt(g, seed).summands:
                    if uni.find(u) is None:
                        uni.members.append(u)
                        queue.append(len(uni.members) - 1)
        while queue:
            i = queue.pop(0)
            m = uni.members[i]
            if is_projective(m):
                continue
            offer(_small_stable_part(sigma(m, seed), dim_cap))
            offer(_small_stable_part(omega(m, seed), dim_cap))
            for t in tensor_generators:
                offer(_small_stable_part(tensor_product(m, t), dim_cap))
            for j in range(i + 1):
                n = uni.members[j]
                if is_projective(n):
                    continue
                pairs = [(m, n)] if i == j else [(m, n), (n, m)]
                for a, b in pairs:
                    for f in _probe_maps(a, b, probe):
                        offer(_cone_candidate(f, dim_cap))
                        offer(_fibre_candidate(f, dim_cap))
        uni.saturated = True
    except OverflowError:
        uni.saturated = False
    return uni


def in_thick(universe: IdealUniverse, x: GModule) -> bool:
    """Every non-projective indecomposable summand of ``x`` is a member."""
    if not universe.saturated:
        raise TTError(
            f"ideal universe is not saturated under dim_cap={universe.dim_cap}; "
            "membership cannot be decided")
    s = strip_projectives(x, universe.seed)
    if s.dim == 0:
        return True
    return all(universe.find(u) is not None for u, _ in krull_schmidt(s, universe.seed).summands)


# --------------------------------------------------------------------------
# rank varieties


@dataclass(frozen=True)
class SupportSet:
    points: tuple[tuple[int, ...], ...]
    complete: bool
    rank: int
    p: int

    def __contains__(self, pt) -> bool:
        return tuple(pt) in self.points

    def issubset(self, other: "SupportSet") -> bool:
        return set(self.points) <= set(other.points)

    def intersection(self, other: "SupportSet") -> "SupportSet":
        pts = tuple(q for q in self.points if q in set(other.points))
        return SupportSet(pts, self.complete and other.complete, self.rank, self.p)

    def complement(self) -> "SupportSet":
        pts = tuple(q for q in projective_points(self.p, self.rank) if q not in set(self.points))
        return SupportSet(pts, self.complete, self.rank, self.p)


def projective_points(p: int, r: int) -> list[tuple[int, ...]]:
    """Normalised GF(p)-rational points of ``P^{r-1}``, first nonzero coordinate 1."""
    pts = []
    for lead in range(r):
        for tail in itertools.product(range(p), repeat=r - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return pts


def is_elementary_abelian(group: FiniteGroup, p: int) -> bool:
    """True when the generators form a basis of ``(C_p)^r``."""
    r = len(group.generators)
    if group.order != p**r or not group.is_abelian():
        return False
    return all(group.element_order(group.element_index(g)) == p for g in group.generators)


def rank_variety_support(m: GModule) -> SupportSet:
    """Rational points ``α`` where ``m`` is not free over ``k[u_α]``.

    The result is flagged complete when it is certified to be the whole
    variety: either ``m`` is projective (empty support) or even the span of
    all ``g_i - 1`` has rank below ``(p-1) dim/p`` (every point, rational or
    not, is in the support).
    """
    g, p = m.group, m.p
    if not is_elementary_abelian(g, p):
        raise TTError("rank varieties need an elementary abelian group with a basis of generators")
    r = len(g.generators)
    eye = la.identity(m.dim)
    shifts = [(a - eye) % p for a in m.action]
    bound = (p - 1) * m.dim // p
    pts = []
    for alpha in projective_points(p, r):
        op = sum(c * s for c, s in zip(alpha, shifts)) % p
        if m.dim % p or la.rank(op, p) < bound:
            pts.append(alpha)
    if not pts:
        complete = is_projective(m)
    else:
        complete = m.dim % p != 0 or la.rank(np.concatenate(shifts, axis=1), p) < bound
    return SupportSet(tuple(pts), complete, r, p)


# --------------------------------------------------------------------------
# reports


@dataclass
class CorpusRow:
    name: str
    dim: int
    nilpotence: int | None
    relative_nilpotence: int | None
    in_thick: bool | None
    support_inside: bool | None
    agree: bool
    locus_ok: bool


@dataclass
class BirationalReport:
    shape: str
    supp_B: SupportSet | None
    U: SupportSet | None
    C_dim: int
    C_dims: list[tuple[int, int]] | None  # None when C is too large to decompose
    identities: dict[str, bool]
    rows: list[CorpusRow]
    saturated: bool
    degenerate: str = ""

    @property
    def ok(self) -> bool:
        return all(self.identities.values()) and all(r.agree and r.locus_ok for r in self.rows)

    def records(self) -> list[str]:
        out = [f"shape={self.shape}"]
        if self.degenerate:
            out.append(f"degenerate={self.degenerate}")
        if self.supp_B is not None:
            out.append(f"supp_B={_fmt_points(self.supp_B)}")
            out.append(f"U={_fmt_points(self.U)}")
        out.append(f"C_dim={self.C_dim}")
        if self.C_dims is None:
            out.append("C=undecomposed")
        else:
            out.append("C=" + (",".join(f"{d}x{k}" for d, k in self.C_dims) or "0"))
        for k, v in self.identities.items():
            out.append(f"{k}={_rec(v)}")
        out.append(f"thick_saturated={_rec(self.saturated)}")
        for r in self.rows:
            out.append(f"row.{r.name}.nilp={'exceeds' if r.nilpotence is None else r.nilpotence}")
            out.append(f"row.{r.name}.in_thick={_rec(r.in_thick)}")
            out.append(f"row.{r.name}.support_inside={_rec(r.support_inside)}")
            out.append(f"row.{r.name}.agree={_rec(r.agree)}")
            out.append(f"row.{r.name}.locus={_rec(r.locus_ok)}")
        out.append(f"ok={_rec(self.ok)}")
        return out


def _rec(v) -> str:
    if v is None:
        return "none"
    return str(v).lower() if isinstance(v, bool) else str(v)


def _fmt_points(s: SupportSet) -> str:
    return "{" + ";".join("(" + ",".join(map(str, q)) + ")" for q in s.points) + "}"


def _has_trivial_summand(ctx: RelCtx) -> bool:
    one = trivial_module(ctx.group, ctx.p)
    return any(u.dim == 1 and indecomposable_iso(u, one) is not None
               for u, _ in krull_schmidt(ctx.B, ctx.seed).summands)


def birational_report(ctx: RelCtx, corpus: list[tuple[str, GModule]],
                      cap_nilp: int = DEFAULT_CAP_NILP,
                      dim_cap: int = DEFAULT_DIM_CAP) -> BirationalReport:
    """Predicate agreement behind the birationality statement, on a corpus.

    For every corpus object the three predicates ``ξ_B`` nilpotent on X,
    ``X ∈ thick(B)`` and ``supp X ⊆ supp B`` are compared (the last one only
    for elementary abelian groups), and the nilpotence loci in stmod and in Δ
    are checked to bound each other: ``π(ξ^{⊗n}⊗X) = 0`` forces
    ``ξ^{⊗(n+1)}⊗X = 0`` and conversely stmod vanishing forces vanishing in Δ.
    """
    g, p = ctx.group, ctx.p
    elem = is_elementary_abelian(g, p)
    cyclic = len(g.generators) == 1
    if not (elem or cyclic):
        raise TTError("birational report needs an elementary abelian or cyclic group")
    faithful = _has_trivial_summand(ctx)
    supp_b = u_set = None
    degenerate = ""
    if elem:
        supp_b = rank_variety_support(ctx.B)
        u_set = supp_b.complement()
    if faithful:
        degenerate = "B has a trivial summand: Δ = 0, supp B is everything, U is empty"
    elif cyclic and not elem:
        degenerate = "cyclic group: one-point spectrum; U is empty when B is not projective"
    c = cone_xi_sq(ctx)
    c_dims = krull_schmidt(c, ctx.seed).dims() if c.dim <= CANONICAL_DIM else None
    identities = phantom_identities(ctx)
    uni = thick_closure(g, p, [ctx.B], dim_cap, seed=ctx.seed)
    rows = []
    for name, x in corpus:
        n = nilpotence_order(ctx, x, cap_nilp)
        nr = relative_nilpotence_order(ctx, x, cap_nilp)
        thick = in_thick(uni, x) if uni.saturated else None
        inside = rank_variety_support(x).issubset(supp_b) if elem else None
        preds = [n is not None] + [v for v in (thick, inside) if v is not None]
        agree = len(set(preds)) == 1
        locus = True
        if nr is not None and (n is None or n > nr + 1):
            locus = False
        if n is not None and (nr is None or nr > n):
            locus = False
        rows.append(CorpusRow(name, x.dim, n, nr, thick, inside, agree, locus))
    return BirationalReport("elementary_abelian" if elem else "cyclic", supp_b, u_set, c.dim, c_dims,
                            identities, rows, uni.saturated, degenerate)


def graded_unit_dims(ctx: RelCtx, n_max: int) -> list[tuple[int, int]]:
    """``dim Δ(1, v^{⊗n})`` for ``|n| ≤ n_max`` with ``v = π(Σ1)`` and ``v^{-1} = v^∨``."""
    one = trivial_module(ctx.group, ctx.p)
    v = strip_relative(ctx, sigma(one, ctx.seed))
    vinv = dual_module(v)
    rows = {0: rel_hom(ctx, one, one).dim}
    for sign, step in ((1, v), (-1, vinv)):
        cur = one
        for n in range(1, n_max + 1):
            cur = strip_relative(ctx, tensor_product(cur, step)) if step.dim else step
            rows[sign * n] = rel_hom(ctx, one, cur).dim
    return sorted(rows.items())


def stable_unit_dims(group: FiniteGroup, p: int, n_max: int) -> list[tuple[int, int]]:
    """``dim stmod(1, Σ^n 1)`` for ``|n| ≤ n_max``, the Tate cohomology dimensions."""
    one = trivial_module(group, p)
    rows = {0: stable_hom(one, one).dim}
    for sign, move in ((1, sigma), (-1, omega)):
        cur = one
        for n in range(1, n_max + 1):
            cur = move(cur)
            rows[sign * n] = stable_hom(one, cur).dim
    return sorted(rows.items())
