"""kG-modules as generator-matrix representations and the maps between them.

A module stores one invertible matrix per group generator.  Tensor products
use the Kronecker layout of :func:`relstab.linalg.kron` (basis vector
``m_i ⊗ n_k`` sits at index ``i*dim(N) + k``), so associativity and the unit
laws hold on the nose and never need coherence matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .groups import FiniteGroup, compose, invert, left_cosets, subgroup_indices


class ModuleError(ValueError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GModule:
    group: FiniteGroup
    p: int
    dim: int
    action: tuple[np.ndarray, ...]
    name: str = field(default="", compare=False)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"GModule(dim={self.dim}, p={self.p}{label})"

    def same_data(self, other: "GModule") -> bool:
        return (
            self.group is other.group
            and self.p == other.p
            and self.dim == other.dim
            and all(np.array_equal(a, b) for a, b in zip(self.action, other.action))
        )

    def data_key(self) -> bytes:
        return b"".join(a.tobytes() for a in self.action) + bytes(str(self.dim), "ascii")


@dataclass(frozen=True, eq=False)
class GMap:
    source: GModule
    target: GModule
    matrix: np.ndarray

    def __post_init__(self):
        shape = (self.target.dim, self.source.dim)
        if self.matrix.shape != shape:
            raise ModuleError(f"map matrix has shape {self.matrix.shape}, expected {shape}")

    @property
    def p(self) -> int:
        return self.source.p

    def __matmul__(self, other: "GMap") -> "GMap":
        return compose_maps(self, other)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def is_valid(self) -> bool:
        return is_intertwiner(self.source, self.target, self.matrix)


@dataclass(frozen=True, eq=False)
class HomBasis:
    source: GModule
    target: GModule
    mats: np.ndarray  # shape (d, target.dim, source.dim)

    @property
    def dim(self) -> int:
        return self.mats.shape[0]

    def __len__(self):
        return self.dim

    def maps(self) -> list[GMap]:
        return [GMap(self.source, self.target, m) for m in self.mats]

    def vectors(self) -> np.ndarray:
        return self.mats.reshape(self.dim, self.target.dim * self.source.dim)

    def combine(self, coeffs) -> GMap:
        c = np.asarray(coeffs, dtype=np.int64)
        mat = np.tensordot(c, self.mats, axes=1) % self.source.p if self.dim else la.zeros(
            self.target.dim, self.source.dim)
        return GMap(self.source, self.target, mat)


# --------------------------------------------------------------------------
# construction and validation


def _raw_module(group, p, action, name="") -> GModule:
    action = tuple(_freeze(a % p) for a in action)
    dim = action[0].shape[0] if action else 0
    return GModule(group, p, dim, action, name)


def _make(group, p, dim, action, name="") -> GModule:
    return GModule(group, p, dim, tuple(_freeze(a) for a in action), name)


def element_matrices(m: GModule) -> list[np.ndarray]:
    """Matrix of every group element, following the BFS words."""
    g = m.group
    mats = [la.identity(m.dim)]
    for k in range(1, g.order):
        i = g.words[k][-1]
        parent = g.element_index(compose(invert(g.generators[i]), g.elements[k]))
        mats.append(la.mul(m.action[i], mats[parent], m.p))
    return mats


def check_relations(group: FiniteGroup, p: int, action) -> tuple[int, int] | None:
    """First Cayley-graph edge ``(element, generator)`` on which the action is inconsistent."""
    dim = action[0].shape[0] if action else 0
    probe = _make(group, p, dim, action)
    mats = element_matrices(probe)
    for k in range(group.order):
        for i, gen in enumerate(group.generators):
            target = int(group.mult[group.element_index(gen), k])
            if not np.array_equal(la.mul(action[i], mats[k], p), mats[target]):
                return k, i
    return None


def build_module(group: FiniteGroup, p: int, action, name: str = "", dim: int | None = None) -> GModule:
    """Validated module from one square matrix per generator.

    ``dim`` is only needed when the group has no generators.
    """
    la.Field(p)
    action = [la.as_matrix(a, p) for a in action]
    if len(action) != len(group.generators):
        raise ModuleError(f"need {len(group.generators)} generator matrices, got {len(action)}")
    dims = {a.shape for a in action}
    if len(dims) > 1 or any(s[0] != s[1] for s in dims):
        raise ModuleError(f"generator matrices must be square of equal size, got {sorted(dims)}")
    for i, a in enumerate(action):
        if not la.is_invertible(a, p):
            raise ModuleError(f"generator {i} acts by a non-invertible matrix")
    bad = check_relations(group, p, action)
    if bad is not None:
        k, i = bad
        raise ModuleError(
            f"relation violated at multiplication-table entry (generator {i}) * (element {k}, "
            f"word {group.words[k]})")
    if not action:
        if dim is None:
            raise ModuleError("a group without generators needs an explicit dim")
        return _make(group, p, dim, [], name)
    return _raw_module(group, p, action, name)


def zero_module(group: FiniteGroup, p: int) -> GModule:
    return _make(group, p, 0, [la.zeros(0, 0) for _ in group.generators], "0")


def is_intertwiner(source: GModule, target: GModule, mat: np.ndarray) -> bool:
    p = source.p
    return all(
        np.array_equal(la.mul(b, mat, p), la.mul(mat, a, p))
        for a, b in zip(source.action, target.action))


def is_valid_module(m: GModule) -> bool:
    if any(not la.is_invertible(a, m.p) for a in m.action):
        return False
    return check_relations(m.group, m.p, m.action) is None


# --------------------------------------------------------------------------
# standard modules


def trivial_module(group: FiniteGroup, p: int) -> GModule:
    return _make(group, p, 1, [la.identity(1) for _ in group.generators], "k")


def regular_module(group: FiniteGroup, p: int) -> GModule:
    n = group.order
    action = []
    for gen in group.generators:
        gi = group.element_index(gen)
        a = la.zeros(n, n)
        a[group.mult[gi], np.arange(n)] = 1
        action.append(a)
    return _make(group, p, n, action, "kG")


def free_module(group: FiniteGroup, p: int, rank: int) -> GModule:
    if rank == 0:
        return zero_module(group, p)
    reg = regular_module(group, p)
    return _make(group, p, rank * reg.dim, [la.block_diag(*([a] * rank)) for a in reg.action],
                 f"kG^{rank}")


def perm_on_cosets(group: FiniteGroup, sub: FiniteGroup, p: int) -> GModule:
    transversal, label = left_cosets(group, sub)
    r = len(transversal)
    action = []
    for gen in group.generators:
        gi = group.element_index(gen)
        a = la.zeros(r, r)
        for c, t in enumerate(transversal):
            a[label[int(group.mult[gi, t])], c] = 1
        action.append(a)
    return _make(group, p, r, action, "k[G/H]")


def standard_module(group: FiniteGroup, p: int, kind: str, sub: FiniteGroup | None = None) -> GModule:
    if kind == "trivial":
        return trivial_module(group, p)
    if kind == "regular":
        return regular_module(group, p)
    if kind in ("perm_on_cosets", "cosets"):
        if sub is None:
            raise ModuleError("perm_on_cosets needs a subgroup")
        return perm_on_cosets(group, sub, p)
    raise ModuleError(f"unknown standard module kind {kind!r}")


def jordan_block_module(group: FiniteGroup, p: int, size: int) -> GModule:
    """Single Jordan block J_size for a cyclic group with one generator."""
    if len(group.generators) != 1:
        raise ModuleError("Jordan block modules need a cyclic group given by one generator")
    a = la.identity(size)
    for i in range(size - 1):
        a[i, i + 1] = 1
    return build_module(group, p, [a], f"J{size}")


# --------------------------------------------------------------------------
# monoidal and additive structure


def _check_compatible(m: GModule, n: GModule):
    if m.group is not n.group or m.p != n.p:
        raise ModuleError("modules live over different groups or fields")


def tensor_product(m: GModule, n: GModule) -> GModule:
    _check_compatible(m, n)
    return _make(m.group, m.p, m.dim * n.dim,
                 [la.kron(a, b, m.p) for a, b in zip(m.action, n.action)])


def dual_module(m: GModule) -> GModule:
    return _make(m.group, m.p, m.dim, [la.inverse(a, m.p).T.copy() for a in m.action])


def direct_sum_module(*mods: GModule) -> GModule:
    if not mods:
        raise ModuleError("direct sum of nothing; use zero_module")
    for other in mods[1:]:
        _check_compatible(mods[0], other)
    first = mods[0]
    return _make(first.group, first.p, sum(x.dim for x in mods),
                 [la.block_diag(*(x.action[i] for x in mods)) for i in range(len(first.action))])


def tensor_power(m: GModule, n: int) -> GModule:
    out = trivial_module(m.group, m.p)
    for _ in range(n):
        out = tensor_product(out, m)
    return out


# --------------------------------------------------------------------------
# maps


def identity_map(m: GModule) -> GMap:
    return GMap(m, m, la.identity(m.dim))


def zero_map(source: GModule, target: GModule) -> GMap:
    return GMap(source, target, la.zeros(target.dim, source.dim))


def compose_maps(g: GMap, f: GMap) -> GMap:
    if f.target.dim != g.source.dim:
        raise ModuleError("maps are not composable")
    return GMap(f.source, g.target, la.mul(g.matrix, f.matrix, f.p))


def add_maps(f: GMap, g: GMap) -> GMap:
    return GMap(f.source, f.target, (f.matrix + g.matrix) % f.p)


def scale_map(c: int, f: GMap) -> GMap:
    return GMap(f.source, f.target, (c * f.matrix) % f.p)


def tensor_maps(f: GMap, g: GMap) -> GMap:
    return GMap(tensor_product(f.source, g.source), tensor_product(f.target, g.target),
                la.kron(f.matrix, g.matrix, f.p))


def tensor_map_module(f: GMap, m: GModule) -> GMap:
    """``f ⊗ M``."""
    return tensor_maps(f, identity_map(m))


def module_tensor_map(m: GModule, f: GMap) -> GMap:
    """``M ⊗ f``."""
    return tensor_maps(identity_map(m), f)


def dual_map(f: GMap) -> GMap:
    return GMap(dual_module(f.target), dual_module(f.source), f.matrix.T.copy())


def direct_sum_maps(*maps: GMap) -> GMap:
    return GMap(direct_sum_module(*(f.source for f in maps)),
                direct_sum_module(*(f.target for f in maps)),
                la.block_diag(*(f.matrix for f in maps)))


def swap_matrix(dm: int, dn: int) -> np.ndarray:
    """Permutation ``M⊗N → N⊗M`` sending ``m_i⊗n_k`` to ``n_k⊗m_i``."""
    s = la.zeros(dm * dn, dm * dn)
    for i in range(dm):
        for k in range(dn):
            s[k * dm + i, i * dn + k] = 1
    return s


def swap_map(m: GModule, n: GModule) -> GMap:
    return GMap(tensor_product(m, n), tensor_product(n, m), swap_matrix(m.dim, n.dim))


def coevaluation(b: GModule) -> GMap:
    """``coev: 1 → B^∨ ⊗ B``, the invariant ``Σ_i e_i^* ⊗ e_i``."""
    d = b.dim
    col = la.zeros(d * d, 1)
    for i in range(d):
        col[i * d + i, 0] = 1
    return GMap(trivial_module(b.group, b.p), tensor_product(dual_module(b), b), col)


def evaluation(b: GModule) -> GMap:
    """``ev: B ⊗ B^∨ → 1``, contracting ``e_i ⊗ e_k^*`` to ``δ_ik``."""
    d = b.dim
    row = la.zeros(1, d * d)
    for i in range(d):
        row[0, i * d + i] = 1
    return GMap(tensor_product(b, dual_module(b)), trivial_module(b.group, b.p), row)


# --------------------------------------------------------------------------
# submodules, quotients, kernels


def submodule(m: GModule, basis: np.ndarray) -> tuple[GModule, GMap]:
    """Restrict the action to an invariant subspace given by independent columns."""
    k = basis.shape[1]
    if k == 0:
        z = zero_module(m.group, m.p)
        return z, GMap(z, m, la.zeros(m.dim, 0))
    rows = la.independent_rows(basis, m.p)
    pinv = la.inverse(basis[rows], m.p)
    action = [la.mul(pinv, la.mul(a, basis, m.p)[rows], m.p) for a in m.action]
    sub = _make(m.group, m.p, k, action)
    return sub, GMap(sub, m, basis % m.p)


def quotient_module(m: GModule, basis: np.ndarray) -> tuple[GModule, GMap]:
    """Quotient by an invariant subspace, with the projection map."""
    p = m.p
    comp = la.complement_columns(basis, m.dim, p)
    full = np.concatenate([basis, comp], axis=1) if basis.size else comp
    proj = la.inverse(full, p)[basis.shape[1]:]
    action = [la.mul(proj, la.mul(a, comp, p), p) for a in m.action]
    q = _make(m.group, p, comp.shape[1], action)
    return q, GMap(m, q, proj)


def kernel(f: GMap) -> tuple[GModule, GMap]:
    return submodule(f.source, la.kernel_basis(f.matrix, f.p))


def cokernel(f: GMap) -> tuple[GModule, GMap]:
    return quotient_module(f.target, la.column_space(f.matrix, f.p))


def image_basis(f: GMap) -> np.ndarray:
    return la.column_space(f.matrix, f.p)


# --------------------------------------------------------------------------
# hom spaces


def _spin(m: GModule):
    """Spin ``m`` up from a small generating set.

    Returns the spin basis (columns), the provenance of each basis vector,
    the seed positions and the relations ``(k, g)`` for which ``A_g b_k``
    was dependent.
    """
    p, n = m.p, m.dim
    ech = la.Echelon(n, p)
    vecs: list[np.ndarray] = []
    parent: list[tuple[int, int]] = []
    seeds: list[int] = []
    relations: list[tuple[int, int]] = []

    rad = np.concatenate([(a - la.identity(n)) % p for a in m.action], axis=1) if m.action else la.zeros(n, 0)
    top = la.complement_columns(la.column_space(rad, p), n, p)
    candidates = list(top.T) + list(la.identity(n))

    ptr = 0
    for cand in candidates:
        if len(vecs) == n:
            break
        if not ech.add(cand):
            continue
        seeds.append(len(vecs))
        vecs.append(cand % p)
        parent.append((-1, len(seeds) - 1))
        while ptr < len(vecs):
            for g, a in enumerate(m.action):
                w = (a @ vecs[ptr]) % p
                if ech.add(w):
                    vecs.append(w)
                    parent.append((ptr, g))
                else:
                    relations.append((ptr, g))
            ptr += 1
    # relations of vectors spun after the space was already full
    while ptr < len(vecs):
        for g in range(len(m.action)):
            relations.append((ptr, g))
        ptr += 1
    basis = np.stack(vecs, axis=1)
    return basis, parent, seeds, relations


def hom_space(m: GModule, n: GModule) -> HomBasis:
    """Basis of all intertwiners ``T`` with ``N_g T = T M_g``.

    ``T`` is pinned down by the images of a generating set of ``m``; the
    unknowns are those images and the equations are the relations found by
    spinning ``m`` up.  The basis returned is the RREF of the flattened maps,
    hence canonical.
    """
    _check_compatible(m, n)
    p = m.p
    if m.dim == 0 or n.dim == 0:
        return HomBasis(m, n, np.zeros((0, n.dim, m.dim), dtype=np.int64))
    basis, parent, seeds, relations = _spin(m)
    s = len(seeds)
    nd, md = n.dim, m.dim
    u = s * nd
    images = np.zeros((md, nd, u), dtype=np.int64)
    for k, (par, g) in enumerate(parent):
        if par < 0:
            images[k, :, g * nd:(g + 1) * nd] = la.identity(nd)
        else:
            images[k] = la.mul(n.action[g], images[par], p)
    sinv = la.inverse(basis, p)
    blocks = []
    if relations:
        w = np.stack([(m.action[g] @ basis[:, k]) % p for k, g in relations], axis=1)
        coeffs = la.mul(sinv, w, p)  # (md, #rel)
        flat = images.reshape(md, nd * u)
        combos = la.mul(coeffs.T, flat, p).reshape(len(relations), nd, u)
        for r, (k, g) in enumerate(relations):
            blocks.append((la.mul(n.action[g], images[k], p) - combos[r]) % p)
        system = np.concatenate(blocks, axis=0)
        sol = la.kernel_basis(system, p)
    else:
        sol = la.identity(u)
    d = sol.shape[1]
    if d == 0:
        return HomBasis(m, n, np.zeros((0, nd, md), dtype=np.int64))
    # (d, nd, md) in spin coordinates, then back to the standard basis
    ts = la.mul(images.reshape(md * nd, u), sol, p).reshape(md, nd, d).transpose(2, 1, 0)
    mats = la.mul(ts.reshape(d * nd, md), sinv, p).reshape(d, nd, md)
    canon = la.row_space(mats.reshape(d, nd * md), p)
    return HomBasis(m, n, canon.reshape(canon.shape[0], nd, md))


def hom_space_kron(m: GModule, n: GModule) -> HomBasis:
    """Same space via the stacked system ``(N_g ⊗ I − I ⊗ M_g^T) vec(T) = 0``."""
    _check_compatible(m, n)
    p = m.p
    nd, md = n.dim, m.dim
    if md == 0 or nd == 0:
        return HomBasis(m, n, np.zeros((0, nd, md), dtype=np.int64))
    rows = [(la.kron(b, la.identity(md), p) - la.kron(la.identity(nd), a.T, p)) % p
            for a, b in zip(m.action, n.action)]
    if not rows:
        k = la.identity(nd * md)
    else:
        k = la.kernel_basis(np.concatenate(rows, axis=0), p)
    canon = la.row_space(k.T, p) if k.shape[1] else np.zeros((0, nd * md), dtype=np.int64)
    return HomBasis(m, n, canon.reshape(canon.shape[0], nd, md))


def hom_to_free(x: GModule, rank: int) -> HomBasis:
    """Basis of ``Hom(X, kG^rank)`` via ``λ ↦ (x ↦ Σ_h λ(h^{-1}x) e_h)``."""
    g = x.group
    free = free_module(g, x.p, rank)
    mats_x = element_matrices(x)
    order = g.order
    out = []
    for copy in range(rank):
        for j in range(x.dim):
            mat = la.zeros(free.dim, x.dim)
            for h in range(order):
                mat[copy * order + h] = mats_x[g.inverse[h]][j]
            out.append(mat)
    mats = np.array(out, dtype=np.int64).reshape(len(out), free.dim, x.dim)
    return HomBasis(x, free, mats)


def hom_from_free(rank: int, y: GModule) -> HomBasis:
    """Basis of ``Hom(kG^rank, Y)``: generator ``copy`` goes to a basis vector of Y."""
    g = y.group
    free = free_module(g, y.p, rank)
    mats_y = element_matrices(y)
    order = g.order
    out = []
    for copy in range(rank):
        for j in range(y.dim):
            mat = la.zeros(y.dim, free.dim)
            for h in range(order):
                mat[:, copy * order + h] = mats_y[h][:, j]
            out.append(mat)
    mats = np.array(out, dtype=np.int64).reshape(len(out), y.dim, free.dim)
    return HomBasis(free, y, mats)


def span_of_composites(left: GMap | None, basis: HomBasis, right: GMap | None) -> np.ndarray:
    """Flattened vectors ``left ∘ b ∘ right`` for every basis map ``b``."""
    mats = basis.mats
    p = basis.source.p
    if right is not None:
        mats = np.matmul(mats, right.matrix) % p
    if left is not None:
        mats = np.matmul(left.matrix, mats) % p
    return la.flatten_maps(mats)


# --------------------------------------------------------------------------
# restriction and induction


def restrict(m: GModule, sub: FiniteGroup) -> GModule:
    mats = element_matrices(m)
    action = [mats[m.group.element_index(h)] for h in sub.generators]
    return _make(sub, m.p, m.dim, action)


def induce(m: GModule, group: FiniteGroup) -> GModule:
    """``kG ⊗_{kH} M`` with coset blocks ordered by the BFS transversal."""
    sub = m.group
    subgroup_indices(group, sub)  # validates H ≤ G
    transversal, label = left_cosets(group, sub)
    r = len(transversal)
    mats_m = element_matrices(m)
    d = m.dim
    action = []
    for gen in group.generators:
        gi = group.element_index(gen)
        a = la.zeros(r * d, r * d)
        for i, t in enumerate(transversal):
            gt = int(group.mult[gi, t])
            j = label[gt]
            h = int(group.mult[group.inverse[transversal[j]], gt])
            hk = sub.element_index(group.elements[h])
            a[j * d:(j + 1) * d, i * d:(i + 1) * d] = mats_m[hk]
        action.append(a)
    return _make(group, m.p, r * d, action)


def conjugate_module(m: GModule, change: np.ndarray) -> GModule:
    """Same module in the basis given by the columns of ``change``."""
    inv = la.inverse(change, m.p)
    return _make(m.group, m.p, m.dim, [la.mul(inv, la.mul(a, change, m.p), m.p) for a in m.action])
