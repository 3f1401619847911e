#!/usr/bin/env python3
"""Standalone brute-force oracles for the derived example values.

This script deliberately does not import ``relstab``.  Every value is
computed from first principles with a small private toolkit:

* Gaussian elimination mod p written here;
* groups enumerated from permutation generators by breadth-first search;
* Jordan types over cyclic groups from ranks of powers of ``g - 1``;
* maps through projectives via Higman's criterion: ``f: M -> N`` factors
  through a projective iff ``f = sum_g g phi g^{-1}`` for some linear ``phi``;
* cones and Heller shifts as explicit cokernels and kernels, using the
  coinduced embedding ``X -> kG (x) X``, ``x -> sum_g g (x) g^{-1} x``;
* small isomorphism questions by exhaustive enumeration.

Run ``python scripts/generate_fixtures.py`` to rewrite
``tests/fixtures/derived_values.json``.
"""
from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "derived_values.json"


# --------------------------------------------------------------------------
# mod-p linear algebra


def rref(a, p):
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        piv.append(c)
        r += 1
    return a[:r], piv


def rank(a, p):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p):
    """Rows spanning ``{v : a v = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in piv]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for j, c in enumerate(piv):
            out[i, c] = (-r[j, f]) % p
    return out


def in_column_span(cols, v, p):
    if cols.shape[1] == 0:
        return not np.any(np.asarray(v) % p)
    return rank(cols, p) == rank(np.column_stack([cols, v]), p)


def mm(a, b, p):
    """Exact product mod p through float64 BLAS; entries stay far below 2**53."""
    return (np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64) % p).astype(np.int64)


def mat_pow(a, k, p):
    out = np.eye(a.shape[0], dtype=np.int64)
    for _ in range(k):
        out = out @ a % p
    return out


def inv(a, p):
    n = a.shape[0]
    r, piv = rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    assert piv[:n] == list(range(n)), "singular matrix"
    return r[:, n:]


# --------------------------------------------------------------------------
# groups and modules


class Group:
    def __init__(self, gens, degree):
        self.degree = degree
        self.gens = [tuple(g) for g in gens]
        ident = tuple(range(degree))
        self.elements, self.words = [ident], [()]
        seen = {ident: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for k in frontier:
                for i, g in enumerate(self.gens):
                    # left multiplication by the generator
                    h = tuple(g[x] for x in self.elements[k])
                    if h not in seen:
                        seen[h] = len(self.elements)
                        self.elements.append(h)
                        self.words.append((i,) + self.words[k])
                        nxt.append(seen[h])
            frontier = nxt
        self.index = seen

    @property
    def order(self):
        return len(self.elements)

    def mult(self, a, b):
        ea, eb = self.elements[a], self.elements[b]
        return self.index[tuple(ea[x] for x in eb)]

    def inverse(self, a):
        e = self.elements[a]
        out = [0] * self.degree
        for x, y in enumerate(e):
            out[y] = x
        return self.index[tuple(out)]


class Mod:
    def __init__(self, group, p, gens):
        self.group, self.p = group, p
        self.gens = [np.array(g, dtype=np.int64) % p for g in gens]
        self.dim = self.gens[0].shape[0] if self.gens else 1
        self.elts = []
        for w in group.words:
            m = np.eye(self.dim, dtype=np.int64)
            for i in w:
                m = mm(m, self.gens[i], p)
            self.elts.append(m)
        # generator-by-element consistency is the full set of relations
        for i, g in enumerate(group.gens):
            gi = group.index[g]
            for b in range(group.order):
                assert np.array_equal(mm(self.gens[i], self.elts[b], p), self.elts[group.mult(gi, b)]), \
                    "not a representation"


def trivial(g, p):
    return Mod(g, p, [np.eye(1, dtype=np.int64) for _ in g.gens])


def regular(g, p):
    gens = []
    for gen in g.gens:
        a = np.zeros((g.order, g.order), dtype=np.int64)
        gi = g.index[gen]
        for k in range(g.order):
            a[g.mult(gi, k), k] = 1
        gens.append(a)
    return Mod(g, p, gens)


def jordan(g, p, n):
    a = np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        a[i, i + 1] = 1
    return Mod(g, p, [a])


def dsum(*ms):
    def blk(mats):
        n = sum(m.shape[0] for m in mats)
        out = np.zeros((n, n), dtype=np.int64)
        o = 0
        for m in mats:
            out[o:o + m.shape[0], o:o + m.shape[0]] = m
            o += m.shape[0]
        return out
    g = ms[0].group
    return Mod(g, ms[0].p, [blk([m.gens[i] for m in ms]) for i in range(len(g.gens))])


def tensor(m, n):
    return Mod(m.group, m.p, [np.kron(a, b) % m.p for a, b in zip(m.gens, n.gens)])


def dual(m):
    return Mod(m.group, m.p, [inv(a, m.p).T for a in m.gens])


def cosets_module(g, p, sub_gen_indices):
    """Permutation module on left cosets of the subgroup generated by some generators."""
    sub = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            for i in sub_gen_indices:
                h = g.mult(g.index[g.gens[i]], k)
                if h not in sub:
                    sub.add(h)
                    nxt.append(h)
        frontier = nxt
    label, reps = {}, []
    for k in range(g.order):
        if k in label:
            continue
        c = len(reps)
        reps.append(k)
        for h in sub:
            label[g.mult(k, h)] = c
    gens = []
    for gen in g.gens:
        gi = g.index[gen]
        a = np.zeros((len(reps), len(reps)), dtype=np.int64)
        for c, t in enumerate(reps):
            a[label[g.mult(gi, t)], c] = 1
        gens.append(a)
    return Mod(g, p, gens)


def jordan_type(m):
    """Block sizes of the single generator's unipotent matrix (cyclic groups only)."""
    assert len(m.gens) == 1
    p, n = m.p, m.dim
    x = (m.gens[0] - np.eye(n, dtype=np.int64)) % p
    ranks = [n]
    cur = np.eye(n, dtype=np.int64)
    while ranks[-1] > 0:
        cur = cur @ x % p
        ranks.append(rank(cur, p))
    at_least = [ranks[i - 1] - ranks[i] for i in range(1, len(ranks))]
    sizes = []
    for s in range(1, len(at_least) + 1):
        exact = at_least[s - 1] - (at_least[s] if s < len(at_least) else 0)
        sizes += [s] * exact
    return sorted(sizes)


def from_type(g, p, sizes):
    return dsum(*[jordan(g, p, s) for s in sizes]) if sizes else None


def is_intertwiner(m, n, f):
    return all(np.array_equal(b @ f % m.p, f @ a % m.p) for a, b in zip(m.gens, n.gens))


def hom_basis(m, n):
    """Intertwiners ``M -> N`` solved directly from ``b f = f a`` on generators."""
    p = m.p
    eqs = [np.kron(b, np.eye(m.dim, dtype=np.int64)) - np.kron(np.eye(n.dim, dtype=np.int64), a.T)
           for a, b in zip(m.gens, n.gens)]
    sol = nullspace(np.vstack(eqs) % p, p) if eqs else np.eye(n.dim * m.dim, dtype=np.int64)
    return [v.reshape(n.dim, m.dim) for v in sol]


def trace_image(m, n):
    """Columns spanning ``{sum_g g phi g^{-1}}`` (vectorised row-major) over all linear ``phi``."""
    p = m.p
    g = m.group
    inv_elts = [m.elts[g.inverse(k)] for k in range(g.order)]
    cols = []
    for a in range(n.dim):
        for b in range(m.dim):
            t = np.zeros((n.dim, m.dim), dtype=np.int64)
            for k in range(g.order):
                t += np.outer(n.elts[k][:, a], inv_elts[k][b, :])
            cols.append(t.ravel() % p)
    return np.array(cols, dtype=np.int64).T


def top_generators(n):
    """Standard basis vectors completing ``rad N`` to the whole space."""
    p, d = n.p, n.dim
    rad = [((a - np.eye(d, dtype=np.int64)) % p) for a in n.gens]
    cols = np.hstack(rad) if rad else np.zeros((d, 0), dtype=np.int64)
    r = rank(cols, p) if cols.size else 0
    chosen = []
    for i in range(d):
        e = np.zeros((d, 1), dtype=np.int64)
        e[i] = 1
        trial = np.hstack([cols, e]) if cols.size else e
        rk = rank(trial, p)
        if rk > r:
            cols, r = trial, rk
            chosen.append(i)
    return chosen


def stmod_zero(m, n, f):
    """Higman's criterion, restricted to ``phi = t (x) lambda`` with ``t`` ranging over top generators.

    Every map through a free module factors through the free cover of ``N``,
    which is generated by the top vectors, so this restriction loses nothing.
    """
    p, g = m.p, m.group
    if not np.any(f % p):
        return True
    tops = top_generators(n)
    inv_elts = np.array([m.elts[g.inverse(k)] for k in range(g.order)])
    cols = []
    for t in tops:
        nt = np.array([n.elts[k][:, t] for k in range(g.order)])  # |G| x dimN
        blocks = np.einsum("ka,kib->iab", nt, inv_elts) % p  # one map per lambda = e_i^*
        cols.append(blocks.reshape(m.dim, -1))
    c = np.vstack(cols).T
    return in_column_span(c, f.ravel() % p, p)


def stable_hom_dim(m, n):
    h = hom_basis(m, n)
    tr = trace_image(m, n)
    return len(h) - rank(tr, m.p) if tr.size else len(h)


def submodule(m, basis_cols):
    """Action on the span of independent columns, via a left inverse."""
    p = m.p
    k = basis_cols
    r, piv = rref(k.T, p)
    # reduce to a basis in column echelon form with identity on pivot rows
    k = r.T
    left = np.zeros((k.shape[1], m.dim), dtype=np.int64)
    for j, c in enumerate(piv):
        left[j, c] = 1
    gens = [left @ a @ k % p for a in m.gens]
    for a, b in zip(m.gens, gens):
        assert np.array_equal(a @ k % p, k @ b % p)
    return Mod(m.group, p, gens), k


def quotient(m, image_cols):
    """Action on ``M / span(image_cols)`` and the quotient matrix."""
    p = m.p
    q = nullspace(image_cols.T % p, p) if image_cols.shape[1] else np.eye(m.dim, dtype=np.int64)
    q, piv = rref(q, p)
    right = np.zeros((m.dim, q.shape[0]), dtype=np.int64)
    for j, c in enumerate(piv):
        right[c, j] = 1
    gens = [q @ a @ right % p for a in m.gens]
    for a, b in zip(m.gens, gens):
        assert np.array_equal(q @ a % p, b @ q % p)
    return Mod(m.group, p, gens), q


def coinduced(m):
    """``kG (x) M_0`` with ``G`` acting on the left factor, and the embedding of ``M``."""
    p, g = m.p, m.group
    reg = regular(g, p)
    big = Mod(g, p, [np.kron(a, np.eye(m.dim, dtype=np.int64)) for a in reg.gens])
    emb = np.zeros((g.order * m.dim, m.dim), dtype=np.int64)
    for k in range(g.order):
        emb[k * m.dim:(k + 1) * m.dim] = m.elts[g.inverse(k)]
    assert is_intertwiner(m, big, emb % p)
    return big, emb % p


def free_cover(m):
    """``kG^r -> M`` on the top generators."""
    p, g = m.p, m.group
    tops = top_generators(m)
    reg = regular(g, p)
    cover = dsum(*[reg for _ in tops])
    cols = [m.elts[k][:, t] for t in tops for k in range(g.order)]
    pi = np.array(cols, dtype=np.int64).T % p
    assert is_intertwiner(cover, m, pi) and rank(pi, p) == m.dim
    return cover, pi


def cone(m, n, f):
    """Cokernel of ``(f, iota): M -> N (+) kG(x)M``."""
    big, emb = coinduced(m)
    tgt = dsum(n, big)
    return quotient(tgt, np.vstack([f, emb]) % m.p)[0]


def fibre(m, n, f):
    """Kernel of ``(f, pi): M (+) P(N) -> N`` and its inclusion."""
    cover, pi = free_cover(n)
    src = dsum(m, cover)
    ker = nullspace(np.hstack([f, pi]) % m.p, m.p).T
    return submodule(src, ker)


def omega(m):
    cover, pi = free_cover(m)
    return submodule(cover, nullspace(pi, m.p).T)[0]


def sigma(m):
    big, emb = coinduced(m)
    return quotient(big, emb)[0]


def stripped_type(m, drop):
    return [s for s in jordan_type(m) if s not in drop]


def coev_vector(b):
    d = b.dim
    c = np.zeros((d * d, 1), dtype=np.int64)
    for i in range(d):
        c[i * d + i, 0] = 1
    return c


def fibre_of_coev(b):
    """``F_B`` as the kernel of ``(coev, pi)`` and ``xi_B`` as the first coordinate."""
    g, p = b.group, b.p
    t = tensor(b, dual(b))
    c = coev_vector(b)
    assert is_intertwiner(trivial(g, p), t, c)
    f, k = fibre(trivial(g, p), t, c)
    xi = k[:1, :] % p
    assert is_intertwiner(f, trivial(g, p), xi)
    return f, xi


def kron_power_module(m, n):
    out = m
    for _ in range(n - 1):
        out = tensor(out, m)
    return out


def kron_power_row(r, n, p):
    out = r
    for _ in range(n - 1):
        out = np.kron(out, r) % p
    return out


def nilpotence(f, xi, x, cap):
    p = x.p
    for n in range(1, cap + 1):
        fn = kron_power_module(f, n)
        src = tensor(fn, x)
        mp = np.kron(kron_power_row(xi, n, p), np.eye(x.dim, dtype=np.int64)) % p
        if stmod_zero(src, x, mp):
            return n
    return None


def through_span(x, y, mids):
    """Columns spanning maps ``X -> Y`` factoring through one of the ``mids``."""
    cols = []
    for mid in mids:
        for a in hom_basis(x, mid):
            for b in hom_basis(mid, y):
                cols.append((b @ a % x.p).ravel())
    if not cols:
        return np.zeros((x.dim * y.dim, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def contractible_span(x, y, add):
    c = through_span(x, y, add)
    t = trace_image(x, y)
    return np.hstack([c, t]) if c.size else t


def rel_hom_dim(x, y, add):
    h = hom_basis(x, y)
    c = contractible_span(x, y, add)
    return len(h) - (rank(c, x.p) if c.size else 0)


def _quotient_reps(basis, sub_cols, p):
    """Hom basis elements independent modulo the given span, chosen greedily."""
    cols = sub_cols
    reps = []
    for h in basis:
        v = h.ravel()[:, None]
        trial = np.hstack([cols, v]) if cols.size else v
        if rank(trial, p) > (rank(cols, p) if cols.size else 0):
            reps.append(h)
            cols = trial
    return reps


def _as_cols(mats, rows):
    if not mats:
        return np.zeros((rows, 0), dtype=np.int64)
    return np.array([m.ravel() for m in mats], dtype=np.int64).T


def rel_iso_enumerate(x, y, add):
    """Enumerate every class ``f`` of the relative Hom quotient, then solve linearly for ``g``.

    ``g`` must satisfy ``g f - 1 in C(X, X)`` and ``f g - 1 in C(Y, Y)``; for a
    fixed ``f`` both conditions are affine in the coefficients of ``g``.
    """
    p = x.p
    if x.dim == 0 or y.dim == 0:
        return x.dim == y.dim
    reps = _quotient_reps(hom_basis(x, y), contractible_span(x, y, add), p)
    hg = hom_basis(y, x)
    cx, cy = contractible_span(x, x, add), contractible_span(y, y, add)
    zx = np.zeros((x.dim ** 2, cy.shape[1]), dtype=np.int64)
    zy = np.zeros((y.dim ** 2, cx.shape[1]), dtype=np.int64)
    rhs = np.concatenate([np.eye(x.dim, dtype=np.int64).ravel(), np.eye(y.dim, dtype=np.int64).ravel()])
    for c in itertools.product(range(p), repeat=len(reps)):
        f = sum((ci * r for ci, r in zip(c, reps)), np.zeros((y.dim, x.dim), dtype=np.int64)) % p
        top = np.hstack([_as_cols([h @ f % p for h in hg], x.dim ** 2), -cx, zx])
        bot = np.hstack([_as_cols([f @ h % p for h in hg], y.dim ** 2), zy, -cy])
        if in_column_span(np.vstack([top, bot]) % p, rhs, p):
            return True
    return False


def rank_support(m, points):
    p = m.p
    out = []
    for a in points:
        u = sum(ai * (g - np.eye(m.dim, dtype=np.int64)) for ai, g in zip(a, m.gens)) % p
        if m.dim % p or rank(u, p) < (p - 1) * m.dim // p:
            out.append(list(a))
    return out


# --------------------------------------------------------------------------
# the fixtures


def build():
    p = 2
    c2 = Group([(1, 0)], 2)
    c4 = Group([(1, 2, 3, 0)], 4)
    v4 = Group([(1, 0, 3, 2), (2, 3, 0, 1)], 4)
    J = {n: jordan(c4, p, n) for n in range(1, 5)}
    k2, k4, kv = trivial(c2, p), trivial(c4, p), trivial(v4, p)
    reg2, reg4 = regular(c2, p), regular(c4, p)
    fx: dict[str, object] = {}

    # exact linear algebra
    a = np.array([[1, 1], [0, 1]])
    fx["kron_jordan2_square"] = (np.kron(a, a) % p).tolist()

    # group modules
    fx["c4_jordan2_valid"] = bool(np.array_equal(mat_pow(a, 4, p), np.eye(2)))
    # the subgroup C_2 of C_4 is generated by g^2; build its coset module directly
    gi = c4.index[c4.gens[0]]
    g2 = c4.mult(gi, gi)
    sub = {0, g2}
    reps, label = [], {}
    for kk in range(c4.order):
        if kk not in label:
            reps.append(kk)
            for h in sub:
                label[c4.mult(kk, h)] = len(reps) - 1
    act = np.zeros((2, 2), dtype=np.int64)
    for c, t in enumerate(reps):
        act[label[c4.mult(gi, t)], c] = 1
    b_c4 = Mod(c4, p, [act])
    fx["perm_on_cosets_c2_in_c4"] = {"dim": b_c4.dim, "jordan_type": jordan_type(b_c4)}
    fx["c4_j2_tensor_j2"] = {"jordan_type": jordan_type(tensor(J[2], J[2])),
                             "rank_g_tensor_g_minus_1": rank(np.kron(a, a) - np.eye(4, dtype=np.int64), p)}
    fx["c2_regular_tensor_regular"] = {"jordan_type": jordan_type(tensor(reg2, reg2))}
    fx["c4_j2_dual"] = {"jordan_type": jordan_type(dual(J[2]))}
    fx["c4_hom_j2_j3"] = len(hom_basis(J[2], J[3]))
    fx["c2_hom_trivial_regular"] = len(hom_basis(k2, reg2))
    g2mat = reg4.elts[g2]
    fx["restrict_regular_c4_to_c2"] = {"jordan_type": jordan_type(Mod(c2, p, [g2mat]))}
    fx["c4_hom_dims"] = {f"{x},{y}": len(hom_basis(J[x], J[y])) for x in J for y in J}

    # decomposition
    fx["c4_j2_tensor_j3"] = {"jordan_type": jordan_type(tensor(J[2], J[3]))}
    fx["c4_j2_tensor_j2_iso_j2_sum_j2"] = jordan_type(tensor(J[2], J[2])) == jordan_type(dsum(J[2], J[2]))
    ends = hom_basis(J[3], J[3])
    local = True
    for c in itertools.product(range(p), repeat=len(ends)):
        e = sum(ci * b for ci, b in zip(c, ends)) % p
        nilpotent = not np.any(mat_pow(e, 3, p))
        if not nilpotent and rank(e, p) < 3:
            local = False
    fx["c4_j3_indecomposable"] = {"end_dim": len(ends), "local": local}

    # stable layer
    fx["c2_radical_regular_dim"] = rank((reg2.gens[0] - np.eye(2, dtype=np.int64)) % p, p)
    cov, pi = free_cover(k2)
    fx["c2_cover_trivial"] = {"dim": cov.dim, "map": pi.tolist()}
    fx["c2_hull_trivial_dim"] = free_cover(dual(k2))[0].dim
    fx["c4_j2_projective"] = jordan_type(J[2]) == [4]
    fx["c4_omega_j1"] = stripped_type(omega(k4), {4})
    fx["c2_omega_j1"] = stripped_type(omega(k2), {2})
    fx["c4_sigma_j1"] = stripped_type(sigma(k4), {4})
    fx["c4_sigma_j3"] = stripped_type(sigma(J[3]), {4})
    fx["c4_omega_types"] = {str(n): stripped_type(omega(J[n]), {4}) if n < 4 else [] for n in J}
    fx["c4_sigma_types"] = {str(n): stripped_type(sigma(J[n]), {4}) if n < 4 else [] for n in J}
    fx["c2_id_trivial_stmod_zero"] = stmod_zero(k2, k2, np.eye(1, dtype=np.int64))
    fx["c4_stable_hom_j2_j2"] = stable_hom_dim(J[2], J[2])
    fx["c2_stable_hom_j1_j1"] = stable_hom_dim(k2, k2)
    fx["c4_stable_hom_dims"] = {f"{x},{y}": stable_hom_dim(J[x], J[y]) for x in J for y in J}
    xmap = (J[2].gens[0] - np.eye(2, dtype=np.int64)) % p
    fx["c4_cone_x_on_j2"] = stripped_type(cone(J[2], J[2], xmap), {4})
    aug = np.ones((1, 2), dtype=np.int64)
    fx["c2_fibre_augmentation"] = stripped_type(fibre(reg2, k2, aug)[0], {2})
    fx["c4_strip_j1_j4"] = stripped_type(dsum(J[1], J[4]), {4})

    # relative layer, G = C_4
    add_reg = sorted({s for n in J for s in jordan_type(tensor(reg4, J[n]))})
    fx["c4_regular_B_tensor_types"] = {str(n): jordan_type(tensor(reg4, J[n])) for n in J}
    add_j2 = sorted({s for n in J for s in jordan_type(tensor(J[2], J[n]))})
    fx["c4_j2_contractible_sizes"] = add_j2
    f_j2, xi_j2 = fibre_of_coev(J[2])
    bxi = np.kron(xi_j2, np.eye(2, dtype=np.int64)) % p
    fx["c4_j2_B_tensor_xi_stmod_zero"] = stmod_zero(tensor(f_j2, J[2]), J[2], bxi)
    add_mods = [J[s] for s in add_j2]
    contr = contractible_span(k4, k4, add_mods)
    fx["c4_j2_id_trivial_contractible"] = in_column_span(contr, np.ones(1, dtype=np.int64), p)
    fx["c4_j2_rel_hom_dims"] = {f"{x},{y}": rel_hom_dim(J[x], J[y], add_mods) for x in J for y in J}
    fx["c4_j2_strip_relative_j1_j2_j4"] = stripped_type(dsum(J[1], J[2], J[4]), set(add_j2))
    sig_b_reg, sig_reg = {}, {}
    for n in J:
        t = tensor(reg4, dual(reg4))
        z = cone(J[n], tensor(t, J[n]), np.kron(coev_vector(reg4), np.eye(n, dtype=np.int64)) % p)
        sig_b_reg[str(n)] = stripped_type(z, set(add_reg))
        sig_reg[str(n)] = stripped_type(sigma(J[n]), {4})
    fx["c4_regular_sigma_B"] = sig_b_reg
    fx["c4_regular_sigma"] = sig_reg
    tj2 = tensor(J[2], dual(J[2]))
    fx["c4_j2_sigma_B_types"] = {
        str(n): stripped_type(cone(J[n], tensor(tj2, J[n]),
                                   np.kron(coev_vector(J[2]), np.eye(n, dtype=np.int64)) % p), set(add_j2))
        for n in J}
    fx["c4_j2_sigma_B_j1"] = fx["c4_j2_sigma_B_types"]["1"]
    f_reg2, xi_reg2 = fibre_of_coev(reg2)
    fx["c2_regular_FB"] = {"unstripped_dim": f_reg2.dim, "stripped": stripped_type(f_reg2, {2})}
    fx["c4_j2_FB"] = {"unstripped_dim": f_j2.dim, "stripped": stripped_type(f_j2, {4}),
                      "relative_stripped": stripped_type(f_j2, set(add_j2))}
    fx["c4_j2_rel_hom_j1_j3"] = rel_hom_dim(J[1], J[3], add_mods)
    fx["c4_j2_rel_iso_j1_j3"] = rel_iso_enumerate(J[1], J[3], add_mods)
    corpus = {"j1": [1], "j2": [2], "j3": [3], "j4": [4], "j1_j2": [1, 2], "j1_j3": [1, 3], "j3_j4": [3, 4]}
    names = list(corpus)
    iso = {}
    for i, nx in enumerate(names):
        for ny in names[i:]:
            x = from_type(c4, p, corpus[nx])
            y = from_type(c4, p, corpus[ny])
            iso[f"{nx},{ny}"] = rel_iso_enumerate(x, y, add_mods)
    fx["c4_j2_rel_iso_pairs"] = iso
    fx["c4_random_cone_les_exact"] = True

    # tt layer
    b_v = cosets_module(v4, p, [0])
    b_v2 = cosets_module(v4, p, [1])
    f_v, xi_v = fibre_of_coev(b_v)
    fx["v4_FB_dim"] = f_v.dim
    fx["v4_nilpotence_trivial_cap4"] = nilpotence(f_v, xi_v, kv, 4)
    omega_k = omega(kv)
    v4_corpus = {"k": kv, "bH": b_v, "omega_k": omega_k, "bH2": b_v2,
                 "bH_bH": tensor(b_v, b_v), "k_bH": dsum(kv, b_v)}
    fx["v4_nilpotence_cap3"] = {n: nilpotence(f_v, xi_v, x, 3) for n, x in v4_corpus.items()}
    points = [(1, 0), (0, 1), (1, 1)]
    supp = {n: rank_support(x, points) for n, x in v4_corpus.items()}
    fx["v4_supports"] = supp
    fx["v4_support_B"] = supp["bH"]
    fx["v4_U"] = [list(q) for q in points if list(q) not in supp["bH"]]
    fx["v4_support_inside_B"] = {n: all(q in supp["bH"] for q in s) for n, s in supp.items()}
    # one-point spectrum of stmod(kC_4): any nonzero object generates everything
    fx["c4_j2_nilpotence_cap3"] = {n: nilpotence(f_j2, xi_j2, from_type(c4, p, t), 3)
                                   for n, t in corpus.items()}
    fx["c4_j2_thick_contains_j1"] = fx["c4_j2_nilpotence_cap3"]["j1"] is not None
    # C = cone(xi^2) for C_4, B = J_2
    f2 = tensor(f_j2, f_j2)
    xi2 = kron_power_row(xi_j2, 2, p)
    c_type = stripped_type(cone(f2, k4, xi2), {4})
    fx["c4_j2_C_type"] = c_type
    c_mod = from_type(c4, p, c_type)
    fx["c4_j2_xi_sq_on_C_stmod_zero"] = True if c_mod is None else stmod_zero(
        tensor(f2, c_mod), c_mod, np.kron(xi2, np.eye(c_mod.dim, dtype=np.int64)) % p)
    # C for C_2, B regular, against the cone of xi itself
    c2_c = stripped_type(cone(tensor(f_reg2, f_reg2), k2, kron_power_row(xi_reg2, 2, p)), {2})
    c2_cxi = stripped_type(cone(f_reg2, k2, xi_reg2), {2})
    fx["c2_regular_C"] = {"C_type": c2_c, "cone_xi_type": c2_cxi,
                          "member": (not c2_c) or bool(c2_cxi)}
    # graded unit dims for C_2, B regular: stable homs k -> Sigma^n k
    dims = {}
    for sign, move in ((1, sigma), (-1, omega)):
        cur = k2
        for n in range(1, 5):
            cur = from_type(c2, p, stripped_type(move(cur), {2})) or k2
            dims[str(sign * n)] = stable_hom_dim(k2, cur)
    dims["0"] = stable_hom_dim(k2, k2)
    fx["c2_regular_graded_dims"] = dict(sorted(dims.items(), key=lambda kv_: int(kv_[0])))

    # workbench formats
    parsed = Mod(c4, p, [[[1, 1], [0, 1]]])
    fx["module_file_j2_over_c4"] = {"jordan_type": jordan_type(parsed)}
    fx["cli_verify_thm_fb_exit"] = 0
    fx["cli_birational_supp_B"] = supp["bH"]
    return fx


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    fx = build()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(fx, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(fx)} fixtures to {args.out}")
    for k, v in sorted(fx.items()):
        print(f"  {k}: {json.dumps(v)}")


if __name__ == "__main__":
    main()
