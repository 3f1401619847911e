"""Krull-Schmidt decomposition, indecomposability certificates and isomorphism tests.

A summand is certified indecomposable in one of three ways:

* exactly, when every basis element of its endomorphism ring is a scalar plus
  a nilpotent and those nilpotent parts generate a nilpotent algebra (so the
  ring is local with residue field GF(p));
* by exhaustive enumeration of the endomorphism ring when it has at most 2^16
  elements;
* by a seeded Monte-Carlo search over ``64 * dim End`` random endomorphisms.

A ring that fails the first test, is too big for the second and survives the
third raises :class:`CertificationError` instead of being declared local.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .modules import (GMap, GModule, direct_sum_module, hom_space, submodule, zero_module)

MC_FACTOR = 64
EXHAUSTIVE_LIMIT = 2**16


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Decomposition:
    original: GModule
    summands: list[tuple[GModule, int]]
    iso: GMap  # from the direct sum of the summands (with multiplicity) to ``original``

    def expanded(self) -> list[GModule]:
        return [m for m, k in self.summands for _ in range(k)]

    def direct_sum(self) -> GModule:
        mods = self.expanded()
        if not mods:
            return zero_module(self.original.group, self.original.p)
        return direct_sum_module(*mods)

    def dims(self) -> list[tuple[int, int]]:
        return [(m.dim, k) for m, k in self.summands]


# --------------------------------------------------------------------------
# invariants


def rank_profile(a: np.ndarray, p: int) -> tuple[int, ...]:
    """Ranks of ``(a - 1)^i`` for ``i = 1..n``."""
    n = a.shape[0]
    x = (a - la.identity(n)) % p
    cur = x
    out = []
    while len(out) < n:
        r = la.rank(cur, p)
        out.append(r)
        if r == 0 or (len(out) > 1 and out[-2] == r):
            break
        cur = la.mul(cur, x, p)
    out.extend([out[-1]] * (n - len(out)))
    return tuple(out)


def canonical_key(m: GModule) -> tuple:
    return (m.dim, tuple(rank_profile(a, m.p) for a in m.action))


# --------------------------------------------------------------------------
# Fitting splits and the local-ring certificate


def _stable_power(phi: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    psi = phi
    r = la.rank(psi, p)
    while True:
        sq = la.mul(psi, psi, p)
        r2 = la.rank(sq, p)
        if r2 == r:
            return psi, r
        psi, r = sq, r2


def fitting_split(m: GModule, phi: GMap | np.ndarray):
    """Split ``m`` as (generalized kernel) ⊕ (stable image) of an endomorphism.

    Returns ``(A, B, iso)`` with ``iso: A ⊕ B → m`` or ``None`` when ``phi`` is
    nilpotent or invertible.
    """
    mat = phi.matrix if isinstance(phi, GMap) else phi
    p = m.p
    psi, r = _stable_power(mat % p, p)
    if r == 0 or r == m.dim:
        return None
    kb = la.kernel_basis(psi, p)
    ib = la.column_space(psi, p)
    a, _ = submodule(m, kb)
    b, _ = submodule(m, ib)
    iso_mat = np.concatenate([kb, ib], axis=1)
    return a, b, GMap(direct_sum_module(a, b), m, iso_mat)


def _is_nilpotent(a: np.ndarray, p: int) -> bool:
    n = a.shape[0]
    k = 1
    cur = a
    while k < n:
        cur = la.mul(cur, cur, p)
        k *= 2
    return not cur.any()


def _single_eigenvalue(a: np.ndarray, p: int) -> int | None:
    n = a.shape[0]
    eye = la.identity(n)
    if n % p:
        lam = (int(np.trace(a)) * pow(n, -1, p)) % p
        candidates = [lam]
    else:
        candidates = range(p)
    for lam in candidates:
        if _is_nilpotent((a - lam * eye) % p, p):
            return lam
    return None


def _generates_nilpotent_algebra(mats: list[np.ndarray], n: int, p: int) -> bool:
    w = la.identity(n)
    while w.shape[1]:
        images = np.concatenate([la.mul(x, w, p) for x in mats], axis=1)
        nxt = la.column_space(images, p)
        if nxt.shape[1] == w.shape[1]:
            return False
        w = nxt
    return True


def local_certificate(m: GModule, endos: np.ndarray) -> bool:
    """True iff End(m) is verified local with residue field GF(p)."""
    p, n = m.p, m.dim
    nilparts = []
    for a in endos:
        lam = _single_eigenvalue(a, p)
        if lam is None:
            return False
        nilparts.append((a - lam * la.identity(n)) % p)
    return _generates_nilpotent_algebra(nilparts, n, p)


def _split_piece(m: GModule, rng: np.random.Generator):
    """A Fitting split of ``m`` or ``None`` once ``m`` is certified indecomposable."""
    p, n = m.p, m.dim
    if n <= 1:
        return None
    endos = hom_space(m, m).mats
    d = endos.shape[0]
    if d == 1:
        return None
    eye = la.identity(n)
    for a in endos:
        if _single_eigenvalue(a, p) is None:
            for lam in range(p):
                split = fitting_split(m, (a - lam * eye) % p)
                if split is not None:
                    return split
    if local_certificate(m, endos):
        return None
    for _ in range(MC_FACTOR * d):
        c = rng.integers(0, p, size=d)
        phi = np.tensordot(c, endos, axes=1) % p
        split = fitting_split(m, phi)
        if split is not None:
            return split
    if p**d <= EXHAUSTIVE_LIMIT:
        for c in itertools.product(range(p), repeat=d):
            phi = np.tensordot(np.array(c), endos, axes=1) % p
            split = fitting_split(m, phi)
            if split is not None:
                return split
        return None
    raise CertificationError(
        f"Monte-Carlo search over {MC_FACTOR * d} endomorphisms found no splitting of a "
        f"{n}-dimensional module, but its endomorphism ring (dim {d}) is neither certified local "
        f"nor small enough to enumerate")


def is_indecomposable(m: GModule, seed: int = 1) -> bool:
    if m.dim == 0:
        raise ValueError("the zero module is neither decomposable nor indecomposable")
    return _split_piece(m, np.random.default_rng(seed)) is None


def indecomposable_iso(m: GModule, n: GModule) -> np.ndarray | None:
    """Invertible intertwiner ``m → n`` between indecomposables, if one exists.

    When ``m ≅ n`` the basis of Hom(m, n) cannot lie in the radical, so some
    basis element is already invertible.
    """
    if m.dim != n.dim:
        return None
    for mat in hom_space(m, n).mats:
        if la.is_invertible(mat, m.p):
            return mat
    return None


# --------------------------------------------------------------------------
# Krull-Schmidt


def krull_schmidt(m: GModule, seed: int = 1) -> Decomposition:
    rng = np.random.default_rng(seed)
    p = m.p
    if m.dim == 0:
        return Decomposition(m, [], GMap(zero_module(m.group, p), m, la.zeros(0, 0)))
    pending = [(m, la.identity(m.dim))]
    pieces: list[tuple[GModule, np.ndarray]] = []
    while pending:
        piece, inc = pending.pop()
        split = _split_piece(piece, rng)
        if split is None:
            pieces.append((piece, inc))
            continue
        a, b, iso = split
        pending.append((b, la.mul(inc, iso.matrix[:, a.dim:], p)))
        pending.append((a, la.mul(inc, iso.matrix[:, :a.dim], p)))

    keyed = [(canonical_key(x), x, inc) for x, inc in pieces]
    keyed.sort(key=lambda t: t[0])
    groups: list[tuple[tuple, GModule, list[np.ndarray]]] = []
    for key, x, inc in keyed:
        for gkey, rep, cols in groups:
            if gkey != key:
                continue
            phi = indecomposable_iso(rep, x)
            if phi is not None:
                cols.append(la.mul(inc, phi, p))
                break
        else:
            groups.append((key, x, [inc]))
    summands = [(rep, len(cols)) for _, rep, cols in groups]
    iso_mat = np.concatenate([c for _, _, cols in groups for c in cols], axis=1)
    source = direct_sum_module(*[rep for rep, k in summands for _ in range(k)])
    return Decomposition(m, summands, GMap(source, m, iso_mat))


def is_isomorphic(m: GModule, n: GModule, seed: int = 1) -> tuple[bool, GMap | None]:
    """Decide ``m ≅ n``; the witness is an invertible intertwiner ``m → n``."""
    if m.group is not n.group or m.p != n.p:
        raise ValueError("modules live over different groups or fields")
    if m.dim != n.dim:
        return False, None
    p = m.p
    if m.dim == 0:
        return True, GMap(m, n, la.zeros(0, 0))
    dm = krull_schmidt(m, seed)
    dn = krull_schmidt(n, seed)
    if sorted((canonical_key(x), k) for x, k in dm.summands) != sorted(
            (canonical_key(x), k) for x, k in dn.summands):
        return False, None

    offsets_n = []
    off = 0
    for x, k in dn.summands:
        offsets_n.append(off)
        off += x.dim * k
    used = [False] * len(dn.summands)
    block = la.zeros(n.dim, m.dim)
    col = 0
    for x, k in dm.summands:
        for j, (y, kk) in enumerate(dn.summands):
            if used[j] or kk != k or canonical_key(y) != canonical_key(x):
                continue
            phi = indecomposable_iso(x, y)
            if phi is None:
                continue
            used[j] = True
            for c in range(k):
                r0 = offsets_n[j] + c * y.dim
                block[r0:r0 + y.dim, col:col + x.dim] = phi
                col += x.dim
            break
        else:
            return False, None
    witness = la.mul(dn.iso.matrix, la.mul(block, la.inverse(dm.iso.matrix, p), p), p)
    return True, GMap(m, n, witness)
