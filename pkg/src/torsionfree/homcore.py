"""Hom, tensor, projective covers, resolutions, duals, transpose and Ext.

Modules are left modules (see :mod:`torsionfree.algebra`); anything that is
naturally a right A-module comes back as a module over ``opposite(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMismatch,
    BimoduleRep,
    ModuleRep,
    as_left_bimodule,
    direct_sum,
    opposite,
    regular_bimodule,
    regular_module,
    zero_module,
)
from .exactla import column_space, complete_basis, kernel_basis, rank, solve
from .structure import (
    MatrixAlgebra,
    idempotent_classes,
    primitive_idempotents,
    radical,
    regular_matrix_algebra,
)


class InvalidPresentation(ValueError):
    pass


# ---------------------------------------------------------------------------
# hom spaces


def intertwiners(src: np.ndarray, tgt: np.ndarray, m: int, n: int, p: int) -> np.ndarray:
    """Basis (k, n, m) of matrices f with f @ src[g] == tgt[g] @ f for all g."""
    if m == 0 or n == 0:
        return np.zeros((0, n, m), dtype=np.int64)
    if len(src) == 0:
        return np.eye(n * m, dtype=np.int64).reshape(n * m, n, m)
    eye_m, eye_n = np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64)
    # row-major vec: vec(f @ s) = (I ⊗ s^T) vec f, vec(t @ f) = (t ⊗ I) vec f
    rows = [np.kron(eye_n, s.T) - np.kron(t, eye_m) for s, t in zip(src, tgt)]
    ker = kernel_basis(np.concatenate(rows, axis=0) % p, p)
    return ker.T.reshape(-1, n, m).copy()


def hom_basis(M: ModuleRep, N: ModuleRep) -> np.ndarray:
    if M.algebra != N.algebra:
        raise AlgebraMismatch("Hom between modules over different algebras")
    return intertwiners(M.generator_action, N.generator_action, M.dim, N.dim, M.p)


def hom_space(M: ModuleRep, N: ModuleRep) -> list:
    from .algebra import ModuleMap

    return [ModuleMap(M, N, f, validate=False) for f in hom_basis(M, N)]


def hom_dim(M: ModuleRep, N: ModuleRep) -> int:
    return len(hom_basis(M, N))


def bimodule_hom_basis(B: BimoduleRep, C: BimoduleRep) -> np.ndarray:
    if B.left_over != C.left_over or B.right_over != C.right_over:
        raise AlgebraMismatch("bimodule Hom over different algebras")
    return intertwiners(B.generator_actions, C.generator_actions, B.dim, C.dim, B.p)


def _coords(basis: np.ndarray, mats: np.ndarray, p: int) -> np.ndarray:
    """Coordinates (columns) of each matrix in ``mats`` in the span of ``basis``."""
    k = basis.shape[0]
    if mats.shape[0] == 0:
        return np.zeros((k, 0), dtype=np.int64)
    if k == 0:
        if np.any(mats % p):
            raise ValueError("matrix outside the span")
        return np.zeros((0, mats.shape[0]), dtype=np.int64)
    x = solve(basis.reshape(k, -1).T, mats.reshape(mats.shape[0], -1).T, p)
    if x is None:
        raise ValueError("matrix outside the span")
    return x


@dataclass
class HomBimodule:
    """Hom_L(B, C) for an L-S bimodule B and an L-T bimodule C, as an S-T bimodule."""

    bimodule: BimoduleRep
    basis: np.ndarray

    def coords(self, mats: np.ndarray) -> np.ndarray:
        return _coords(self.basis, np.asarray(mats), self.bimodule.p)


def hom_bimodule(B: BimoduleRep, C: BimoduleRep) -> HomBimodule:
    if B.left_over != C.left_over:
        raise AlgebraMismatch("Hom over different algebras")
    p = B.p
    basis = intertwiners(B.left[list(B.left_over.generators)], C.left[list(C.left_over.generators)],
                         B.dim, C.dim, p)
    k = basis.shape[0]
    # (s.f)(b) = f(b s), (f.t)(b) = f(b) t
    left = np.zeros((B.right_over.dim, k, k), dtype=np.int64)
    right = np.zeros((C.right_over.dim, k, k), dtype=np.int64)
    if k:
        for s in range(B.right_over.dim):
            left[s] = _coords(basis, np.einsum("kab,bc->kac", basis, B.right[s]) % p, p)
        for t in range(C.right_over.dim):
            right[t] = _coords(basis, np.einsum("ab,kbc->kac", C.right[t], basis) % p, p)
    bim = BimoduleRep(B.right_over, C.right_over, k, left, right, validate=False)
    return HomBimodule(bim, basis)


@dataclass
class Dual:
    """M* = Hom_A(M, A) as a module over opposite(A), with its defining basis."""

    module: ModuleRep
    basis: np.ndarray
    source: ModuleRep

    def coords(self, mats) -> np.ndarray:
        return _coords(self.basis, np.asarray(mats), self.module.p)


@lru_cache(maxsize=4096)
def dual_star(M: ModuleRep) -> Dual:
    hb = hom_bimodule(as_left_bimodule(M), regular_bimodule(M.algebra))
    return Dual(hb.bimodule.right_module(), hb.basis, M)


def dual_star_bimodule(B: BimoduleRep) -> HomBimodule:
    """Hom_L(B, L) for an L-S bimodule B, as an S-L bimodule."""
    return hom_bimodule(B, regular_bimodule(B.left_over))


def dual_map(f: np.ndarray, M: ModuleRep, N: ModuleRep) -> np.ndarray:
    """f*: N* -> M* in the bases of ``dual_star``, for f: M -> N."""
    dm, dn = dual_star(M), dual_star(N)
    p = M.p
    if dn.basis.shape[0] == 0:
        return np.zeros((dm.basis.shape[0], 0), dtype=np.int64)
    return dm.coords(np.einsum("kab,bc->kac", dn.basis, f) % p)


def vector_dual(M: ModuleRep) -> ModuleRep:
    """Linear dual D(M) with transposed actions, a module over the opposite algebra."""
    return ModuleRep(opposite(M.algebra), M.dim, np.transpose(M.action, (0, 2, 1)), validate=False)


def vector_dual_bimodule(B: BimoduleRep) -> BimoduleRep:
    return BimoduleRep(B.right_over, B.left_over, B.dim, np.transpose(B.right, (0, 2, 1)),
                       np.transpose(B.left, (0, 2, 1)), validate=False)


# ---------------------------------------------------------------------------
# submodules and quotients


def generated_submodule(M: ModuleRep, vectors: np.ndarray) -> np.ndarray:
    """Basis (columns) of the submodule generated by the given columns."""
    p = M.p
    span = column_space(np.asarray(vectors).reshape(M.dim, -1), p)
    while True:
        nxt = column_space(np.concatenate([span] + [g @ span % p for g in M.generator_action], axis=1), p)
        if nxt.shape[1] == span.shape[1]:
            return nxt
        span = nxt


def submodule(M: ModuleRep, U: np.ndarray) -> ModuleRep:
    """Module structure on the invariant subspace with basis columns ``U``."""
    p, k = M.p, U.shape[1]
    if k == 0:
        return zero_module(M.algebra)
    rhs = np.concatenate([a @ U % p for a in M.action], axis=1)
    x = solve(U, rhs, p)
    if x is None:
        raise ValueError("subspace is not a submodule")
    act = x.reshape(k, M.algebra.dim, k).transpose(1, 0, 2)
    return ModuleRep(M.algebra, k, act, validate=False)


@dataclass
class Quotient:
    module: ModuleRep
    projection: np.ndarray
    lift: np.ndarray


def quotient(M: ModuleRep, U: np.ndarray) -> Quotient:
    p = M.p
    U = column_space(U, p) if U.size else np.zeros((M.dim, 0), np.int64)
    k = U.shape[1]
    b, binv = complete_basis(U, p)
    q = M.dim - k
    act = np.einsum("ab,ibc,cd->iad", binv, M.action, b) % p
    mod = ModuleRep(M.algebra, q, act[:, k:, k:], validate=False)
    return Quotient(mod, binv[k:, :].copy(), b[:, k:].copy())


def subquotient(M: ModuleRep, Z: np.ndarray, B: np.ndarray) -> ModuleRep:
    """Z/B for invariant subspaces B ⊆ Z (basis columns)."""
    p = M.p
    sub = submodule(M, Z)
    if B.size == 0 or B.shape[1] == 0:
        return sub
    bz = solve(Z, B, p)
    return quotient(sub, bz).module


def module_radical(M: ModuleRep) -> np.ndarray:
    st = algebra_structure(M.algebra)
    p = M.p
    if st.radical.shape[1] == 0 or M.dim == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    mats = [M.act(st.radical[:, j]) for j in range(st.radical.shape[1])]
    return column_space(np.concatenate(mats, axis=1), p)


def top(M: ModuleRep) -> ModuleRep:
    return quotient(M, module_radical(M)).module


def socle(M: ModuleRep) -> np.ndarray:
    """Basis of {m : J m = 0}."""
    st = algebra_structure(M.algebra)
    if st.radical.shape[1] == 0 or M.dim == 0:
        return np.eye(M.dim, dtype=np.int64)
    stacked = np.concatenate([M.act(st.radical[:, j]) for j in range(st.radical.shape[1])], axis=0)
    return kernel_basis(stacked, M.p)


# ---------------------------------------------------------------------------
# algebra-level data: idempotents, indecomposable projectives, simples


@dataclass(frozen=True)
class ProjectiveSummand:
    """A e with its basis U (columns, in algebra coordinates)."""

    idempotent: np.ndarray
    basis: np.ndarray
    module: ModuleRep
    label: int


@dataclass
class AlgebraStructure:
    algebra: Algebra
    idempotents: list
    classes: list
    radical: np.ndarray
    projectives: list  # one ProjectiveSummand per class
    simples: list
    free: ProjectiveSummand


def _summand_for(A: Algebra, e: np.ndarray, label: int) -> ProjectiveSummand:
    p = A.p
    U = column_space(A.right_mult_of(e), p)
    return ProjectiveSummand(e, U, submodule(regular_module(A), U), label)


@lru_cache(maxsize=256)
def algebra_structure(A: Algebra) -> AlgebraStructure:
    ma = regular_matrix_algebra(A)
    rad = radical(ma)
    idems = [E @ A.unit % A.p for E in primitive_idempotents(ma)]
    classes = idempotent_classes(ma, primitive_idempotents(ma))
    reps = {}
    for e, c in zip(idems, classes):
        reps.setdefault(c, e)
    projectives = [_summand_for(A, reps[c], c) for c in sorted(reps)]
    simples = []
    for P in projectives:
        simples.append(quotient(P.module, _radical_in(P.module, rad)).module)
    free = ProjectiveSummand(A.unit.copy(), np.eye(A.dim, dtype=np.int64), regular_module(A), -1)
    return AlgebraStructure(A, idems, classes, rad, projectives, simples, free)


def _radical_in(M: ModuleRep, rad: np.ndarray) -> np.ndarray:
    if rad.shape[1] == 0 or M.dim == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    return column_space(np.concatenate([M.act(rad[:, j]) for j in range(rad.shape[1])], axis=1), M.p)


def radical_basis(A: Algebra) -> np.ndarray:
    return algebra_structure(A).radical


def simple_modules(A: Algebra) -> list:
    return list(algebra_structure(A).simples)


def indecomposable_projectives(A: Algebra) -> list:
    return [P.module for P in algebra_structure(A).projectives]


# ---------------------------------------------------------------------------
# projective terms and covers


@dataclass
class ProjectiveTerm:
    """A direct sum of summands A e, remembered so Hom out of it is cheap."""

    algebra: Algebra
    summands: list

    @property
    def module(self) -> ModuleRep:
        return direct_sum([s.module for s in self.summands], self.algebra)

    @property
    def dim(self) -> int:
        return sum(s.module.dim for s in self.summands)

    @property
    def labels(self) -> tuple:
        return tuple(s.label for s in self.summands)


def hom_from_projective(P: ProjectiveTerm, N: ModuleRep) -> np.ndarray:
    """Basis of Hom(P, N) using Hom(A e, N) = e N."""
    p = N.p
    blocks = []
    offsets = np.cumsum([0] + [s.module.dim for s in P.summands])
    total = int(offsets[-1])
    for i, s in enumerate(P.summands):
        eN = column_space(N.act(s.idempotent), p)
        for j in range(eN.shape[1]):
            v = eN[:, j]
            f = np.zeros((N.dim, total), dtype=np.int64)
            f[:, offsets[i]:offsets[i + 1]] = np.stack(
                [N.act(s.basis[:, t]) @ v % p for t in range(s.basis.shape[1])], axis=1)
            blocks.append(f)
    if not blocks:
        return np.zeros((0, N.dim, total), dtype=np.int64)
    return np.array(blocks)


def _map_from_summand(s: ProjectiveSummand, M: ModuleRep, v: np.ndarray) -> np.ndarray:
    return np.stack([M.act(s.basis[:, t]) @ v % M.p for t in range(s.basis.shape[1])], axis=1)


@dataclass
class Cover:
    term: ProjectiveTerm
    epi: np.ndarray

    @property
    def module(self) -> ModuleRep:
        return self.term.module


def projective_cover(M: ModuleRep) -> Cover:
    """Minimal: one summand A e per simple summand of the top of M."""
    st = algebra_structure(M.algebra)
    p = M.p
    W = module_radical(M)
    summands, cols = [], []
    for P in st.projectives:
        eM = column_space(M.act(P.idempotent), p)
        for j in range(eM.shape[1]):
            if W.shape[1] == M.dim:
                break
            v = eM[:, j]
            if rank(np.column_stack([W, v]), p) == W.shape[1]:
                continue
            img = _map_from_summand(P, M, v)
            summands.append(P)
            cols.append(img)
            W = column_space(np.concatenate([W, img], axis=1), p)
    if W.shape[1] != M.dim:
        raise RuntimeError("projective cover construction did not reach the module")
    epi = np.concatenate(cols, axis=1) if cols else np.zeros((M.dim, 0), np.int64)
    return Cover(ProjectiveTerm(M.algebra, summands), epi)


def free_cover(M: ModuleRep) -> Cover:
    """A^g -> M on greedily chosen generators (not minimal in general)."""
    st = algebra_structure(M.algebra)
    p = M.p
    W = np.zeros((M.dim, 0), dtype=np.int64)
    summands, cols = [], []
    for j in range(M.dim):
        if W.shape[1] == M.dim:
            break
        v = np.eye(M.dim, dtype=np.int64)[:, j]
        if rank(np.column_stack([W, v]), p) == W.shape[1]:
            continue
        img = _map_from_summand(st.free, M, v)
        summands.append(st.free)
        cols.append(img)
        W = column_space(np.concatenate([W, img], axis=1), p)
    epi = np.concatenate(cols, axis=1) if cols else np.zeros((M.dim, 0), np.int64)
    return Cover(ProjectiveTerm(M.algebra, summands), epi)


def is_projective(M: ModuleRep) -> bool:
    return projective_cover(M).term.dim == M.dim


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """P_L -> ... -> P_0 -> M with d[i-1]: P_i -> P_{i-1} and kernels Ω^i ⊂ P_{i-1}."""

    of: ModuleRep
    terms: list
    differentials: list
    augmentation: np.ndarray
    syzygies: list = field(default_factory=list)
    syzygy_inclusions: list = field(default_factory=list)
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term(self, i: int) -> ModuleRep:
        return self.terms[i].module

    def syzygy(self, n: int) -> ModuleRep:
        return self.of if n == 0 else self.syzygies[n - 1]

    def differential(self, i: int) -> np.ndarray:
        """The map out of P_i (the augmentation for i = 0)."""
        return self.augmentation if i == 0 else self.differentials[i - 1]

    def validate(self) -> bool:
        p = self.of.p
        if rank(self.augmentation, p) != self.of.dim:
            return False
        for i in range(1, len(self.terms)):
            d_prev, d = self.differential(i - 1), self.differential(i)
            if np.any(d_prev @ d % p):
                return False
            if rank(d, p) != self.terms[i - 1].dim - rank(d_prev, p):
                return False
            src, tgt = self.term(i), self.term(i - 1)
            if np.any((d @ src.action - np.einsum("iab,bc->iac", tgt.action, d)) % p):
                return False
            if self.minimal:
                rad = module_radical(tgt)
                if rank(np.concatenate([rad, d], axis=1), p) != rad.shape[1]:
                    return False
        return True


def _extend(res: Resolution, length: int, padded: bool):
    p = res.of.p
    while len(res.terms) <= length:
        i = len(res.terms)
        if i == 0:
            target, incl = res.of, np.eye(res.of.dim, dtype=np.int64)
        else:
            target, incl = res.syzygies[-1], res.syzygy_inclusions[-1]
        cover = free_cover(target) if padded else projective_cover(target)
        term, epi = cover.term, cover.epi
        if padded:
            # a contractible A -> A pair: the extra summand maps to zero here
            st = algebra_structure(res.of.algebra)
            term = ProjectiveTerm(term.algebra, term.summands + [st.free])
            epi = np.concatenate([epi, np.zeros((target.dim, res.of.algebra.dim), np.int64)], axis=1)
        d = incl @ epi % p
        res.terms.append(term)
        if i == 0:
            res.augmentation = d
        else:
            res.differentials.append(d)
        K = kernel_basis(d, p) if term.dim else np.zeros((0, 0), np.int64)
        res.syzygy_inclusions.append(K)
        res.syzygies.append(submodule(term.module, K) if K.shape[1] else zero_module(res.of.algebra))


_RESOLUTIONS: dict = {}


def minimal_projective_resolution(M: ModuleRep, length: int) -> Resolution:
    res = _RESOLUTIONS.get(M)
    if res is None:
        res = Resolution(M, [], [], np.zeros((M.dim, 0), np.int64), minimal=True)
        _RESOLUTIONS[M] = res
    _extend(res, length, padded=False)
    return Resolution(M, res.terms[:length + 1], res.differentials[:length], res.augmentation,
                      res.syzygies[:length + 1], res.syzygy_inclusions[:length + 1], True)


def padded_projective_resolution(M: ModuleRep, length: int) -> Resolution:
    res = Resolution(M, [], [], np.zeros((M.dim, 0), np.int64), minimal=False)
    _extend(res, length, padded=True)
    return res


def syzygy(M: ModuleRep, n: int) -> ModuleRep:
    if n == 0:
        return M
    return minimal_projective_resolution(M, n - 1).syzygy(n)


def projective_dimension_at_most(M: ModuleRep, t: int) -> bool:
    return syzygy(M, t + 1).dim == 0


pd_at_most = projective_dimension_at_most


def minimal_injective_resolution(M: ModuleRep, length: int) -> list:
    """Injective terms I^0..I^length of M, as D of a resolution of D(M)."""
    res = minimal_projective_resolution(vector_dual(M), length)
    return [vector_dual(res.term(i)) for i in range(length + 1)]


# ---------------------------------------------------------------------------
# Ext


@dataclass
class ExtValue:
    i: int
    dim: int
    module: Optional[ModuleRep] = None


def _hom_complex(res: Resolution, N: ModuleRep, upto: int):
    """Hom bases H_j = Hom(P_j, N) and the induced maps H_{j-1} -> H_j."""
    p = N.p
    bases = [hom_from_projective(res.terms[j], N) for j in range(upto + 1)]
    maps = [None]
    for j in range(1, upto + 1):
        d = res.differential(j)
        prev, cur = bases[j - 1], bases[j]
        if prev.shape[0] == 0 or cur.shape[0] == 0:
            maps.append(np.zeros((cur.shape[0], prev.shape[0]), np.int64))
            continue
        maps.append(_coords(cur, np.einsum("kab,bc->kac", prev, d) % p, p))
    return bases, maps


def ext_dims(M: ModuleRep, N: ModuleRep, upto: int, resolution: Optional[Resolution] = None) -> list:
    if M.algebra != N.algebra:
        raise AlgebraMismatch("Ext between modules over different algebras")
    res = resolution or minimal_projective_resolution(M, upto + 1)
    p = N.p
    bases, maps = _hom_complex(res, N, upto + 1)
    ranks = [0] + [rank(m, p) if m.size else 0 for m in maps[1:]]
    return [bases[i].shape[0] - ranks[i + 1] - ranks[i] for i in range(upto + 1)]


def ext(M: ModuleRep, N: ModuleRep, i: int, resolution: Optional[Resolution] = None) -> ExtValue:
    dim = ext_dims(M, N, i, resolution)[i]
    module = None
    if N == regular_module(N.algebra):
        module = ext_module(M, i, resolution)
    return ExtValue(i, dim, module)


def ext_module(M: ModuleRep, i: int, resolution: Optional[Resolution] = None) -> ModuleRep:
    """Ext^i(M, A) with its right A-module structure (a module over opposite(A))."""
    A = M.algebra
    p = A.p
    res = resolution or minimal_projective_resolution(M, i + 1)
    R = regular_module(A)
    bases, maps = _hom_complex(res, R, i + 1)
    H = bases[i]
    k = H.shape[0]
    op = opposite(A)
    if k == 0:
        return zero_module(op)
    act = np.array([_coords(H, np.einsum("ab,kbc->kac", A.right_mult[b], H) % p, p)
                    for b in range(A.dim)])
    cochains = ModuleRep(op, k, act, validate=False)
    out = maps[i + 1]
    Z = kernel_basis(out, p) if out.size else np.eye(k, dtype=np.int64)
    B = column_space(maps[i], p) if i > 0 and maps[i].size else np.zeros((k, 0), np.int64)
    return subquotient(cochains, Z, B)


# ---------------------------------------------------------------------------
# tensor products


@dataclass
class Tensor:
    bimodule: BimoduleRep
    projection: np.ndarray
    lift: np.ndarray


def tensor_over(X: BimoduleRep, Y: BimoduleRep) -> Tensor:
    """X ⊗_A Y for an S-A bimodule X and an A-T bimodule Y, as an S-T bimodule."""
    if X.right_over != Y.left_over:
        raise AlgebraMismatch("tensor over mismatched algebras")
    p = X.p
    A = Y.left_over
    ix, iy = np.eye(X.dim, dtype=np.int64), np.eye(Y.dim, dtype=np.int64)
    rels = [np.kron(X.right[a], iy) - np.kron(ix, Y.left[a]) for a in A.generators]
    n = X.dim * Y.dim
    U = column_space(np.concatenate(rels, axis=1) % p, p) if rels and n else np.zeros((n, 0), np.int64)
    b, binv = complete_basis(U, p)
    k = U.shape[1]
    q = n - k

    def push(mats):
        return np.array([(binv @ m @ b % p)[k:, k:] for m in mats]).reshape(len(mats), q, q)

    left = push([np.kron(s, iy) for s in X.left])
    right = push([np.kron(ix, t) for t in Y.right])
    bim = BimoduleRep(X.left_over, Y.right_over, q, left, right, validate=False)
    return Tensor(bim, binv[k:, :].copy(), b[:, k:].copy())


# ---------------------------------------------------------------------------
# transpose


@dataclass
class TransposeData:
    module: ModuleRep
    p1: ModuleRep
    p0: ModuleRep
    d1: np.ndarray
    augmentation: np.ndarray
    m_star: Dual
    p0_star: Dual
    p1_star: Dual
    eps_star: np.ndarray
    d1_star: np.ndarray
    transpose: ModuleRep
    projection: np.ndarray

    def four_term_ranks(self) -> dict:
        p = self.module.p
        r_eps = rank(self.eps_star, p) if self.eps_star.size else 0
        r_d1 = rank(self.d1_star, p) if self.d1_star.size else 0
        r_pi = rank(self.projection, p) if self.projection.size else 0
        return {
            "dim_m_star": self.m_star.module.dim,
            "dim_p0_star": self.p0_star.module.dim,
            "dim_p1_star": self.p1_star.module.dim,
            "dim_tr": self.transpose.dim,
            "rank_eps_star": r_eps,
            "rank_d1_star": r_d1,
            "rank_projection": r_pi,
        }

    def four_term_exact(self) -> bool:
        p = self.module.p
        r = self.four_term_ranks()
        if self.eps_star.size and self.d1_star.size and np.any(self.d1_star @ self.eps_star % p):
            return False
        if self.d1_star.size and self.projection.size and np.any(self.projection @ self.d1_star % p):
            return False
        return (r["rank_eps_star"] == r["dim_m_star"]
                and r["rank_eps_star"] == r["dim_p0_star"] - r["rank_d1_star"]
                and r["rank_projection"] == r["dim_tr"]
                and r["dim_tr"] == r["dim_p1_star"] - r["rank_d1_star"])


def _check_presentation(M, P1, P0, d1, eps):
    p = M.p
    if eps.shape != (M.dim, P0.dim) or d1.shape != (P0.dim, P1.dim):
        raise InvalidPresentation("map shapes do not match the modules")
    for src, tgt, f in ((P0, M, eps), (P1, P0, d1)):
        if np.any((f @ src.action - np.einsum("iab,bc->iac", tgt.action, f)) % p):
            raise InvalidPresentation("presentation maps are not module maps")
    if rank(eps, p) != M.dim:
        raise InvalidPresentation("augmentation is not surjective")
    if np.any(eps @ d1 % p) or rank(d1, p) != P0.dim - M.dim:
        raise InvalidPresentation("sequence is not exact at P0")
    if not (is_projective(P0) and is_projective(P1)):
        raise InvalidPresentation("presentation terms are not projective")


def transpose(M: ModuleRep, presentation=None) -> TransposeData:
    """Tr M = Coker(P0* -> P1*); ``presentation`` is (P1, P0, d1, eps) if given."""
    p = M.p
    if presentation is None:
        res = minimal_projective_resolution(M, 1)
        P1, P0 = res.term(1), res.term(0)
        d1, eps = res.differential(1), res.augmentation
    else:
        P1, P0, d1, eps = presentation
        d1, eps = np.asarray(d1) % p, np.asarray(eps) % p
        _check_presentation(M, P1, P0, d1, eps)
    ms, p0s, p1s = dual_star(M), dual_star(P0), dual_star(P1)
    eps_star = dual_map(eps, P0, M)
    d1_star = dual_map(d1, P1, P0)
    img = column_space(d1_star, p) if d1_star.size else np.zeros((p1s.module.dim, 0), np.int64)
    q = quotient(p1s.module, img)
    return TransposeData(M, P1, P0, d1, eps, ms, p0s, p1s, eps_star, d1_star, q.module, q.projection)


def tr(M: ModuleRep) -> ModuleRep:
    return transpose(M).transpose


@dataclass
class Evaluation:
    double_dual: ModuleRep
    delta: np.ndarray

    def kernel_dim(self) -> int:
        return self.delta.shape[1] - (rank(self.delta, self.double_dual.p) if self.delta.size else 0)

    def cokernel_dim(self) -> int:
        return self.double_dual.dim - (rank(self.delta, self.double_dual.p) if self.delta.size else 0)


def evaluation_map(M: ModuleRep) -> Evaluation:
    """δ_M: M -> M**, m -> (f -> f(m))."""
    p = M.p
    ms = dual_star(M)
    mss = dual_star(ms.module)
    k = ms.basis.shape[0]
    if M.dim == 0 or mss.basis.shape[0] == 0:
        return Evaluation(mss.module, np.zeros((mss.module.dim, M.dim), np.int64))
    images = np.zeros((M.dim, M.algebra.dim, k), dtype=np.int64)
    for j in range(M.dim):
        images[j] = np.stack([ms.basis[t][:, j] for t in range(k)], axis=1) if k else 0
    delta = mss.coords(images % p)
    return Evaluation(mss.module, delta)


# ---------------------------------------------------------------------------
# torsionfree and Gorenstein-projective tests


@dataclass
class TorsionfreeReport:
    k: int
    verdict: bool
    first_failure: Optional[int]
    ext_dims: list


def is_k_torsionfree(M: ModuleRep, k: int) -> TorsionfreeReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    T = tr(M)
    dims = ext_dims(T, regular_module(T.algebra), k)[1:]
    first = next((i + 1 for i, d in enumerate(dims) if d), None)
    return TorsionfreeReport(k, first is None, first, dims)


@lru_cache(maxsize=64)
def is_self_injective(A: Algebra) -> bool:
    return is_projective(vector_dual(regular_module(opposite(A))))


@dataclass
class GpVerdict:
    cutoff: int
    status: str  # confirmed_exact | yes_up_to_cutoff | no
    witness: Optional[dict] = None

    @property
    def positive(self) -> bool:
        return self.status in ("confirmed_exact", "yes_up_to_cutoff")


def is_totally_reflexive_up_to(M: ModuleRep, cutoff: int) -> GpVerdict:
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    if is_projective(M):
        return GpVerdict(cutoff, "confirmed_exact", {"reason": "projective"})
    if is_self_injective(M.algebra):
        return GpVerdict(cutoff, "confirmed_exact", {"reason": "self-injective algebra"})
    R = regular_module(M.algebra)
    dims = ext_dims(M, R, cutoff)
    for i in range(1, cutoff + 1):
        if dims[i]:
            return GpVerdict(cutoff, "no", {"side": "module", "degree": i, "dim": dims[i]})
    ms = dual_star(M).module
    dims_star = ext_dims(ms, regular_module(ms.algebra), cutoff)
    for i in range(1, cutoff + 1):
        if dims_star[i]:
            return GpVerdict(cutoff, "no", {"side": "dual", "degree": i, "dim": dims_star[i]})
    ev = evaluation_map(M)
    if ev.kernel_dim() or ev.cokernel_dim():
        return GpVerdict(cutoff, "no", {"side": "evaluation", "kernel": ev.kernel_dim(),
                                        "cokernel": ev.cokernel_dim()})
    return GpVerdict(cutoff, "yes_up_to_cutoff")

