"""Isomorphism search and Krull-Schmidt decomposition.

Search order for an invertible element of Hom(M, N): hom-space dimension
filter, the basis itself, the full coordinate hypercube when it is small,
seeded random combinations, and finally a decomposition into indecomposables.
The last stage is complete: for indecomposable X and Y, the non-invertible
maps X -> Y form a proper subspace when X and Y are isomorphic, so some basis
element of Hom(X, Y) is invertible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import AlgebraMismatch, BimoduleRep, ModuleRep, bimodule_as_module, direct_sum
from .exactla import column_space, is_invertible, solve
from .homcore import bimodule_hom_basis, hom_basis, is_projective, submodule
from .structure import endomorphism_algebra, idempotent_classes, is_local, primitive_idempotents

HYPERCUBE_BOUND = 256
RANDOM_TRIES = 16


@dataclass
class IsoResult:
    matrix: Optional[np.ndarray]
    strategy: str

    def __bool__(self) -> bool:
        return self.matrix is not None


def _search(basis: np.ndarray, p: int, seed: int) -> tuple:
    k = basis.shape[0]
    for f in basis:
        if is_invertible(f, p):
            return f % p, "basis"
    if p ** k <= HYPERCUBE_BOUND:
        for coeffs in itertools.product(range(p), repeat=k):
            if not any(coeffs):
                continue
            f = np.einsum("i,ijk->jk", np.array(coeffs), basis) % p
            if is_invertible(f, p):
                return f, "hypercube"
        return None, "hypercube"
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_TRIES):
        f = np.einsum("i,ijk->jk", rng.integers(0, p, k), basis) % p
        if is_invertible(f, p):
            return f, "random"
    return None, "undecided"


def is_isomorphic(M: ModuleRep, N: ModuleRep, seed: int = 0) -> IsoResult:
    if M.algebra != N.algebra:
        raise AlgebraMismatch("isomorphism test across different algebras")
    p = M.p
    if M.dim != N.dim:
        return IsoResult(None, "dimension")
    if M.dim == 0:
        return IsoResult(np.zeros((0, 0), np.int64), "zero")
    if M == N:
        return IsoResult(np.eye(M.dim, dtype=np.int64), "identity")
    H = hom_basis(M, N)
    k = H.shape[0]
    if k == 0 or k != hom_basis(M, M).shape[0] or k != hom_basis(N, N).shape[0]:
        return IsoResult(None, "hom-dimension")
    f, strategy = _search(H, p, seed)
    if f is not None or strategy == "hypercube":
        return IsoResult(f, strategy)
    return _iso_by_decomposition(M, N, seed)


@dataclass
class Summand:
    module: ModuleRep
    inclusion: np.ndarray
    projection: np.ndarray
    label: int


@dataclass
class Decomposition:
    module: ModuleRep
    summands: list

    def grouped(self) -> list:
        """(representative, multiplicity) per isomorphism class, first-seen order."""
        order, counts = [], {}
        for s in self.summands:
            if s.label not in counts:
                order.append(s)
                counts[s.label] = 0
            counts[s.label] += 1
        return [(s.module, counts[s.label]) for s in order]

    def certify(self) -> bool:
        p = self.module.p
        d = self.module.dim
        if not self.summands:
            return d == 0
        total = sum(s.inclusion @ s.projection for s in self.summands) % p
        if not np.array_equal(total, np.eye(d, dtype=np.int64)):
            return False
        for i, a in enumerate(self.summands):
            for j, b in enumerate(self.summands):
                prod = b.projection @ a.inclusion % p
                want = np.eye(a.module.dim, dtype=np.int64) if i == j else np.zeros_like(prod)
                if not np.array_equal(prod, want):
                    return False
        return True


def endomorphism_ring(M: ModuleRep):
    return endomorphism_algebra(list(hom_basis(M, M)), M.dim, M.p)


def is_indecomposable(M: ModuleRep) -> bool:
    return M.dim > 0 and is_local(endomorphism_ring(M))


def decompose(M: ModuleRep, seed: int = 0) -> Decomposition:
    p = M.p
    if M.dim == 0:
        return Decomposition(M, [])
    end = endomorphism_ring(M)
    idems = primitive_idempotents(end, seed)
    labels = idempotent_classes(end, idems)
    out = []
    for E, lab in zip(idems, labels):
        U = column_space(E, p)
        proj = solve(U, E, p)
        out.append(Summand(submodule(M, U), U, proj, lab))
    order = sorted(range(len(out)), key=lambda i: (out[i].module.dim, out[i].label, i))
    return Decomposition(M, [out[i] for i in order])


def decompose_indecomposables(M: ModuleRep, seed: int = 0) -> list:
    return decompose(M, seed).grouped()


def stable_part(M: ModuleRep) -> ModuleRep:
    """Direct sum of the non-projective indecomposable summands of M."""
    keep = [s.module for s in decompose(M).summands if not is_projective(s.module)]
    return direct_sum(keep, M.algebra)


def is_stably_isomorphic(M: ModuleRep, N: ModuleRep, seed: int = 0) -> tuple:
    """(stable part of M, stable part of N, iso between them) for isomorphism up to projective summands."""
    sm, sn = stable_part(M), stable_part(N)
    return sm, sn, is_isomorphic(sm, sn, seed)


def indecomposable_iso(X: ModuleRep, Y: ModuleRep) -> Optional[np.ndarray]:
    """Complete test for indecomposable X, Y: some basis map is invertible."""
    if X.dim != Y.dim:
        return None
    for f in hom_basis(X, Y):
        if is_invertible(f, X.p):
            return f % X.p
    return None


def _iso_by_decomposition(M: ModuleRep, N: ModuleRep, seed: int) -> IsoResult:
    p = M.p
    dm, dn = decompose(M, seed), decompose(N, seed)
    if len(dm.summands) != len(dn.summands):
        return IsoResult(None, "decomposition")
    used = [False] * len(dn.summands)
    total = np.zeros((N.dim, M.dim), dtype=np.int64)
    for a in dm.summands:
        for j, b in enumerate(dn.summands):
            if used[j]:
                continue
            f = indecomposable_iso(a.module, b.module)
            if f is not None:
                used[j] = True
                total = (total + b.inclusion @ f @ a.projection) % p
                break
        else:
            return IsoResult(None, "decomposition")
    return IsoResult(total, "decomposition")


def is_bimodule_isomorphic(B: BimoduleRep, C: BimoduleRep, seed: int = 0) -> IsoResult:
    if B.left_over != C.left_over or B.right_over != C.right_over:
        raise AlgebraMismatch("bimodules over different algebras")
    if B.dim != C.dim:
        return IsoResult(None, "dimension")
    if B.dim == 0:
        return IsoResult(np.zeros((0, 0), np.int64), "zero")
    H = bimodule_hom_basis(B, C)
    k = H.shape[0]
    if k == 0 or k != bimodule_hom_basis(B, B).shape[0] or k != bimodule_hom_basis(C, C).shape[0]:
        return IsoResult(None, "hom-dimension")
    f, strategy = _search(H, B.p, seed)
    if f is not None or strategy == "hypercube":
        return IsoResult(f, strategy)
    # bimodules are modules over the enveloping algebra; same matrices
    res = _iso_by_decomposition(bimodule_as_module(B), bimodule_as_module(C), seed)
    return IsoResult(res.matrix, "enveloping-" + res.strategy)


def is_iso_witness(M: ModuleRep, N: ModuleRep, f: np.ndarray) -> bool:
    p = M.p
    f = np.asarray(f) % p
    if f.shape != (N.dim, M.dim) or (M.dim and not is_invertible(f, p)):
        return False
    return not np.any((f @ M.action - np.einsum("iab,bc->iac", N.action, f)) % p)


def is_bimodule_iso_witness(B: BimoduleRep, C: BimoduleRep, f: np.ndarray) -> bool:
    p = B.p
    f = np.asarray(f) % p
    if f.shape != (C.dim, B.dim) or (B.dim and not is_invertible(f, p)):
        return False
    for sa, ta in ((B.left, C.left), (B.right, C.right)):
        if np.any((f @ sa - np.einsum("iab,bc->iac", ta, f)) % p):
            return False
    return True
